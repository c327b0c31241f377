#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invlab/circuits.hpp"
#include "invlab/invariants.hpp"
#include "invlab/rng.hpp"
#include "invlab/states.hpp"

using namespace invlab;

namespace {

PureState ket(std::initializer_list<cplx> amps) {
  Vec v(static_cast<int>(amps.size()));
  int k = 0;
  for (cplx a : amps) v(k++) = a;
  v /= v.norm();
  return PureState(std::move(v));
}

int count_cswaps(const CircuitIR& circuit) {
  int count = 0;
  for (const auto& g : circuit.gates)
    if (std::holds_alternative<GateControlledSwap>(g)) ++count;
  return count;
}

// implied invariant from the exact ancilla statistics of both s runs
cplx implied_invariant(const std::vector<StateInput>& inputs, int dim) {
  const int n = static_cast<int>(inputs.size());
  const auto [p0_re, p1_re] = simulate_exact(build_cycle_test(n, dim, 0), inputs);
  const auto [p0_im, p1_im] = simulate_exact(build_cycle_test(n, dim, 1), inputs);
  (void)p1_re;
  (void)p1_im;
  return cplx(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im);
}

std::string golden_path(const std::string& name) {
  const char* dir = std::getenv("INVLAB_GOLDEN_DIR");
  if (dir != nullptr) return std::string(dir) + "/" + name;
  return std::string("golden/") + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file ", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cycle-test construction") {
  SUBCASE("order 2 is the SWAP test") {
    const CircuitIR c = build_cycle_test(2, 2, 0);
    CHECK(c.wires.size() == 3);
    CHECK(count_cswaps(c) == 1);
    CHECK_NOTHROW(c.validate());
  }
  SUBCASE("order 3 uses two controlled swaps") {
    CHECK(count_cswaps(build_cycle_test(3, 2, 0)) == 2);
  }
  SUBCASE("order 5 qutrit wire layout") {
    const CircuitIR c = build_cycle_test(5, 3, 1);
    REQUIRE(c.wires.size() == 6);
    CHECK(c.wires[0].dim == 2);
    for (int k = 1; k <= 5; ++k) CHECK(c.wires[k].dim == 3);
    CHECK(count_cswaps(c) == 4);
    CHECK(c.phase_s() == 1);
  }
  SUBCASE("structural invariants are enforced") {
    CircuitIR c = build_cycle_test(3, 2, 0);
    c.gates.push_back(GateControlledSwap{0, 1, 2});  // outside the Hadamard bracket
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    CircuitIR c2 = build_cycle_test(3, 2, 0);
    std::get<GateControlledSwap>(c2.gates[1]).control = 1;
    CHECK_THROWS_AS(c2.validate(), std::invalid_argument);
  }
}

TEST_CASE("exact simulation of swap and cycle tests") {
  const PureState zero = PureState::basis_state(2, 0);
  const PureState one = PureState::basis_state(2, 1);

  SUBCASE("SWAP test on identical states") {
    const auto [p0, p1] = simulate_exact(build_cycle_test(2, 2, 0), {zero, zero});
    CHECK(p0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("SWAP test on orthogonal states") {
    const auto [p0, p1] = simulate_exact(build_cycle_test(2, 2, 0), {zero, one});
    CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("third-order statistics match the analytic Hadamard-test algebra") {
    // p0 = (1 + Re[i^s Delta]) / 2 evaluated for Delta = (1+i)/4
    const std::vector<StateInput> triple{zero, ket({1.0, 1.0}), ket({1.0, cplx(0.0, 1.0)})};
    const auto [p0_re, p1_re] = simulate_exact(build_cycle_test(3, 2, 0), triple);
    const auto [p0_im, p1_im] = simulate_exact(build_cycle_test(3, 2, 1), triple);
    (void)p1_re;
    (void)p1_im;
    CHECK(p0_re == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(p0_im == doctest::Approx(0.375).epsilon(1e-12));
  }
  SUBCASE("wire mismatch is rejected") {
    CHECK_THROWS_AS(simulate_exact(build_cycle_test(2, 2, 0), {zero}), std::invalid_argument);
    CHECK_THROWS_AS(simulate_exact(build_cycle_test(2, 3, 0), {zero, zero}),
                    std::invalid_argument);
  }
}

TEST_CASE("backend equivalence against the analytic invariants") {
  RngStream rng(107);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(3));
    const int n = 1 + static_cast<int>(rng.below(4));
    std::vector<StateInput> inputs;
    std::vector<DensityMatrix> rhos;
    bool any_mixed = false;
    for (int k = 0; k < n; ++k) {
      if (rng.uniform() < 0.5) {
        const PureState psi = random_pure_state(d, rng);
        rhos.push_back(DensityMatrix::from_pure(psi));
        inputs.emplace_back(psi);
      } else {
        const DensityMatrix rho = random_ginibre_density(d, 1 + static_cast<int>(rng.below(d)), rng);
        rhos.push_back(rho);
        inputs.emplace_back(rho);
        any_mixed = true;
      }
    }
    (void)any_mixed;
    const cplx expected = bargmann(rhos).value;
    CHECK(std::abs(implied_invariant(inputs, d) - expected) < 1e-10);
  }
}

TEST_CASE("probability sanity across circuit families") {
  RngStream rng(109);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int n = 2 + static_cast<int>(rng.below(3));
    const int s = static_cast<int>(rng.below(2));
    std::vector<StateInput> inputs;
    for (int k = 0; k < n; ++k) inputs.emplace_back(random_pure_state(d, rng));
    const auto [p0, p1] = simulate_exact(build_cycle_test(n, d, s), inputs);
    CHECK(p0 >= 0.0);
    CHECK(p0 <= 1.0);
    CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("shot sampling") {
  const PureState zero = PureState::basis_state(2, 0);
  SUBCASE("degenerate distribution gives all zeros outcome") {
    const ShotRecord rec = sample_shots(build_cycle_test(2, 2, 0), {zero, zero}, 100, 5);
    CHECK(rec.count0 == 100);
    CHECK(rec.count1 == 0);
    CHECK(rec.count0 + rec.count1 == rec.shots);
  }
  SUBCASE("binomial concentration at p0 = 1/2") {
    const PureState one = PureState::basis_state(2, 1);
    const ShotRecord rec = sample_shots(build_cycle_test(2, 2, 0), {zero, one}, 1000000, 17);
    CHECK(std::abs(static_cast<double>(rec.count0) / rec.shots - 0.5) < 0.002);
  }
  SUBCASE("deterministic per seed") {
    const PureState one = PureState::basis_state(2, 1);
    const ShotRecord a = sample_shots(build_cycle_test(2, 2, 0), {zero, one}, 10000, 23);
    const ShotRecord b = sample_shots(build_cycle_test(2, 2, 0), {zero, one}, 10000, 23);
    CHECK(a.count0 == b.count0);
  }
}

TEST_CASE("invariant estimation from shots") {
  const PureState zero = PureState::basis_state(2, 0);
  SUBCASE("order 2 on identical states is exact") {
    const cplx est = estimate_invariant({zero, zero}, 10000, 29);
    CHECK(est == cplx(1.0, 0.0));
  }
  SUBCASE("third-order estimate concentrates") {
    const std::vector<StateInput> triple{zero, ket({1.0, 1.0}), ket({1.0, cplx(0.0, 1.0)})};
    const cplx est = estimate_invariant(triple, 1000000, 31);
    CHECK(std::abs(est - cplx(0.25, 0.25)) < 0.005);
  }
  SUBCASE("real positive triple within the Hoeffding radius") {
    const std::vector<StateInput> triple{zero, ket({0.5, std::sqrt(3.0) / 2.0}),
                                         ket({std::sqrt(3.0) / 2.0, 0.5})};
    const double eps = 0.05;
    const long long shots = 2952;  // hoeffding_samples(0.05, 0.05)
    const cplx est = estimate_invariant(triple, shots, 37);
    CHECK(std::abs(est.real() - 0.375) < eps);
    CHECK(std::abs(est.imag()) < eps);
  }
  SUBCASE("coverage at the planned shot count") {
    // scaled-down version of the acceptance criterion
    RngStream rng(41);
    const long long shots = 2952;
    int within = 0;
    const int instances = 5, reps = 60;
    for (int inst = 0; inst < instances; ++inst) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const int n = 2 + static_cast<int>(rng.below(2));
      std::vector<StateInput> inputs;
      std::vector<DensityMatrix> rhos;
      for (int k = 0; k < n; ++k) {
        const PureState psi = random_pure_state(d, rng);
        rhos.push_back(DensityMatrix::from_pure(psi));
        inputs.emplace_back(psi);
      }
      const cplx truth = bargmann(rhos).value;
      for (int rep = 0; rep < reps; ++rep) {
        const cplx est = estimate_invariant(inputs, shots, rng.next_u64());
        if (std::abs(est - truth) <= 0.05) ++within;
      }
    }
    CHECK(static_cast<double>(within) / (instances * reps) >= 0.9);
  }
}

TEST_CASE("special-purpose circuits match the invariants module") {
  RngStream rng(43);

  SUBCASE("kd circuit on the trivial triple") {
    const PureState zero = PureState::basis_state(2, 0);
    const auto [p0, p1] = simulate_exact(build_kd_circuit(2, 0), {zero, zero, zero});
    (void)p1;
    CHECK(p0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("kd circuit reproduces a generic kd value") {
    const DensityMatrix rho = random_ginibre_density(2, 2, rng);
    const auto bi = OrthonormalBasis::computational(2);
    const auto bf = OrthonormalBasis::fourier(2);
    const std::vector<StateInput> inputs{bi.vector(0), rho, bf.vector(1)};
    const auto [p0_re, p1a] = simulate_exact(build_kd_circuit(2, 0), inputs);
    const auto [p0_im, p1b] = simulate_exact(build_kd_circuit(2, 1), inputs);
    (void)p1a;
    (void)p1b;
    const cplx circuit_value(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im);
    CHECK(std::abs(circuit_value - kd_value(rho, bi.vector(0), bf.vector(1))) < 1e-12);
  }
  SUBCASE("weak-value circuit pair reproduces the -i example") {
    Mat sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    const Observable obs = spectral_decompose(sx);
    const PureState pre = ket({1.0, cplx(0.0, 1.0)});   // |y+>
    const PureState post = PureState::basis_state(2, 1);  // |z->

    const auto [numerator_circuit, denominator_circuit] = build_weak_value_circuits(2, 0);
    const auto numerator_circuit_im = build_weak_value_circuits(2, 1).first;

    cplx numerator = 0.0;
    for (std::size_t idx = 0; idx < obs.eigenvalues().size(); ++idx) {
      for (const Vec& vec : obs.eigenbases()[idx]) {
        const std::vector<StateInput> inputs{post, PureState(vec), pre};
        const auto [p0_re, p1a] = simulate_exact(numerator_circuit, inputs);
        const auto [p0_im, p1b] = simulate_exact(numerator_circuit_im, inputs);
        (void)p1a;
        (void)p1b;
        numerator += obs.eigenvalues()[idx] * cplx(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im);
      }
    }
    const auto [p0_den, p1c] = simulate_exact(denominator_circuit, {post, pre});
    (void)p1c;
    const double denominator = 2.0 * p0_den - 1.0;
    CHECK(denominator == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(numerator / denominator - cplx(0.0, -1.0)) < 1e-12);

    const WeakValueResult exact = weak_value(obs, pre, post);
    CHECK(std::abs(numerator / denominator - exact.value) < 1e-12);
  }
  SUBCASE("ps-qfi circuit measures the fourth-order invariant") {
    const int d = 2;
    const PureState psi = random_pure_state(d, rng);
    Mat g(2, 2);
    g << 1.0, 0.0, 0.0, -1.0;
    const Observable gen = spectral_decompose(g);
    const double theta = 0.4;
    const auto basis = OrthonormalBasis::computational(2);
    const auto fourier = OrthonormalBasis::fourier(2);

    // rho_theta as the invariants module sees it
    Mat u_theta = Mat::Zero(d, d);
    for (std::size_t k = 0; k < gen.eigenvalues().size(); ++k)
      u_theta += std::exp(cplx(0.0, -theta * gen.eigenvalues()[k])) * gen.projectors()[k];
    const Vec psi_theta = u_theta * psi.amplitudes();
    const DensityMatrix rho_theta(psi_theta * psi_theta.adjoint());

    for (int i = 0; i < 2; ++i) {
      for (int ip = 0; ip < 2; ++ip) {
        const std::vector<StateInput> inputs{basis.vector(i), psi, basis.vector(ip),
                                             fourier.vector(0)};
        const auto [p0_re, p1a] =
            simulate_exact(build_psqfi_circuit(d, 0, theta, gen), inputs);
        const auto [p0_im, p1b] =
            simulate_exact(build_psqfi_circuit(d, 1, theta, gen), inputs);
        (void)p1a;
        (void)p1b;
        const cplx circuit_value(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im);
        const cplx expected = bargmann({DensityMatrix::from_pure(basis.vector(i)), rho_theta,
                                        DensityMatrix::from_pure(basis.vector(ip)),
                                        DensityMatrix::from_pure(fourier.vector(0))})
                                  .value;
        CHECK(std::abs(circuit_value - expected) < 1e-12);
      }
    }
  }
  SUBCASE("otoc circuit measures the fine-grained quasiprobability") {
    const int d = 2;
    const DensityMatrix rho = random_ginibre_density(d, d, rng);
    Mat wm(2, 2), vm(2, 2);
    wm << 1.0, 0.0, 0.0, -1.0;
    vm << 0.0, 1.0, 1.0, 0.0;
    const Observable w = spectral_decompose(wm);
    const Observable v = spectral_decompose(vm);
    const Mat u = random_unitary(d, rng);
    const OtocResult reference = otoc(rho, w, v, u);

    std::vector<Vec> v_vecs, w_vecs;
    for (const auto& basis : v.eigenbases())
      for (const Vec& vec : basis) v_vecs.push_back(vec);
    for (const auto& basis : w.eigenbases())
      for (const Vec& vec : basis) w_vecs.push_back(vec);

    for (int v1 = 0; v1 < d; ++v1) {
      for (int w2 = 0; w2 < d; ++w2) {
        for (int v2 = 0; v2 < d; ++v2) {
          for (int w3 = 0; w3 < d; ++w3) {
            const std::vector<StateInput> inputs{PureState(w_vecs[w3]), PureState(v_vecs[v2]),
                                                 PureState(w_vecs[w2]), PureState(v_vecs[v1]),
                                                 rho};
            const auto [p0_re, p1a] = simulate_exact(build_otoc_circuit(d, 0, u), inputs);
            const auto [p0_im, p1b] = simulate_exact(build_otoc_circuit(d, 1, u), inputs);
            (void)p1a;
            (void)p1b;
            const cplx circuit_value(2.0 * p0_re - 1.0, 1.0 - 2.0 * p0_im);
            CHECK(std::abs(circuit_value - reference.fine_grained.at(v1, w2, v2, w3)) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("sampled estimators track the analytic values at 1e6 shots") {
  RngStream rng(47);
  const long long shots = 1000000;
  const double stderr3 = 3.0 / std::sqrt(static_cast<double>(shots));

  SUBCASE("kd point") {
    const DensityMatrix rho = random_ginibre_density(2, 2, rng);
    const auto bi = OrthonormalBasis::computational(2);
    const auto bf = OrthonormalBasis::fourier(2);
    const cplx expected = kd_value(rho, bi.vector(1), bf.vector(0));
    const cplx est = estimate_invariant({bi.vector(1), rho, bf.vector(0)}, shots, 53);
    CHECK(std::abs(est.real() - expected.real()) < stderr3);
    CHECK(std::abs(est.imag() - expected.imag()) < stderr3);
  }
  SUBCASE("otoc fine-grained point") {
    const DensityMatrix rho = random_ginibre_density(2, 2, rng);
    Mat wm(2, 2), vm(2, 2);
    wm << 1.0, 0.0, 0.0, -1.0;
    vm << 0.0, 1.0, 1.0, 0.0;
    const Observable w = spectral_decompose(wm);
    const Observable v = spectral_decompose(vm);
    const Mat u = random_unitary(2, rng);
    const OtocResult reference = otoc(rho, w, v, u);

    std::vector<Vec> v_vecs, w_vecs;
    for (const auto& basis : v.eigenbases())
      for (const Vec& vec : basis) v_vecs.push_back(vec);
    for (const auto& basis : w.eigenbases())
      for (const Vec& vec : basis) w_vecs.push_back(vec);

    // one representative phase-space point, sampled through the otoc circuit
    const std::vector<StateInput> raw_inputs{PureState(w_vecs[1]), PureState(v_vecs[0]),
                                             PureState(w_vecs[0]), PureState(v_vecs[1]), rho};
    const auto [p0_re, p1a] =
        simulate_exact(build_otoc_circuit(2, 0, u), raw_inputs);
    (void)p1a;
    RngStream shot_rng(59);
    const double f0 = static_cast<double>(shot_rng.binomial(shots, p0_re)) / shots;
    CHECK(std::abs((2.0 * f0 - 1.0) - reference.fine_grained.at(1, 0, 0, 1).real()) < stderr3);
  }
}

TEST_CASE("circuit export") {
  SUBCASE("swap test emits four qasm-like lines") {
    const std::string text = export_circuit(build_cycle_test(2, 2, 0), CircuitFormat::qasm_like);
    CHECK(text == "h anc\ncswap anc q1 q2\nh anc\nmeasure anc\n");
  }
  SUBCASE("order-3 s=1 export has two cswaps and one phase line") {
    const std::string text = export_circuit(build_cycle_test(3, 2, 1), CircuitFormat::qasm_like);
    int cswaps = 0, phases = 0;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      if (line.rfind("cswap", 0) == 0) ++cswaps;
      if (line.rfind("s ", 0) == 0) ++phases;
    }
    CHECK(cswaps == 2);
    CHECK(phases == 1);
  }
  SUBCASE("qudit wires cannot be exported as qasm-like text") {
    CHECK_THROWS_WITH_AS(export_circuit(build_cycle_test(2, 3, 0), CircuitFormat::qasm_like),
                         doctest::Contains("unsupported format"), std::invalid_argument);
  }
  SUBCASE("json-ir round trip is byte identical") {
    RngStream rng(61);
    Mat g(2, 2);
    g << 1.0, 0.0, 0.0, -1.0;
    const CircuitIR circuit = build_psqfi_circuit(2, 1, 0.7, spectral_decompose(g));
    const std::string once = export_circuit(circuit, CircuitFormat::json_ir);
    const std::string twice = export_circuit(parse_circuit_json(once), CircuitFormat::json_ir);
    CHECK(once == twice);
  }
  SUBCASE("golden files") {
    CHECK(export_circuit(build_cycle_test(2, 2, 0), CircuitFormat::qasm_like) ==
          read_file(golden_path("swap_test_s0.qasm")));
    CHECK(export_circuit(build_cycle_test(3, 2, 1), CircuitFormat::qasm_like) ==
          read_file(golden_path("cycle3_s1.qasm")));
    CHECK(export_circuit(build_cycle_test(3, 2, 1), CircuitFormat::json_ir) + "\n" ==
          read_file(golden_path("cycle3_s1.json")));
  }
}
