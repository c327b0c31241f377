#include <doctest.h>

#include <cmath>

#include "invlab/invariants.hpp"
#include "invlab/nonclassicality.hpp"
#include "invlab/rng.hpp"
#include "invlab/states.hpp"

using namespace invlab;

namespace {

const double kPi = std::acos(-1.0);

PureState ket(std::initializer_list<cplx> amps) {
  Vec v(static_cast<int>(amps.size()));
  int k = 0;
  for (cplx a : amps) v(k++) = a;
  v /= v.norm();
  return PureState(std::move(v));
}

cplx pure_delta3(const PureState& a, const PureState& b, const PureState& c) {
  return a.inner(b) * b.inner(c) * c.inner(a);
}

OverlapTriple overlaps_of(const PureState& a, const PureState& b, const PureState& c) {
  return {overlap(a, b), overlap(a, c), overlap(b, c)};
}

}  // namespace

TEST_CASE("overlap inequalities") {
  SUBCASE("the 5/4 violation") {
    const WitnessReport report = overlap_inequalities({0.25, 0.75, 0.75});
    CHECK(report.inequality_lhs[2] == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(report.violated[2]);
    CHECK_FALSE(report.violated[0]);
    CHECK_FALSE(report.violated[1]);
  }
  SUBCASE("all-zero triple satisfies everything") {
    const WitnessReport report = overlap_inequalities({0.0, 0.0, 0.0});
    for (int k = 0; k < 3; ++k) {
      CHECK(report.inequality_lhs[k] <= 0.0);
      CHECK_FALSE(report.violated[k]);
    }
  }
  SUBCASE("all-one triple sits on the boundary") {
    const WitnessReport report = overlap_inequalities({1.0, 1.0, 1.0});
    for (int k = 0; k < 3; ++k) {
      CHECK(report.inequality_lhs[k] == doctest::Approx(1.0));
      CHECK_FALSE(report.violated[k]);
    }
  }
  SUBCASE("out-of-range triples rejected") {
    CHECK_THROWS_AS(overlap_inequalities({1.5, 0.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("convex body inequality") {
  SUBCASE("all-one triple saturates it") {
    const auto [lhs, ok] = convex_body_check({1.0, 1.0, 1.0});
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ok);
  }
  SUBCASE("symmetric half triple") {
    const auto [lhs, ok] = convex_body_check({0.5, 0.5, 0.5});
    CHECK(lhs == doctest::Approx(1.5 - 2.0 * std::pow(0.5, 1.5)).epsilon(1e-12));
    CHECK(ok);
  }
  SUBCASE("random pure qutrit triplets always satisfy it") {
    RngStream rng(3);
    for (int trial = 0; trial < 20000; ++trial) {
      const PureState a = random_pure_state(3, rng);
      const PureState b = random_pure_state(3, rng);
      const PureState c = random_pure_state(3, rng);
      const auto [lhs, ok] = convex_body_check(overlaps_of(a, b, c));
      (void)lhs;
      CHECK(ok);
    }
  }
  SUBCASE("random mixed qubit triplets always satisfy it") {
    RngStream rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
      const DensityMatrix a = random_ginibre_density(2, 2, rng);
      const DensityMatrix b = random_ginibre_density(2, 2, rng);
      const DensityMatrix c = random_ginibre_density(2, 2, rng);
      const auto [lhs, ok] = convex_body_check({overlap(a, b), overlap(a, c), overlap(b, c)});
      CHECK(lhs <= 1.0 + 1e-10);
      CHECK(ok);
    }
  }
}

TEST_CASE("invariant classification") {
  CHECK(classify_invariant(cplx(0.25, 0.25), 1e-10) == InvariantClass::imaginary);
  CHECK(classify_invariant(cplx(-0.125, 0.0), 1e-10) == InvariantClass::negative);
  CHECK(classify_invariant(cplx(0.375, 0.0), 1e-10) == InvariantClass::positive);
  CHECK(classify_invariant(cplx(0.0, 0.0), 1e-10) == InvariantClass::zero);
  CHECK(classify_invariant(cplx(0.0, 5e-11), 1e-10) == InvariantClass::zero);
}

TEST_CASE("impossibility witnesses: equal overlaps, different invariants") {
  SUBCASE("overlaps (1/2,1/2,1/2) with and without imaginarity") {
    const PureState a1 = PureState::basis_state(2, 0);
    const PureState a2 = ket({1.0, 1.0});
    const PureState a3 = ket({1.0, cplx(0.0, 1.0)});
    const OverlapTriple t1 = overlaps_of(a1, a2, a3);
    CHECK(t1.d12 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t1.d13 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t1.d23 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(classify_invariant(pure_delta3(a1, a2, a3), 1e-10) == InvariantClass::imaginary);

    const PureState b1 = ket({1.0, 1.0, 0.0});
    const PureState b2 = ket({0.0, 1.0, 1.0});
    const PureState b3 = ket({1.0, 0.0, 1.0});
    const OverlapTriple t2 = overlaps_of(b1, b2, b3);
    CHECK(t2.d12 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t2.d13 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t2.d23 == doctest::Approx(0.5).epsilon(1e-12));
    const cplx d3 = pure_delta3(b1, b2, b3);
    CHECK(std::abs(d3.imag()) < 1e-12);
    CHECK(d3.real() == doctest::Approx(0.125).epsilon(1e-12));
  }
  SUBCASE("overlaps (1/4,1/4,1/4) with both signs") {
    const double s3 = std::sqrt(3.0);
    const PureState a1 = PureState::basis_state(2, 0);
    const PureState a2 = ket({1.0, s3});
    const PureState a3 = ket({1.0, -s3});
    const OverlapTriple t1 = overlaps_of(a1, a2, a3);
    for (double v : {t1.d12, t1.d13, t1.d23}) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pure_delta3(a1, a2, a3).real() == doctest::Approx(-0.125).epsilon(1e-12));

    const PureState b1 = ket({1.0, 0.0, 0.0});
    const PureState b2 = ket({1.0, s3, 0.0});
    const PureState b3 = ket({3.0, s3, std::sqrt(24.0)});
    const OverlapTriple t2 = overlaps_of(b1, b2, b3);
    for (double v : {t2.d12, t2.d13, t2.d23}) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pure_delta3(b1, b2, b3).real() == doctest::Approx(0.125).epsilon(1e-12));
  }
}

TEST_CASE("set-incoherent triples live in the classical polytope") {
  RngStream rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    const DensityMatrix a = random_diagonal_density(d, rng);
    const DensityMatrix b = random_diagonal_density(d, rng);
    const DensityMatrix c = random_diagonal_density(d, rng);
    const WitnessReport report =
        overlap_inequalities({overlap(a, b), overlap(a, c), overlap(b, c)});
    for (int k = 0; k < 3; ++k) CHECK(report.inequality_lhs[k] <= 1.0 + 1e-10);
    const cplx d3 = bargmann(std::vector<DensityMatrix>{a, b, c}).value;
    CHECK(std::abs(d3.imag()) < 1e-12);
    CHECK(d3.real() > -1e-12);
    CHECK(d3.real() < 1.0 + 1e-12);
  }
}

TEST_CASE("support uncertainty") {
  const auto z2 = OrthonormalBasis::computational(2);
  const auto x2 = OrthonormalBasis::fourier(2);
  SUBCASE("|0> in the qubit MUB pair is KD classical") {
    const SupportUncertainty r = support_uncertainty(PureState::basis_state(2, 0), z2, x2, 1e-10);
    CHECK(r.n_i == 1);
    CHECK(r.n_f == 2);
    CHECK_FALSE(r.sum_condition);
    REQUIRE(r.mub_classical.has_value());
    CHECK(*r.mub_classical);
  }
  SUBCASE("|+> in the same pair") {
    const SupportUncertainty r = support_uncertainty(ket({1.0, 1.0}), z2, x2, 1e-10);
    CHECK(r.n_i == 2);
    CHECK(r.n_f == 1);
    REQUIRE(r.mub_classical.has_value());
    CHECK(*r.mub_classical);
  }
  SUBCASE("non-MUB pair leaves the product flag empty") {
    const SupportUncertainty r =
        support_uncertainty(PureState::basis_state(2, 0), z2, z2, 1e-10);
    CHECK_FALSE(r.mub_classical.has_value());
  }
  SUBCASE("d=4 support condition forces nonclassical KD values") {
    const auto z4 = OrthonormalBasis::computational(4);
    const auto f4 = OrthonormalBasis::fourier(4);
    RngStream rng(11);
    int verified = 0;
    while (verified < 50) {
      const PureState psi = random_pure_state(4, rng);
      const SupportUncertainty r = support_uncertainty(psi, z4, f4, 1e-10);
      if (r.n_i + r.n_f <= 5) continue;
      CHECK(r.sum_condition);
      // exhaustive KD-grid scan oracle
      const auto grid = kd_distribution(DensityMatrix::from_pure(psi), z4, f4);
      bool nonclassical = false;
      for (int i = 0; i < 4 && !nonclassical; ++i) {
        for (int f = 0; f < 4 && !nonclassical; ++f) {
          const cplx v = grid.value(i, f);
          if (std::abs(v.imag()) > 1e-10 || v.real() < -1e-10 || v.real() > 1.0 + 1e-10)
            nonclassical = true;
        }
      }
      CHECK(nonclassical);
      ++verified;
    }
  }
}

TEST_CASE("parametrized real-amplitude triples") {
  SUBCASE("beta = gamma = 0 collapses to |0>") {
    const RealTriple t = real_triple(0.3, 0.0, 0.0);
    CHECK(t.h1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.h2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.h3 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.delta3 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("closed-form invariant at alpha = pi/2, beta = gamma = pi/4") {
    const RealTriple t = real_triple(kPi / 2.0, kPi / 4.0, kPi / 4.0);
    CHECK(t.delta3 == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("h functions agree with the states they came from") {
    RngStream rng(13);
    for (int trial = 0; trial < 500; ++trial) {
      const double alpha = 2.0 * kPi * rng.uniform();
      const double beta = kPi * rng.uniform();
      const double gamma = kPi * rng.uniform();
      const RealTriple t = real_triple(alpha, beta, gamma);
      const double d12 = overlap(t.states[0], t.states[1]);
      const double d13 = overlap(t.states[0], t.states[2]);
      const double d23 = overlap(t.states[1], t.states[2]);
      CHECK(std::abs(t.h1 - (-d12 + d13 + d23)) < 1e-12);
      CHECK(std::abs(t.h2 - (d12 - d13 + d23)) < 1e-12);
      CHECK(std::abs(t.h3 - (d12 + d13 - d23)) < 1e-12);
      // and the closed-form Delta_3 matches the cyclic inner-product route
      const cplx direct = pure_delta3(t.states[0], t.states[1], t.states[2]);
      CHECK(std::abs(direct.imag()) < 1e-12);
      CHECK(std::abs(t.delta3 - direct.real()) < 1e-12);
    }
  }
  SUBCASE("h3 > 1 region sits inside the positive-invariant region at alpha = 0.11") {
    const int grid = 120;  // acceptance runs the full 300x300
    for (int a = 0; a < grid; ++a) {
      for (int b = 0; b < grid; ++b) {
        const double beta = kPi * (a + 0.5) / grid;
        const double gamma = kPi * (b + 0.5) / grid;
        const RealTriple t = real_triple(0.11, beta, gamma);
        if (t.h3 > 1.0) CHECK(t.delta3 > 0.0);
      }
    }
  }
}

TEST_CASE("rebit triples") {
  SUBCASE("equal angles give a unit overlap and nonnegative invariant") {
    const RebitPoint p = rebit_triple(0.7, 0.7);
    CHECK(p.overlaps.d23 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.delta3 >= 0.0);
    CHECK(p.region == "boundary");
  }
  SUBCASE("closed-form negative invariant") {
    const RebitPoint p = rebit_triple(2.0 * kPi / 3.0, kPi / 3.0);
    CHECK(p.delta3 == doctest::Approx(-0.125).epsilon(1e-10));
    CHECK(p.region == "delta3-negative");
  }
  SUBCASE("exactly one witness fires at interior points") {
    const int grid = 101;  // odd so no point hits theta = phi or |theta-phi| = pi/2
    int boundary = 0;
    for (int a = 0; a < grid; ++a) {
      for (int b = 0; b < grid; ++b) {
        if (a == b) continue;
        const double theta = kPi * (a + 0.5) / grid;
        const double phi = kPi * (b + 0.5) / grid;
        const RebitPoint p = rebit_triple(theta, phi);
        if (p.region == "boundary") {
          ++boundary;
          continue;
        }
        CHECK(p.region != "multiple");
      }
    }
    // off-diagonal grid points avoid the set-incoherent boundary entirely
    CHECK(boundary == 0);
  }
}

TEST_CASE("lemma-3 style searches") {
  SUBCASE("no real-amplitude counterexamples at moderate scale") {
    CHECK(lemma3_verify(10000, {2, 3, 5}, 17) == 0);
  }
  SUBCASE("qubit converse holds at moderate scale") {
    CHECK(lemma3_converse_qubit(10000, 19) == 0);
  }
  SUBCASE("complex amplitudes break the lemma") {
    // the lemma concludes Delta_3 > 0 (positive and real); complex triples
    // with a violated inequality routinely land outside that set
    RngStream rng(23);
    long long found = 0;
    for (int trial = 0; trial < 200000 && found == 0; ++trial) {
      const PureState a = random_pure_state(2, rng);
      const PureState b = random_pure_state(2, rng);
      const PureState c = random_pure_state(2, rng);
      const WitnessReport report = overlap_inequalities(overlaps_of(a, b, c));
      if (!(report.violated[0] || report.violated[1] || report.violated[2])) continue;
      const cplx d3 = pure_delta3(a, b, c);
      if (std::abs(d3.imag()) > 1e-9 || d3.real() <= 1e-12) ++found;
    }
    CHECK(found > 0);
  }
}
