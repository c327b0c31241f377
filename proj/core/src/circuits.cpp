#include "invlab/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace invlab {

namespace {

using nlohmann::ordered_json;

constexpr double kInvSqrt2 = 0.70710678118654752440;
// joint-dimension guards; the artifact targets dimensions in the hundreds
constexpr long long kMaxStatevector = 1LL << 22;
constexpr long long kMaxDensity = 4096;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// dims (with the ancilla first) and row-major strides of the joint space
struct Layout {
  std::vector<int> dims;
  std::vector<long long> strides;
  long long total = 1;

  explicit Layout(const std::vector<Wire>& wires) {
    dims.reserve(wires.size());
    for (const auto& w : wires) dims.push_back(w.dim);
    strides.assign(dims.size(), 1);
    for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
      strides[k] = strides[k + 1] * dims[k + 1];
    total = strides[0] * dims[0];
  }

  int digit(long long index, int wire) const {
    return static_cast<int>((index / strides[wire]) % dims[wire]);
  }

  long long with_digits_swapped(long long index, int wa, int wb) const {
    const long long da = digit(index, wa);
    const long long db = digit(index, wb);
    return index + (db - da) * strides[wa] + (da - db) * strides[wb];
  }
};

// --- state-vector backend ---------------------------------------------------

void sv_hadamard(Vec& amp, const Layout& lay) {
  const long long half = lay.strides[0];
  for (long long r = 0; r < half; ++r) {
    const cplx a = amp(r);
    const cplx b = amp(half + r);
    amp(r) = (a + b) * kInvSqrt2;
    amp(half + r) = (a - b) * kInvSqrt2;
  }
}

void sv_phase(Vec& amp, const Layout& lay, int s) {
  if (s == 0) return;
  const long long half = lay.strides[0];
  for (long long r = 0; r < half; ++r) amp(half + r) *= cplx(0.0, 1.0);
}

void sv_cswap(Vec& amp, const Layout& lay, int wa, int wb) {
  const long long half = lay.strides[0];
  for (long long r = 0; r < half; ++r) {
    const long long idx = half + r;  // ancilla digit 1
    const long long swapped = lay.with_digits_swapped(idx, wa, wb);
    if (idx < swapped) std::swap(amp(idx), amp(swapped));
  }
}

void sv_unitary(Vec& amp, const Layout& lay, int wire, const Mat& u) {
  const int d = lay.dims[wire];
  const long long stride = lay.strides[wire];
  Vec scratch(d);
  for (long long base = 0; base < lay.total; ++base) {
    if (lay.digit(base, wire) != 0) continue;
    for (int k = 0; k < d; ++k) scratch(k) = amp(base + k * stride);
    for (int k = 0; k < d; ++k) {
      cplx acc = 0.0;
      for (int j = 0; j < d; ++j) acc += u(k, j) * scratch(j);
      amp(base + k * stride) = acc;
    }
  }
}

// --- density backend ---------------------------------------------------------

// applies G rho G^dag for each gate kind, acting on rows then columns

void dm_hadamard(Mat& rho, const Layout& lay) {
  const long long half = lay.strides[0];
  for (long long c = 0; c < lay.total; ++c) {
    for (long long r = 0; r < half; ++r) {
      const cplx a = rho(r, c);
      const cplx b = rho(half + r, c);
      rho(r, c) = (a + b) * kInvSqrt2;
      rho(half + r, c) = (a - b) * kInvSqrt2;
    }
  }
  for (long long r = 0; r < lay.total; ++r) {
    for (long long c = 0; c < half; ++c) {
      const cplx a = rho(r, c);
      const cplx b = rho(r, half + c);
      rho(r, c) = (a + b) * kInvSqrt2;
      rho(r, half + c) = (a - b) * kInvSqrt2;
    }
  }
}

void dm_phase(Mat& rho, const Layout& lay, int s) {
  if (s == 0) return;
  const long long half = lay.strides[0];
  for (long long c = 0; c < lay.total; ++c)
    for (long long r = half; r < lay.total; ++r) rho(r, c) *= cplx(0.0, 1.0);
  for (long long r = 0; r < lay.total; ++r)
    for (long long c = half; c < lay.total; ++c) rho(r, c) *= cplx(0.0, -1.0);
}

void dm_cswap(Mat& rho, const Layout& lay, int wa, int wb) {
  const long long half = lay.strides[0];
  for (long long c = 0; c < lay.total; ++c) {
    for (long long r = half; r < lay.total; ++r) {
      const long long swapped = lay.with_digits_swapped(r, wa, wb);
      if (r < swapped) std::swap(rho(r, c), rho(swapped, c));
    }
  }
  for (long long r = 0; r < lay.total; ++r) {
    for (long long c = half; c < lay.total; ++c) {
      const long long swapped = lay.with_digits_swapped(c, wa, wb);
      if (c < swapped) std::swap(rho(r, c), rho(r, swapped));
    }
  }
}

void dm_unitary(Mat& rho, const Layout& lay, int wire, const Mat& u) {
  const int d = lay.dims[wire];
  const long long stride = lay.strides[wire];
  Vec scratch(d);
  for (long long c = 0; c < lay.total; ++c) {
    for (long long base = 0; base < lay.total; ++base) {
      if (lay.digit(base, wire) != 0) continue;
      for (int k = 0; k < d; ++k) scratch(k) = rho(base + k * stride, c);
      for (int k = 0; k < d; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < d; ++j) acc += u(k, j) * scratch(j);
        rho(base + k * stride, c) = acc;
      }
    }
  }
  for (long long r = 0; r < lay.total; ++r) {
    for (long long base = 0; base < lay.total; ++base) {
      if (lay.digit(base, wire) != 0) continue;
      for (int k = 0; k < d; ++k) scratch(k) = rho(r, base + k * stride);
      for (int k = 0; k < d; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < d; ++j) acc += std::conj(u(k, j)) * scratch(j);
        rho(r, base + k * stride) = acc;
      }
    }
  }
}

ordered_json gate_to_json(const Gate& gate) {
  ordered_json g;
  if (const auto* h = std::get_if<GateHadamard>(&gate)) {
    g["kind"] = "h";
    g["wire"] = h->wire;
  } else if (const auto* p = std::get_if<GatePhase>(&gate)) {
    g["kind"] = "phase";
    g["s"] = p->s;
    g["wire"] = p->wire;
  } else if (const auto* c = std::get_if<GateControlledSwap>(&gate)) {
    g["kind"] = "cswap";
    g["control"] = c->control;
    g["a"] = c->wire_a;
    g["b"] = c->wire_b;
  } else if (const auto* u = std::get_if<GateUnitary>(&gate)) {
    g["kind"] = "unitary";
    g["wire"] = u->wire;
    ordered_json re = ordered_json::array();
    ordered_json im = ordered_json::array();
    for (int r = 0; r < u->matrix.rows(); ++r) {
      ordered_json rr = ordered_json::array();
      ordered_json ri = ordered_json::array();
      for (int c2 = 0; c2 < u->matrix.cols(); ++c2) {
        rr.push_back(u->matrix(r, c2).real());
        ri.push_back(u->matrix(r, c2).imag());
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ri));
    }
    g["re"] = std::move(re);
    g["im"] = std::move(im);
  }
  return g;
}

}  // namespace

int CircuitIR::phase_s() const {
  for (const auto& gate : gates) {
    if (const auto* p = std::get_if<GatePhase>(&gate)) {
      if (p->s == 1) return 1;
    }
  }
  return 0;
}

void CircuitIR::validate() const {
  require(!wires.empty() && wires[0].dim == 2, "circuit: wire 0 must be a qubit ancilla");
  for (const auto& w : wires) require(w.dim >= 1, "circuit: wire dimension must be positive");
  int hadamards_on_ancilla = 0;
  std::size_t first_h = gates.size();
  std::size_t last_h = 0;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const auto& gate = gates[k];
    if (const auto* h = std::get_if<GateHadamard>(&gate)) {
      require(wires[h->wire].dim == 2, "circuit: hadamard requires a qubit wire");
      if (h->wire == 0) {
        if (hadamards_on_ancilla == 0) first_h = k;
        last_h = k;
        ++hadamards_on_ancilla;
      }
    } else if (const auto* c = std::get_if<GateControlledSwap>(&gate)) {
      require(c->control == 0, "circuit: controlled-swap control must be the ancilla");
      require(c->wire_a > 0 && c->wire_b > 0 && c->wire_a != c->wire_b &&
                  c->wire_a < static_cast<int>(wires.size()) &&
                  c->wire_b < static_cast<int>(wires.size()),
              "circuit: controlled-swap targets out of range");
      require(wires[c->wire_a].dim == wires[c->wire_b].dim,
              "circuit: controlled-swap targets must have equal dimensions");
    } else if (const auto* p = std::get_if<GatePhase>(&gate)) {
      require(p->s == 0 || p->s == 1, "circuit: phase exponent must be 0 or 1");
    } else if (const auto* u = std::get_if<GateUnitary>(&gate)) {
      require(u->wire > 0 && u->wire < static_cast<int>(wires.size()),
              "circuit: unitary wire out of range");
      require(u->matrix.rows() == wires[u->wire].dim && u->matrix.cols() == wires[u->wire].dim,
              "circuit: unitary dimension mismatch");
      require(is_unitary(u->matrix, 1e-10), "circuit: gate matrix is not unitary");
    }
  }
  require(hadamards_on_ancilla == 2, "circuit: expected exactly two ancilla Hadamards");
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (std::holds_alternative<GateControlledSwap>(gates[k]))
      require(k > first_h && k < last_h, "circuit: controlled block must sit between the ancilla Hadamards");
  }
}

CircuitIR build_cycle_test(int order, int dim, int s) {
  require(order >= 1, "build_cycle_test: order must be at least 1");
  require(dim >= 2, "build_cycle_test: dimension must be at least 2");
  require(s == 0 || s == 1, "build_cycle_test: s must be 0 or 1");
  CircuitIR circuit;
  circuit.wires.push_back({"anc", 2});
  for (int k = 1; k <= order; ++k) circuit.wires.push_back({"q" + std::to_string(k), dim});
  circuit.gates.push_back(GateHadamard{0});
  for (int k = 1; k < order; ++k) circuit.gates.push_back(GateControlledSwap{0, k, k + 1});
  circuit.gates.push_back(GatePhase{s, 0});
  circuit.gates.push_back(GateHadamard{0});
  return circuit;
}

CircuitIR build_kd_circuit(int dim, int s) {
  CircuitIR circuit = build_cycle_test(3, dim, s);
  circuit.wires[1].label = "i";
  circuit.wires[2].label = "psi";
  circuit.wires[3].label = "f";
  return circuit;
}

std::pair<CircuitIR, CircuitIR> build_weak_value_circuits(int dim, int s) {
  CircuitIR numerator = build_cycle_test(3, dim, s);
  numerator.wires[1].label = "phi";
  numerator.wires[2].label = "a";
  numerator.wires[3].label = "psi";
  CircuitIR denominator = build_cycle_test(2, dim, 0);
  denominator.wires[1].label = "phi";
  denominator.wires[2].label = "psi";
  return {std::move(numerator), std::move(denominator)};
}

CircuitIR build_psqfi_circuit(int dim, int s, double theta, const Observable& generator) {
  require(generator.dim() == dim, "build_psqfi_circuit: generator dimension mismatch");
  CircuitIR circuit = build_cycle_test(4, dim, s);
  circuit.wires[1].label = "i";
  circuit.wires[2].label = "psi";
  circuit.wires[3].label = "iprime";
  circuit.wires[4].label = "f";
  Mat u_theta = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < generator.eigenvalues().size(); ++k) {
    u_theta += std::exp(cplx(0.0, -theta * generator.eigenvalues()[k])) * generator.projectors()[k];
  }
  circuit.gates.insert(circuit.gates.begin(), GateUnitary{2, std::move(u_theta)});
  return circuit;
}

CircuitIR build_otoc_circuit(int dim, int s, const Mat& u) {
  require(u.rows() == dim && u.cols() == dim, "build_otoc_circuit: unitary dimension mismatch");
  require(is_unitary(u, 1e-10), "build_otoc_circuit: evolution matrix is not unitary");
  CircuitIR circuit = build_cycle_test(5, dim, s);
  circuit.wires[1].label = "w3";
  circuit.wires[2].label = "v2";
  circuit.wires[3].label = "w2";
  circuit.wires[4].label = "v1";
  circuit.wires[5].label = "rho";
  // scrambling unitary on the two V wires and on rho, no reversed evolution
  circuit.gates.insert(circuit.gates.begin(), GateUnitary{5, u});
  circuit.gates.insert(circuit.gates.begin(), GateUnitary{4, u});
  circuit.gates.insert(circuit.gates.begin(), GateUnitary{2, u});
  return circuit;
}

std::pair<double, double> simulate_exact(const CircuitIR& circuit,
                                         const std::vector<StateInput>& inputs) {
  circuit.validate();
  require(static_cast<int>(inputs.size()) == circuit.system_wires(),
          "simulate_exact: input count does not match system wires");
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const int dim = std::holds_alternative<PureState>(inputs[k])
                        ? std::get<PureState>(inputs[k]).dim()
                        : std::get<DensityMatrix>(inputs[k]).dim();
    require(dim == circuit.wires[k + 1].dim, "simulate_exact: input dimension mismatch on wire " +
                                                 std::to_string(k + 1));
  }
  const bool all_pure = std::all_of(inputs.begin(), inputs.end(), [](const StateInput& s) {
    return std::holds_alternative<PureState>(s);
  });
  Layout lay(circuit.wires);

  double p0 = 0.0;
  if (all_pure) {
    require(lay.total <= kMaxStatevector, "simulate_exact: joint dimension too large");
    // ancilla |0> tensor the pure inputs
    Vec amp(2);
    amp << 1.0, 0.0;
    for (const auto& input : inputs) {
      const Vec& psi = std::get<PureState>(input).amplitudes();
      Vec next(amp.size() * psi.size());
      for (long long a = 0; a < amp.size(); ++a)
        for (int b = 0; b < psi.size(); ++b) next(a * psi.size() + b) = amp(a) * psi(b);
      amp = std::move(next);
    }
    for (const auto& gate : circuit.gates) {
      if (std::get_if<GateHadamard>(&gate)) {
        sv_hadamard(amp, lay);
      } else if (const auto* p = std::get_if<GatePhase>(&gate)) {
        sv_phase(amp, lay, p->s);
      } else if (const auto* c = std::get_if<GateControlledSwap>(&gate)) {
        sv_cswap(amp, lay, c->wire_a, c->wire_b);
      } else if (const auto* u = std::get_if<GateUnitary>(&gate)) {
        sv_unitary(amp, lay, u->wire, u->matrix);
      }
    }
    for (long long r = 0; r < lay.strides[0]; ++r) p0 += std::norm(amp(r));
  } else {
    require(lay.total <= kMaxDensity, "simulate_exact: joint dimension too large for the "
                                      "density backend");
    Mat rho = Mat::Zero(2, 2);
    rho(0, 0) = 1.0;
    for (const auto& input : inputs) {
      const Mat m = std::holds_alternative<PureState>(input)
                        ? std::get<PureState>(input).projector()
                        : std::get<DensityMatrix>(input).matrix();
      Mat next(rho.rows() * m.rows(), rho.cols() * m.cols());
      for (long long r = 0; r < rho.rows(); ++r)
        for (long long c = 0; c < rho.cols(); ++c)
          next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) = rho(r, c) * m;
      rho = std::move(next);
    }
    for (const auto& gate : circuit.gates) {
      if (std::get_if<GateHadamard>(&gate)) {
        dm_hadamard(rho, lay);
      } else if (const auto* p = std::get_if<GatePhase>(&gate)) {
        dm_phase(rho, lay, p->s);
      } else if (const auto* c = std::get_if<GateControlledSwap>(&gate)) {
        dm_cswap(rho, lay, c->wire_a, c->wire_b);
      } else if (const auto* u = std::get_if<GateUnitary>(&gate)) {
        dm_unitary(rho, lay, u->wire, u->matrix);
      }
    }
    for (long long r = 0; r < lay.strides[0]; ++r) p0 += rho(r, r).real();
  }
  p0 = std::clamp(p0, 0.0, 1.0);
  return {p0, 1.0 - p0};
}

ShotRecord sample_shots(const CircuitIR& circuit, const std::vector<StateInput>& inputs,
                        long long shots, std::uint64_t seed) {
  require(shots >= 1, "sample_shots: shots must be at least 1");
  const auto [p0, p1] = simulate_exact(circuit, inputs);
  (void)p1;
  RngStream rng(seed);
  ShotRecord record;
  record.shots = shots;
  record.count0 = rng.binomial(shots, p0);
  record.count1 = shots - record.count0;
  record.s = circuit.phase_s();
  record.seed = seed;
  return record;
}

cplx estimate_invariant(const std::vector<StateInput>& states, long long shots_per_part,
                        std::uint64_t seed) {
  require(!states.empty(), "estimate_invariant: empty state list");
  require(shots_per_part >= 0, "estimate_invariant: negative shot count");
  const int dim = std::holds_alternative<PureState>(states[0])
                      ? std::get<PureState>(states[0]).dim()
                      : std::get<DensityMatrix>(states[0]).dim();
  const int order = static_cast<int>(states.size());
  const CircuitIR real_circuit = build_cycle_test(order, dim, 0);
  if (shots_per_part == 0) {
    const auto [p0_re, p1_re] = simulate_exact(real_circuit, states);
    (void)p1_re;
    double im = 0.0;
    if (order != 2) {
      const auto [p0_im, p1_im] = simulate_exact(build_cycle_test(order, dim, 1), states);
      (void)p1_im;
      im = 1.0 - 2.0 * p0_im;
    }
    return cplx(2.0 * p0_re - 1.0, im);
  }
  RngStream root(seed);
  const ShotRecord re_rec =
      sample_shots(real_circuit, states, shots_per_part, root.derive(0).next_u64());
  const double re = 2.0 * static_cast<double>(re_rec.count0) / re_rec.shots - 1.0;
  double im = 0.0;
  if (order != 2) {
    const ShotRecord im_rec = sample_shots(build_cycle_test(order, dim, 1), states,
                                           shots_per_part, root.derive(1).next_u64());
    im = 1.0 - 2.0 * static_cast<double>(im_rec.count0) / im_rec.shots;
  }
  return cplx(re, im);
}

std::string export_circuit(const CircuitIR& circuit, CircuitFormat format) {
  circuit.validate();
  if (format == CircuitFormat::json_ir) {
    ordered_json j;
    ordered_json wires = ordered_json::array();
    for (const auto& w : circuit.wires) {
      ordered_json jw;
      jw["label"] = w.label;
      jw["dim"] = w.dim;
      wires.push_back(std::move(jw));
    }
    j["wires"] = std::move(wires);
    ordered_json gates = ordered_json::array();
    for (const auto& g : circuit.gates) gates.push_back(gate_to_json(g));
    j["gates"] = std::move(gates);
    j["measure"] = "ancilla-z";
    return j.dump();
  }
  // qasm-like text
  for (std::size_t k = 1; k < circuit.wires.size(); ++k) {
    if (circuit.wires[k].dim != 2) {
      throw std::invalid_argument("export_circuit: unsupported format, qasm-like export "
                                  "requires qubit wires (wire " + std::to_string(k) +
                                  " has dim " + std::to_string(circuit.wires[k].dim) + ")");
    }
  }
  std::string out;
  for (const auto& gate : circuit.gates) {
    if (const auto* h = std::get_if<GateHadamard>(&gate)) {
      out += "h " + circuit.wires[h->wire].label + "\n";
    } else if (const auto* p = std::get_if<GatePhase>(&gate)) {
      if (p->s == 1) out += "s " + circuit.wires[p->wire].label + "\n";
    } else if (const auto* c = std::get_if<GateControlledSwap>(&gate)) {
      out += "cswap " + circuit.wires[c->control].label + " " + circuit.wires[c->wire_a].label +
             " " + circuit.wires[c->wire_b].label + "\n";
    } else if (const auto* u = std::get_if<GateUnitary>(&gate)) {
      out += "u " + circuit.wires[u->wire].label + "\n";
    }
  }
  out += "measure " + circuit.wires[0].label + "\n";
  return out;
}

CircuitIR parse_circuit_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  require(!j.is_discarded(), "parse_circuit_json: invalid JSON");
  require(j.contains("wires") && j["wires"].is_array() && j.contains("gates") &&
              j["gates"].is_array(),
          "parse_circuit_json: missing wires/gates");
  CircuitIR circuit;
  for (const auto& jw : j["wires"]) {
    circuit.wires.push_back({jw.at("label").get<std::string>(), jw.at("dim").get<int>()});
  }
  for (const auto& jg : j["gates"]) {
    const std::string kind = jg.at("kind").get<std::string>();
    if (kind == "h") {
      circuit.gates.push_back(GateHadamard{jg.at("wire").get<int>()});
    } else if (kind == "phase") {
      circuit.gates.push_back(GatePhase{jg.at("s").get<int>(), jg.at("wire").get<int>()});
    } else if (kind == "cswap") {
      circuit.gates.push_back(
          GateControlledSwap{jg.at("control").get<int>(), jg.at("a").get<int>(), jg.at("b").get<int>()});
    } else if (kind == "unitary") {
      const auto& re = jg.at("re");
      const auto& im = jg.at("im");
      const int d = static_cast<int>(re.size());
      Mat m(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
      circuit.gates.push_back(GateUnitary{jg.at("wire").get<int>(), std::move(m)});
    } else {
      throw std::invalid_argument("parse_circuit_json: unknown gate kind '" + kind + "'");
    }
  }
  circuit.validate();
  return circuit;
}

}  // namespace invlab
