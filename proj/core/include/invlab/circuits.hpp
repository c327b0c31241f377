#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "invlab/rng.hpp"
#include "invlab/states.hpp"

namespace invlab {

struct Wire {
  std::string label;
  int dim = 0;
};

struct GateHadamard {
  int wire = 0;
};

struct GatePhase {
  int s = 0;  // diag(1, i^s)
  int wire = 0;
};

struct GateControlledSwap {
  int control = 0;
  int wire_a = 0;
  int wire_b = 0;
};

struct GateUnitary {
  int wire = 0;
  Mat matrix;
};

using Gate = std::variant<GateHadamard, GatePhase, GateControlledSwap, GateUnitary>;

// Wire-typed gate list for the Hadamard/cycle-test family. Wire 0 is the
// ancilla qubit; the final measurement is always the ancilla in the Z basis.
struct CircuitIR {
  std::vector<Wire> wires;
  std::vector<Gate> gates;

  int system_wires() const { return static_cast<int>(wires.size()) - 1; }
  int phase_s() const;
  // enforces the structural invariants (ancilla control, equal swap dims,
  // exactly two Hadamards bracketing the controlled block)
  void validate() const;
};

// Cycle test for Delta_n: H, cswap(1,2)..cswap(n-1,n), P^s, H. The cascade
// realizes the cyclic shift whose ancilla statistics obey
// p0 = (1 + Re[i^s Delta_n(rho_1,...,rho_n)]) / 2 for inputs in wire order.
CircuitIR build_cycle_test(int order, int dim, int s);

// Cycle test specializations fixing the input-order conventions:
// KD uses (|i>, psi, |f>); ps-QFI uses (|i>, psi, |i'>, |f>) with
// U_theta = exp(-i theta G) applied to the psi wire; the OTOC circuit takes
// (w3, v2, w2, v1, rho) and applies U to the two V wires and the rho wire.
CircuitIR build_kd_circuit(int dim, int s);
std::pair<CircuitIR, CircuitIR> build_weak_value_circuits(int dim, int s);
CircuitIR build_psqfi_circuit(int dim, int s, double theta, const Observable& generator);
CircuitIR build_otoc_circuit(int dim, int s, const Mat& u);

using StateInput = std::variant<PureState, DensityMatrix>;

// Exact ancilla statistics (p0, p1). Uses a joint state vector when every
// input is pure and a joint density operator otherwise.
std::pair<double, double> simulate_exact(const CircuitIR& circuit,
                                         const std::vector<StateInput>& inputs);

struct ShotRecord {
  long long shots = 0;
  long long count0 = 0;
  long long count1 = 0;
  int s = 0;
  std::uint64_t seed = 0;
};

// Ancilla counts for `shots` runs. Sampling draws the count directly from
// Binomial(shots, p0), which is distributionally identical to per-shot
// collapse for this circuit family.
ShotRecord sample_shots(const CircuitIR& circuit, const std::vector<StateInput>& inputs,
                        long long shots, std::uint64_t seed);

// Shot-based estimate of Delta_n for the given states: the s=0 run yields
// Re = 2 f0 - 1 and the s=1 run yields Im = 1 - 2 f0, on independent streams.
// Order-2 invariants are real, so their imaginary part is fixed at zero
// without sampling. shots_per_part = 0 uses the exact backend.
cplx estimate_invariant(const std::vector<StateInput>& states, long long shots_per_part,
                        std::uint64_t seed);

enum class CircuitFormat { json_ir, qasm_like };

std::string export_circuit(const CircuitIR& circuit, CircuitFormat format);
CircuitIR parse_circuit_json(const std::string& text);

}  // namespace invlab
