#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invlab/states.hpp"

namespace invlab {

struct OverlapTriple {
  double d12 = 0.0;  // Delta_2(rho_1, rho_2)
  double d13 = 0.0;
  double d23 = 0.0;
};

enum class InvariantClass { positive, negative, zero, imaginary };

struct WitnessReport {
  // sign patterns over (d12, d13, d23): (+,+,-), (+,-,+), (-,+,+)
  std::array<double, 3> inequality_lhs{};
  std::array<bool, 3> violated{};
  double convex_body_lhs = 0.0;
  bool convex_body_satisfied = true;
  std::optional<InvariantClass> classification;
};

WitnessReport overlap_inequalities(const OverlapTriple& t);

// lhs = d12 + d13 + d23 - 2 sqrt(d12 d13 d23); satisfied iff lhs <= 1 + 1e-10.
std::pair<double, bool> convex_body_check(const OverlapTriple& t);

// full report: inequalities + convex body (+ classification when an invariant
// value is supplied)
WitnessReport witness_report(const OverlapTriple& t, std::optional<cplx> delta3 = std::nullopt,
                             double tol = 1e-10);

InvariantClass classify_invariant(cplx delta, double tol);
std::string to_string(InvariantClass c);

struct SupportUncertainty {
  int n_i = 0;
  int n_f = 0;
  bool sum_condition = false;              // n_i + n_f > d + 1
  std::optional<bool> mub_classical;       // n_i * n_f == d; empty if bases not MUB
};

SupportUncertainty support_uncertainty(const PureState& psi, const OrthonormalBasis& basis_i,
                                       const OrthonormalBasis& basis_f, double zero_tol = 1e-10);

// Appendix-style parametrized triple of real-amplitude states in d=3:
//   psi1 = |0>,
//   psi2 = cos(beta)|0> + sin(beta)|1>,
//   psi3 = cos(gamma)|0> + sin(gamma)sin(alpha)|1> + sin(gamma)cos(alpha)|2>.
struct RealTriple {
  std::array<PureState, 3> states;
  double h1 = 0.0, h2 = 0.0, h3 = 0.0;  // the three signed overlap sums
  double delta3 = 0.0;  // cos^2(beta)cos^2(gamma) + sin(2beta)sin(2gamma)sin(alpha)/4
};

RealTriple real_triple(double alpha, double beta, double gamma);

// Real-amplitude qubit (rebit) triple:
//   psi1 = |0>, psi2 = cos(theta)|0> + sin(theta)|1>, psi3 likewise with phi.
// The region label names the single witness that fires at the point:
// "overlap-1|2|3" (sign patterns as in overlap_inequalities),
// "delta3-negative", or "boundary" when any witness sits within 1e-9 of its
// threshold (the set-incoherent boundary).
struct RebitPoint {
  OverlapTriple overlaps;
  double delta3 = 0.0;
  std::string region;
};

RebitPoint rebit_triple(double theta, double phi);

// Samples real-amplitude pure triples uniformly on the real sphere and counts
// cases where some overlap inequality is violated yet Delta_3 <= 1e-12.
long long lemma3_verify(long long n_samples, const std::vector<int>& dims, std::uint64_t seed,
                        int threads = 0);

// d=2 converse: triples whose inequalities are all strictly satisfied
// (lhs < 1 - 1e-9) and whose overlaps are all nonvanishing must have
// Delta_3 < 0; returns the number of counterexamples.
long long lemma3_converse_qubit(long long n_samples, std::uint64_t seed, int threads = 0);

}  // namespace invlab
