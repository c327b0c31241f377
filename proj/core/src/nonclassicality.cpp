#include "invlab/nonclassicality.hpp"

#include <atomic>
#include <cmath>

#include "invlab/invariants.hpp"
#include "invlab/parallel.hpp"
#include "invlab/rng.hpp"

namespace invlab {

namespace {

constexpr double kViolationTol = 1e-10;
constexpr double kBoundaryTol = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate_triple(const OverlapTriple& t) {
  for (double v : {t.d12, t.d13, t.d23}) {
    require(v >= -1e-12 && v <= 1.0 + 1e-12, "overlap triple: entry outside [0,1]");
  }
}

PureState real_qutrit(double c0, double c1, double c2) {
  Vec v(3);
  v << cplx(c0, 0.0), cplx(c1, 0.0), cplx(c2, 0.0);
  v /= v.norm();
  return PureState(std::move(v));
}

// Delta_3 for pure states as a cyclic product of inner products
cplx pure_delta3(const PureState& a, const PureState& b, const PureState& c) {
  return a.inner(b) * b.inner(c) * c.inner(a);
}

}  // namespace

WitnessReport overlap_inequalities(const OverlapTriple& t) {
  validate_triple(t);
  WitnessReport report;
  report.inequality_lhs = {t.d12 + t.d13 - t.d23, t.d12 - t.d13 + t.d23, -t.d12 + t.d13 + t.d23};
  for (int k = 0; k < 3; ++k) report.violated[k] = report.inequality_lhs[k] > 1.0 + kViolationTol;
  return report;
}

std::pair<double, bool> convex_body_check(const OverlapTriple& t) {
  validate_triple(t);
  const double product = std::max(0.0, t.d12 * t.d13 * t.d23);
  const double lhs = t.d12 + t.d13 + t.d23 - 2.0 * std::sqrt(product);
  return {lhs, lhs <= 1.0 + kViolationTol};
}

WitnessReport witness_report(const OverlapTriple& t, std::optional<cplx> delta3, double tol) {
  WitnessReport report = overlap_inequalities(t);
  const auto [lhs, ok] = convex_body_check(t);
  report.convex_body_lhs = lhs;
  report.convex_body_satisfied = ok;
  if (delta3) report.classification = classify_invariant(*delta3, tol);
  return report;
}

InvariantClass classify_invariant(cplx delta, double tol) {
  if (std::abs(delta.imag()) > tol) return InvariantClass::imaginary;
  if (delta.real() > tol) return InvariantClass::positive;
  if (delta.real() < -tol) return InvariantClass::negative;
  return InvariantClass::zero;
}

std::string to_string(InvariantClass c) {
  switch (c) {
    case InvariantClass::positive: return "positive";
    case InvariantClass::negative: return "negative";
    case InvariantClass::zero: return "zero";
    case InvariantClass::imaginary: return "imaginary";
  }
  return "unknown";
}

SupportUncertainty support_uncertainty(const PureState& psi, const OrthonormalBasis& basis_i,
                                       const OrthonormalBasis& basis_f, double zero_tol) {
  const int d = psi.dim();
  require(basis_i.dim() == d && basis_f.dim() == d, "support_uncertainty: dimension mismatch");
  SupportUncertainty result;
  for (int k = 0; k < d; ++k) {
    if (overlap(basis_i.vector(k), psi) > zero_tol) ++result.n_i;
    if (overlap(basis_f.vector(k), psi) > zero_tol) ++result.n_f;
  }
  result.sum_condition = result.n_i + result.n_f > d + 1;
  bool mub = true;
  for (int i = 0; i < d && mub; ++i) {
    for (int f = 0; f < d && mub; ++f) {
      if (std::abs(overlap(basis_i.vector(i), basis_f.vector(f)) - 1.0 / d) > 1e-9) mub = false;
    }
  }
  if (mub) result.mub_classical = (result.n_i * result.n_f == d);
  return result;
}

RealTriple real_triple(double alpha, double beta, double gamma) {
  require(beta >= 0.0 && beta <= std::acos(-1.0) + 1e-12 && gamma >= 0.0 &&
              gamma <= std::acos(-1.0) + 1e-12,
          "real_triple: beta and gamma must lie in [0, pi]");
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  PureState psi1 = PureState::basis_state(3, 0);
  PureState psi2 = real_qutrit(cb, sb, 0.0);
  PureState psi3 = real_qutrit(cg, sg * sa, sg * ca);

  const double d12 = overlap(psi1, psi2);
  const double d13 = overlap(psi1, psi3);
  const double d23 = overlap(psi2, psi3);

  RealTriple triple{{std::move(psi1), std::move(psi2), std::move(psi3)}, 0.0, 0.0, 0.0, 0.0};
  triple.h1 = -d12 + d13 + d23;
  triple.h2 = d12 - d13 + d23;
  triple.h3 = d12 + d13 - d23;
  triple.delta3 = cb * cb * cg * cg + 0.25 * std::sin(2.0 * beta) * std::sin(2.0 * gamma) * sa;
  return triple;
}

RebitPoint rebit_triple(double theta, double phi) {
  const double pi = std::acos(-1.0);
  require(theta >= 0.0 && theta <= pi + 1e-12 && phi >= 0.0 && phi <= pi + 1e-12,
          "rebit_triple: angles must lie in [0, pi]");
  RebitPoint point;
  point.overlaps.d12 = std::cos(theta) * std::cos(theta);
  point.overlaps.d13 = std::cos(phi) * std::cos(phi);
  point.overlaps.d23 = std::cos(theta - phi) * std::cos(theta - phi);
  point.delta3 = std::cos(theta - phi) * std::cos(theta) * std::cos(phi);

  const WitnessReport report = overlap_inequalities(point.overlaps);
  bool near_boundary = std::abs(point.delta3) <= kBoundaryTol;
  for (double lhs : report.inequality_lhs) near_boundary |= std::abs(lhs - 1.0) <= kBoundaryTol;

  if (near_boundary) {
    point.region = "boundary";
    return point;
  }
  std::vector<std::string> fired;
  for (int k = 0; k < 3; ++k) {
    if (report.inequality_lhs[k] > 1.0) fired.push_back("overlap-" + std::to_string(k + 1));
  }
  if (point.delta3 < 0.0) fired.push_back("delta3-negative");
  if (fired.empty()) {
    point.region = "boundary";
  } else if (fired.size() == 1) {
    point.region = fired.front();
  } else {
    point.region = "multiple";
  }
  return point;
}

long long lemma3_verify(long long n_samples, const std::vector<int>& dims, std::uint64_t seed,
                        int threads) {
  require(n_samples >= 1 && !dims.empty(), "lemma3_verify: invalid parameters");
  std::atomic<long long> counterexamples{0};
  RngStream root(seed);
  for (std::size_t dim_idx = 0; dim_idx < dims.size(); ++dim_idx) {
    const int d = dims[dim_idx];
    require(d >= 2, "lemma3_verify: dimension must be at least 2");
    parallel_for(n_samples, threads, [&, d](long long k) {
      RngStream rng = root.derive((static_cast<std::uint64_t>(dim_idx) << 40) |
                                  static_cast<std::uint64_t>(k));
      const PureState a = random_real_pure_state(d, rng);
      const PureState b = random_real_pure_state(d, rng);
      const PureState c = random_real_pure_state(d, rng);
      const OverlapTriple t{overlap(a, b), overlap(a, c), overlap(b, c)};
      const WitnessReport report = overlap_inequalities(t);
      const bool any_violated = report.violated[0] || report.violated[1] || report.violated[2];
      if (!any_violated) return;
      const double delta3 = pure_delta3(a, b, c).real();
      if (delta3 <= 1e-12) counterexamples.fetch_add(1, std::memory_order_relaxed);
    });
  }
  return counterexamples.load();
}

long long lemma3_converse_qubit(long long n_samples, std::uint64_t seed, int threads) {
  require(n_samples >= 1, "lemma3_converse_qubit: invalid sample count");
  std::atomic<long long> counterexamples{0};
  RngStream root(seed);
  parallel_for(n_samples, threads, [&](long long k) {
    RngStream rng = root.derive(static_cast<std::uint64_t>(k));
    const PureState a = random_real_pure_state(2, rng);
    const PureState b = random_real_pure_state(2, rng);
    const PureState c = random_real_pure_state(2, rng);
    const OverlapTriple t{overlap(a, b), overlap(a, c), overlap(b, c)};
    const WitnessReport report = overlap_inequalities(t);
    for (double lhs : report.inequality_lhs) {
      if (lhs >= 1.0 - 1e-9) return;  // not strictly satisfied
    }
    if (t.d12 <= 1e-9 || t.d13 <= 1e-9 || t.d23 <= 1e-9) return;  // vanishing overlap
    const double delta3 = pure_delta3(a, b, c).real();
    if (delta3 >= 0.0) counterexamples.fetch_add(1, std::memory_order_relaxed);
  });
  return counterexamples.load();
}

}  // namespace invlab
