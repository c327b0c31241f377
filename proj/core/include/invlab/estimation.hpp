#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invlab/spectrum.hpp"
#include "invlab/states.hpp"

namespace invlab {

struct HoeffdingPlan {
  double epsilon = 0.0;
  double delta = 0.0;
  long long samples = 0;
};

// ceil(2 ln(2/delta) / eps^2) for +/-1-bounded estimators
long long hoeffding_samples(double epsilon, double delta);
HoeffdingPlan hoeffding_plan(double epsilon, double delta);

// Gaussian pointer for the standard weak-measurement scheme.
struct PointerModel {
  double coupling = 0.0;     // gamma
  double pointer_std = 0.0;  // sigma
};

double erfc_inv(double y);

// Gaussian-tail sample count N = 2 (erfc^-1(delta))^2 sigma^2 / (eps^2 gamma^2 Delta_2)
// for the weak-measurement scheme.
long long weak_scheme_samples(double epsilon, double delta, const PointerModel& pointer,
                              double delta2);

// Weak value assembled from cycle-test shot runs: Delta_3(phi, a, psi) per
// eigenvector (n3 shots per part) over a SWAP-test estimate of
// Delta_2(phi, psi) (n2 shots). Zero shot counts use the exact backend.
// Throws if the sampled denominator is not positive.
cplx estimate_weak_value_cycle(const PureState& pre, const PureState& post, const Observable& a,
                               long long n3, long long n2, std::uint64_t seed);

struct WeakMeasurementResult {
  double estimate = 0.0;  // of Re A_w
  long long n_success = 0;
};

// Standard weak measurement: N_success ~ Binomial(N, Delta_2) post-selected
// events, pointer readings Normal(gamma Re A_w, sigma^2); the estimate is the
// sample mean over successes divided by gamma. The sample mean is drawn from
// its exact distribution Normal(gamma Re A_w, sigma^2 / N_success).
WeakMeasurementResult simulate_weak_measurement(const PureState& pre, const PureState& post,
                                                const Observable& a, const PointerModel& pointer,
                                                long long n, std::uint64_t seed);

struct ComplexityCell {
  std::string scheme;  // "cycle", "weak", "cycle-weighted"
  double delta2 = 0.0;
  double epsilon = 0.0;
  long long shots = 0;  // total state samples consumed per repetition
  double mean_abs_error = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t seed = 0;
};

struct ComplexityReport {
  std::vector<ComplexityCell> cells;
  double cycle_exponent = 0.0;     // fitted slope of ln(error) vs ln(Delta_2)
  double weak_exponent = 0.0;
  double weighted_exponent = 0.0;  // cycle test with denominator-weighted split
};

// Error scaling of the two weak-value estimation schemes over an overlap
// sweep at a fixed per-part budget hoeffding_samples(epsilon, delta). Each
// overlap uses a qubit instance with A = |psi><psi| (so A_w = 1 throughout).
ComplexityReport compare_sample_complexity(const std::vector<double>& overlaps, double epsilon,
                                           double delta, int repetitions, std::uint64_t seed,
                                           int threads = 0);

struct SpectrumSamplingPlan {
  int d = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  long long shots_per_trace = 0;   // hoeffding_samples(eps, delta/(d-1))
  long long total_copies = 0;      // sum_{n=2}^{d} n * shots
  long long total_measurements = 0;  // (d-1) * shots
};

SpectrumSamplingPlan spectrum_sampling_plan(int d, double epsilon, double delta);

// Shot-sampled univariate traces [1, Tr(rho^2), ..., Tr(rho^max_n)] via the
// order-n cycle tests (s = 0 runs only; traces are real).
std::vector<double> sample_traces(const DensityMatrix& rho, int max_n, long long shots_per_trace,
                                  std::uint64_t seed);

}  // namespace invlab
