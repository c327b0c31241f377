#include "invlab/estimation.hpp"

#include <cmath>

#include "invlab/circuits.hpp"
#include "invlab/invariants.hpp"
#include "invlab/parallel.hpp"

namespace invlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// least-squares slope of ln(y) against ln(x)
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct SweepInstance {
  PureState pre;
  PureState post;
  Observable a;
  double a_w_real;
};

// qubit instance with prescribed overlap and A = |psi><psi|, so A_w = 1
SweepInstance sweep_instance(double delta2) {
  Vec psi(2);
  psi << std::sqrt(delta2), std::sqrt(1.0 - delta2);
  PureState pre{psi};
  PureState post = PureState::basis_state(2, 0);
  Observable a = spectral_decompose(pre.projector());
  return {std::move(pre), std::move(post), std::move(a), 1.0};
}

ComplexityCell run_cycle_cell(const SweepInstance& inst, double delta2, double epsilon,
                              long long n3, long long n2, int repetitions, std::uint64_t seed,
                              const std::string& scheme, int threads) {
  std::vector<double> errors(repetitions);
  RngStream root(seed);
  parallel_for(repetitions, threads, [&](long long rep) {
    const std::uint64_t rep_seed = root.derive(rep).next_u64();
    const cplx est = estimate_weak_value_cycle(inst.pre, inst.post, inst.a, n3, n2, rep_seed);
    errors[rep] = std::abs(est.real() - inst.a_w_real);
  });
  CompensatedSum sum, sum_sq;
  for (double e : errors) {
    sum.add(e);
    sum_sq.add(e * e);
  }
  const double mean = sum.value() / repetitions;
  const double var = std::max(0.0, sum_sq.value() / repetitions - mean * mean);
  ComplexityCell cell;
  cell.scheme = scheme;
  cell.delta2 = delta2;
  cell.epsilon = epsilon;
  cell.shots = 3 * n3 + 2 * n2;  // order-3 runs consume 3 states, swap tests 2
  cell.mean_abs_error = mean;
  cell.stderr_mean = std::sqrt(var / repetitions);
  cell.seed = seed;
  return cell;
}

}  // namespace

long long hoeffding_samples(double epsilon, double delta) {
  require(epsilon > 0.0 && epsilon <= 2.0, "hoeffding_samples: epsilon must lie in (0, 2]");
  require(delta > 0.0 && delta < 1.0, "hoeffding_samples: delta must lie in (0, 1)");
  const double n = 2.0 * std::log(2.0 / delta) / (epsilon * epsilon);
  return std::max<long long>(1, static_cast<long long>(std::ceil(n)));
}

HoeffdingPlan hoeffding_plan(double epsilon, double delta) {
  return {epsilon, delta, hoeffding_samples(epsilon, delta)};
}

double erfc_inv(double y) {
  require(y > 0.0 && y < 2.0, "erfc_inv: argument must lie in (0, 2)");
  // bisection on the monotone erfc, then Newton refinement
  double lo = -10.0, hi = 10.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 4; ++iter) {
    const double f = std::erfc(x) - y;
    const double df = -2.0 / std::sqrt(std::acos(-1.0)) * std::exp(-x * x);
    if (df == 0.0) break;
    x -= f / df;
  }
  return x;
}

long long weak_scheme_samples(double epsilon, double delta, const PointerModel& pointer,
                              double delta2) {
  require(epsilon > 0.0 && delta > 0.0 && delta < 1.0, "weak_scheme_samples: bad parameters");
  require(pointer.coupling > 0.0 && pointer.pointer_std > 0.0,
          "weak_scheme_samples: pointer parameters must be positive");
  require(delta2 > 0.0, "weak_scheme_samples: overlap must be positive");
  const double c = erfc_inv(delta);
  const double n = 2.0 * c * c * pointer.pointer_std * pointer.pointer_std /
                   (epsilon * epsilon * pointer.coupling * pointer.coupling * delta2);
  return std::max<long long>(1, static_cast<long long>(std::ceil(n)));
}

cplx estimate_weak_value_cycle(const PureState& pre, const PureState& post, const Observable& a,
                               long long n3, long long n2, std::uint64_t seed) {
  require(n3 >= 0 && n2 >= 0, "estimate_weak_value_cycle: negative shot counts");
  RngStream root(seed);
  cplx numerator = 0.0;
  std::uint64_t substream = 0;
  for (std::size_t idx = 0; idx < a.eigenvalues().size(); ++idx) {
    const double eigenvalue = a.eigenvalues()[idx];
    if (eigenvalue == 0.0) continue;  // weighted by zero regardless of the estimate
    for (const Vec& vec : a.eigenbases()[idx]) {
      const std::vector<StateInput> inputs{post, PureState(vec), pre};
      numerator += eigenvalue *
                   estimate_invariant(inputs, n3, root.derive(substream++).next_u64());
    }
  }
  const std::vector<StateInput> pair{post, pre};
  const cplx den = estimate_invariant(pair, n2, root.derive(substream).next_u64());
  if (den.real() <= 0.0) {
    throw std::runtime_error("estimate_weak_value_cycle: post-selection-starved, the sampled "
                             "overlap estimate is not positive");
  }
  return numerator / den.real();
}

WeakMeasurementResult simulate_weak_measurement(const PureState& pre, const PureState& post,
                                                const Observable& a, const PointerModel& pointer,
                                                long long n, std::uint64_t seed) {
  require(n >= 1, "simulate_weak_measurement: sample count must be positive");
  require(pointer.coupling > 0.0 && pointer.pointer_std > 0.0,
          "simulate_weak_measurement: pointer parameters must be positive");
  const WeakValueResult wv = weak_value(a, pre, post);
  require(pointer.pointer_std >= 10.0 * pointer.coupling * std::abs(wv.value),
          "simulate_weak_measurement: weak-regime guard sigma >= 10 gamma |A_w| violated");
  RngStream rng(seed);
  const long long n_success = rng.binomial(n, wv.denominator);
  if (n_success == 0) {
    throw std::runtime_error("simulate_weak_measurement: no-data, every run failed "
                             "post-selection");
  }
  const double mean_shift = pointer.coupling * wv.value.real();
  const double sample_mean =
      rng.normal(mean_shift, pointer.pointer_std / std::sqrt(static_cast<double>(n_success)));
  return {sample_mean / pointer.coupling, n_success};
}

ComplexityReport compare_sample_complexity(const std::vector<double>& overlaps, double epsilon,
                                           double delta, int repetitions, std::uint64_t seed,
                                           int threads) {
  require(!overlaps.empty(), "compare_sample_complexity: empty overlap sweep");
  require(repetitions >= 2, "compare_sample_complexity: need at least two repetitions");
  for (double d2 : overlaps)
    require(d2 > 0.0 && d2 <= 1.0, "compare_sample_complexity: overlaps must lie in (0, 1]");

  const long long n_part = hoeffding_samples(epsilon, delta);
  const PointerModel pointer{0.1, 1.0};  // sigma/gamma = 10 = 10 |A_w|, the guard boundary

  ComplexityReport report;
  std::vector<double> cycle_err, weak_err, weighted_err;
  RngStream root(seed);
  std::uint64_t cell_id = 0;
  for (double delta2 : overlaps) {
    const SweepInstance inst = sweep_instance(delta2);

    // equal split
    ComplexityCell cycle = run_cycle_cell(inst, delta2, epsilon, n_part, n_part, repetitions,
                                          root.derive(cell_id++).next_u64(), "cycle", threads);
    report.cells.push_back(cycle);
    cycle_err.push_back(cycle.mean_abs_error);

    // overlap-weighted split of the same total budget: the SWAP test gets a
    // 1/Delta_2 share
    const long long total = 2 * n_part;
    const long long n2w = static_cast<long long>(
        std::llround(static_cast<double>(total) / (1.0 + delta2)));
    const long long n3w = std::max<long long>(1, total - n2w);
    ComplexityCell weighted =
        run_cycle_cell(inst, delta2, epsilon, n3w, std::max<long long>(1, n2w), repetitions,
                       root.derive(cell_id++).next_u64(), "cycle-weighted", threads);
    report.cells.push_back(weighted);
    weighted_err.push_back(weighted.mean_abs_error);

    // standard weak measurement with the same total number of state samples
    std::vector<double> errors(repetitions);
    RngStream weak_root = root.derive(cell_id++);
    parallel_for(repetitions, threads, [&](long long rep) {
      const WeakMeasurementResult r = simulate_weak_measurement(
          inst.pre, inst.post, inst.a, pointer, total, weak_root.derive(rep).next_u64());
      errors[rep] = std::abs(r.estimate - inst.a_w_real);
    });
    CompensatedSum sum, sum_sq;
    for (double e : errors) {
      sum.add(e);
      sum_sq.add(e * e);
    }
    ComplexityCell weak;
    weak.scheme = "weak";
    weak.delta2 = delta2;
    weak.epsilon = epsilon;
    weak.shots = total;
    weak.mean_abs_error = sum.value() / repetitions;
    weak.stderr_mean = std::sqrt(
        std::max(0.0, sum_sq.value() / repetitions - weak.mean_abs_error * weak.mean_abs_error) /
        repetitions);
    weak.seed = weak_root.stream();
    report.cells.push_back(weak);
    weak_err.push_back(weak.mean_abs_error);
  }

  std::vector<double> xs(overlaps.begin(), overlaps.end());
  report.cycle_exponent = log_log_slope(xs, cycle_err);
  report.weak_exponent = log_log_slope(xs, weak_err);
  report.weighted_exponent = log_log_slope(xs, weighted_err);
  return report;
}

SpectrumSamplingPlan spectrum_sampling_plan(int d, double epsilon, double delta) {
  require(d >= 2, "spectrum_sampling_plan: dimension must be at least 2");
  SpectrumSamplingPlan plan;
  plan.d = d;
  plan.epsilon = epsilon;
  plan.delta = delta;
  plan.shots_per_trace = hoeffding_samples(epsilon, delta / (d - 1));
  plan.total_copies = 0;
  for (int n = 2; n <= d; ++n) plan.total_copies += static_cast<long long>(n) * plan.shots_per_trace;
  plan.total_measurements = static_cast<long long>(d - 1) * plan.shots_per_trace;
  return plan;
}

std::vector<double> sample_traces(const DensityMatrix& rho, int max_n, long long shots_per_trace,
                                  std::uint64_t seed) {
  require(max_n >= 1, "sample_traces: max_n must be positive");
  require(shots_per_trace >= 1, "sample_traces: shots must be positive");
  std::vector<double> traces;
  traces.reserve(max_n);
  traces.push_back(1.0);  // Tr(rho) needs no circuit
  RngStream root(seed);
  for (int n = 2; n <= max_n; ++n) {
    const CircuitIR circuit = build_cycle_test(n, rho.dim(), 0);
    const std::vector<StateInput> inputs(static_cast<std::size_t>(n), StateInput{rho});
    const ShotRecord record =
        sample_shots(circuit, inputs, shots_per_trace, root.derive(n).next_u64());
    traces.push_back(2.0 * static_cast<double>(record.count0) / record.shots - 1.0);
  }
  return traces;
}

}  // namespace invlab
