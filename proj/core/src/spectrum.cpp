#include "invlab/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "invlab/invariants.hpp"
#include "invlab/parallel.hpp"
#include "invlab/rng.hpp"

namespace invlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

constexpr double kResidualTol = 1e-12;
constexpr int kMaxPolishIters = 64;

// elementary symmetric polynomials from power sums
std::vector<double> newton_elementary(const std::vector<double>& p, int count) {
  std::vector<double> e(count + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= count; ++k) {
    double acc = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= k; ++j) {
      acc += sign * e[k - j] * p[j - 1];
      sign = -sign;
    }
    e[k] = acc / k;
  }
  return e;
}

cplx horner(const std::vector<double>& coeffs, cplx x) {
  cplx acc = coeffs[0];
  for (std::size_t k = 1; k < coeffs.size(); ++k) acc = acc * x + coeffs[k];
  return acc;
}

cplx horner_derivative(const std::vector<double>& coeffs, cplx x) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  cplx acc = static_cast<double>(d) * coeffs[0];
  for (int k = 1; k < d; ++k) acc = acc * x + static_cast<double>(d - k) * coeffs[k];
  return acc;
}

std::vector<cplx> roots_of_monic(const std::vector<double>& coeffs) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  require(d >= 1, "poly_roots: degree must be positive");
  if (d == 1) return {cplx(-coeffs[1], 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k < d; ++k) companion(k, k - 1) = 1.0;
  for (int k = 0; k < d; ++k) companion(k, d - 1) = -coeffs[d - k];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw RootFindingError("poly_roots: companion eigensolver failed", {});
  }
  std::vector<cplx> roots(d);
  for (int k = 0; k < d; ++k) roots[k] = solver.eigenvalues()(k);

  // Newton polish each root against the original coefficients
  std::vector<cplx> raw = roots;
  bool all_converged = true;
  for (auto& root : roots) {
    int iter = 0;
    while (std::abs(horner(coeffs, root)) > kResidualTol && iter < kMaxPolishIters) {
      const cplx deriv = horner_derivative(coeffs, root);
      if (std::abs(deriv) < 1e-300) break;
      root -= horner(coeffs, root) / deriv;
      ++iter;
    }
    if (std::abs(horner(coeffs, root)) > kResidualTol) all_converged = false;
  }
  if (!all_converged) {
    throw RootFindingError("poly_roots: residual tolerance not reached after polishing",
                           std::move(raw));
  }
  return roots;
}

std::vector<double> gaussian_noise(RngStream& rng, int count, double stddev) {
  std::vector<double> noise(count);
  for (int k = 0; k < count; ++k) noise[k] = stddev == 0.0 ? 0.0 : rng.normal(0.0, stddev);
  return noise;
}

}  // namespace

cplx CharPoly::eval(cplx x) const { return horner(coefficients, x); }

CharPoly newton_coefficients(const std::vector<double>& power_sums) {
  require(!power_sums.empty(), "newton_coefficients: empty power-sum list");
  require(std::abs(power_sums[0] - 1.0) <= 0.1,
          "newton_coefficients: Tr(rho) must be close to one");
  const int d = static_cast<int>(power_sums.size());
  const std::vector<double> e = newton_elementary(power_sums, d);
  CharPoly poly;
  poly.coefficients.resize(d + 1);
  double sign = 1.0;
  for (int k = 0; k <= d; ++k) {
    poly.coefficients[k] = sign * e[k];
    sign = -sign;
  }
  return poly;
}

std::vector<cplx> poly_roots(const CharPoly& poly) {
  require(!poly.coefficients.empty() && poly.coefficients[0] == 1.0,
          "poly_roots: polynomial must be monic");
  return roots_of_monic(poly.coefficients);
}

SpectrumEstimate spectrum_from_traces(const std::vector<double>& power_sums) {
  const CharPoly poly = newton_coefficients(power_sums);
  std::vector<cplx> roots = poly_roots(poly);
  std::sort(roots.begin(), roots.end(),
            [](cplx a, cplx b) { return a.real() > b.real(); });
  SpectrumEstimate estimate;
  estimate.eigenvalues.reserve(roots.size());
  estimate.discarded_imag.reserve(roots.size());
  for (const cplx& root : roots) {
    estimate.eigenvalues.push_back(root.real());
    estimate.discarded_imag.push_back(std::abs(root.imag()));
  }
  return estimate;
}

double largest_eigenvalue_truncated(const std::vector<double>& power_sums, int d, int k) {
  require(d >= 2, "largest_eigenvalue_truncated: dimension must be at least 2");
  require(k >= 0 && k <= d - 2, "largest_eigenvalue_truncated: truncation out of range");
  const int kept = d - k;  // coefficients of lambda^d .. lambda^k
  require(static_cast<int>(power_sums.size()) >= kept,
          "largest_eigenvalue_truncated: need power sums up to order d-k");
  std::vector<double> p(power_sums.begin(), power_sums.begin() + kept);
  require(std::abs(p[0] - 1.0) <= 0.1, "largest_eigenvalue_truncated: Tr(rho) must be close to one");
  const std::vector<double> e = newton_elementary(p, kept);
  // divide out lambda^k: the truncated polynomial has degree d-k
  std::vector<double> coeffs(kept + 1);
  double sign = 1.0;
  for (int j = 0; j <= kept; ++j) {
    coeffs[j] = sign * e[j];
    sign = -sign;
  }
  const std::vector<cplx> roots = roots_of_monic(coeffs);
  double largest = -std::numeric_limits<double>::infinity();
  for (const cplx& root : roots) largest = std::max(largest, root.real());
  return largest;
}

std::vector<NoiseStudyRow> noise_study(const std::vector<int>& dims,
                                       const std::vector<double>& epsilons, int n_states,
                                       int n_noisy, std::uint64_t seed, int threads, int rank) {
  require(!dims.empty() && !epsilons.empty(), "noise_study: empty dimension or epsilon list");
  require(n_states >= 1 && n_noisy >= 1, "noise_study: counts must be at least 1");

  std::vector<NoiseStudyRow> rows;
  for (std::size_t dim_idx = 0; dim_idx < dims.size(); ++dim_idx) {
    const int d = dims[dim_idx];
    require(d >= 2, "noise_study: dimension must be at least 2");
    const int state_rank = rank == 0 ? d : rank;

    // per (state, epsilon): RMSE triples, written by index so threading cannot
    // reorder the aggregation
    std::vector<std::vector<std::array<double, 3>>> per_state(
        n_states, std::vector<std::array<double, 3>>(epsilons.size()));

    RngStream root(seed);
    parallel_for(n_states, threads, [&](long long state_idx) {
      RngStream state_rng = root.derive((dim_idx << 32) | static_cast<std::uint64_t>(state_idx));
      const DensityMatrix rho = random_ginibre_density(d, state_rank, state_rng);
      const std::vector<double> traces = univariate_traces(rho, d);
      const SpectrumEstimate reference = spectrum_from_traces(traces);

      for (std::size_t eps_idx = 0; eps_idx < epsilons.size(); ++eps_idx) {
        const double eps = epsilons[eps_idx];
        RngStream noise_rng = state_rng.derive(eps_idx);
        double sq_real = 0.0, sq_imag = 0.0, sq_largest = 0.0;
        for (int draw = 0; draw < n_noisy; ++draw) {
          std::vector<double> noisy = traces;
          const std::vector<double> noise = gaussian_noise(noise_rng, d - 1, eps);
          for (int n = 1; n < d; ++n) noisy[n] += noise[n - 1];  // Tr(rho) stays exactly 1
          const SpectrumEstimate est = spectrum_from_traces(noisy);
          for (int j = 0; j < d; ++j) {
            const double dr = est.eigenvalues[j] - reference.eigenvalues[j];
            const double di = est.discarded_imag[j] - reference.discarded_imag[j];
            sq_real += dr * dr;
            sq_imag += di * di;
          }
          const double dl = est.eigenvalues[0] - reference.eigenvalues[0];
          sq_largest += dl * dl;
        }
        const double denom_full = static_cast<double>(n_noisy) * d;
        per_state[state_idx][eps_idx] = {std::sqrt(sq_real / denom_full),
                                         std::sqrt(sq_imag / denom_full),
                                         std::sqrt(sq_largest / n_noisy)};
      }
    });

    for (std::size_t eps_idx = 0; eps_idx < epsilons.size(); ++eps_idx) {
      CompensatedSum real_sum, imag_sum, largest_sum;
      for (int s = 0; s < n_states; ++s) {
        real_sum.add(per_state[s][eps_idx][0]);
        imag_sum.add(per_state[s][eps_idx][1]);
        largest_sum.add(per_state[s][eps_idx][2]);
      }
      NoiseStudyRow row;
      row.dim = d;
      row.epsilon = epsilons[eps_idx];
      row.rmse_real_full = real_sum.value() / n_states;
      row.rmse_imag_full = imag_sum.value() / n_states;
      row.rmse_largest = largest_sum.value() / n_states;
      row.n_states = n_states;
      row.n_noisy = n_noisy;
      row.seed = seed;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace invlab
