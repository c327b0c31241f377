#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "invlab/states.hpp"

namespace invlab {

// Monic characteristic polynomial, coefficients in descending powers
// (length degree + 1, leading coefficient 1).
struct CharPoly {
  std::vector<double> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  cplx eval(cplx x) const;
};

struct SpectrumEstimate {
  std::vector<double> eigenvalues;     // real parts, sorted descending
  std::vector<double> discarded_imag;  // |imaginary part| per root, same order
};

// Raised when root polishing cannot reach the residual tolerance; carries the
// unpolished roots.
class RootFindingError : public std::runtime_error {
 public:
  RootFindingError(const std::string& what, std::vector<cplx> partial)
      : std::runtime_error(what), partial_roots(std::move(partial)) {}
  std::vector<cplx> partial_roots;
};

// Newton-identity recurrence k e_k = sum_{j=1..k} (-1)^{j-1} e_{k-j} p_j;
// coefficient of lambda^{d-k} is (-1)^k e_k.
CharPoly newton_coefficients(const std::vector<double>& power_sums);

// Companion-matrix eigenvalues refined by complex Newton steps; each root is
// required to reach residual |p(root)| <= 1e-12.
std::vector<cplx> poly_roots(const CharPoly& poly);

SpectrumEstimate spectrum_from_traces(const std::vector<double>& power_sums);

// Keeps only the coefficients of degrees d..k (those depending on
// Tr(rho^2)..Tr(rho^{d-k})) and returns the largest real root of the
// truncated polynomial.
double largest_eigenvalue_truncated(const std::vector<double>& power_sums, int d, int k);

struct NoiseStudyRow {
  int dim = 0;
  double epsilon = 0.0;
  double rmse_real_full = 0.0;
  double rmse_imag_full = 0.0;
  double rmse_largest = 0.0;
  int n_states = 0;
  int n_noisy = 0;
  std::uint64_t seed = 0;
};

// Gaussian trace-noise study over Ginibre states. For each state the exact
// traces of orders 2..d are perturbed n_noisy times by N(0, epsilon^2)
// (Tr rho is pinned at 1), squared errors are pooled over all eigenvalues of
// the state, and the per-state RMSE is averaged over states with compensated
// summation. rank = 0 draws full-rank states.
std::vector<NoiseStudyRow> noise_study(const std::vector<int>& dims,
                                       const std::vector<double>& epsilons, int n_states,
                                       int n_noisy, std::uint64_t seed, int threads = 0,
                                       int rank = 0);

}  // namespace invlab
