#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "invlab/rng.hpp"

namespace invlab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Raised when a computed quantity violates an identity it is supposed to
// satisfy (e.g. a provably real value with a large imaginary residue).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normalized complex state vector.
class PureState {
 public:
  explicit PureState(Vec amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vec& amplitudes() const { return amplitudes_; }
  cplx amplitude(int k) const { return amplitudes_(k); }

  Mat projector() const { return amplitudes_ * amplitudes_.adjoint(); }
  cplx inner(const PureState& other) const;  // <this|other>
  bool is_real(double tol = 1e-12) const;

  static PureState basis_state(int dim, int k);

 private:
  Vec amplitudes_;
};

// Trace-one positive semidefinite Hermitian matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }
  double purity() const;

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix diagonal(const std::vector<double>& probabilities);

 private:
  Mat matrix_;
};

// Hermitian operator together with its spectral decomposition. Eigenvalues are
// sorted descending; eigenvalues closer than the degeneracy gap are merged
// into a single projector, and an orthonormal basis of each eigenspace is kept
// for invariant-style sums over eigenvectors.
class Observable {
 public:
  Observable(Mat matrix, std::vector<double> eigenvalues,
             std::vector<Mat> projectors, std::vector<std::vector<Vec>> eigenbases);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<Mat>& projectors() const { return projectors_; }
  const std::vector<std::vector<Vec>>& eigenbases() const { return eigenbases_; }
  double min_eigenvalue() const { return eigenvalues_.back(); }
  double max_eigenvalue() const { return eigenvalues_.front(); }

 private:
  Mat matrix_;
  std::vector<double> eigenvalues_;
  std::vector<Mat> projectors_;
  std::vector<std::vector<Vec>> eigenbases_;
};

// Projection-valued measure: orthogonal projectors summing to the identity.
class PVM {
 public:
  explicit PVM(std::vector<Mat> projectors);

  int dim() const { return static_cast<int>(projectors_.front().rows()); }
  int size() const { return static_cast<int>(projectors_.size()); }
  const Mat& projector(int k) const { return projectors_.at(k); }
  const std::vector<Mat>& projectors() const { return projectors_; }

  static PVM from_observable(const Observable& obs);

 private:
  std::vector<Mat> projectors_;
};

class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(std::vector<PureState> vectors);

  int dim() const { return vectors_.front().dim(); }
  const PureState& vector(int k) const { return vectors_.at(k); }
  const std::vector<PureState>& vectors() const { return vectors_; }
  PVM to_pvm() const;

  static OrthonormalBasis computational(int dim);
  // Discrete Fourier basis; mutually unbiased with the computational basis in
  // every dimension.
  static OrthonormalBasis fourier(int dim);
  static OrthonormalBasis from_columns(const Mat& unitary);

 private:
  std::vector<PureState> vectors_;
};

// Haar-uniform pure state.
PureState random_pure_state(int dim, RngStream& rng);
PureState random_pure_state(int dim, std::uint64_t seed);

// Uniform on the real unit sphere (used for real-amplitude triples).
PureState random_real_pure_state(int dim, RngStream& rng);

// rho = G G^dagger / Tr(G G^dagger) with G a dim x rank standard complex
// Gaussian matrix.
DensityMatrix random_ginibre_density(int dim, int rank, RngStream& rng);
DensityMatrix random_ginibre_density(int dim, int rank, std::uint64_t seed);

// Random diagonal (set-incoherent) state: a uniform probability vector.
DensityMatrix random_diagonal_density(int dim, RngStream& rng);

// Haar-random unitary via QR of a complex Ginibre matrix.
Mat random_unitary(int dim, RngStream& rng);

// Spectral decomposition of a Hermitian matrix; eigenvalues with gaps below
// `degeneracy_gap` are merged.
Observable spectral_decompose(const Mat& hermitian, double degeneracy_gap = 1e-9);

bool is_hermitian(const Mat& m, double tol = 1e-10);
bool is_unitary(const Mat& m, double tol = 1e-10);

}  // namespace invlab
