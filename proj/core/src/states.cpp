#include "invlab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace invlab {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = 1e-10;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Mat id = Mat::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

PureState::PureState(Vec amplitudes) : amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() >= 1, "pure state: dimension must be positive");
  require(std::abs(amplitudes_.squaredNorm() - 1.0) <= kNormTol,
          "pure state: amplitudes are not normalized");
}

cplx PureState::inner(const PureState& other) const {
  require(dim() == other.dim(), "pure state: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

bool PureState::is_real(double tol) const {
  return amplitudes_.imag().cwiseAbs().maxCoeff() <= tol;
}

PureState PureState::basis_state(int dim, int k) {
  require(dim >= 1 && k >= 0 && k < dim, "basis_state: index out of range");
  Vec v = Vec::Zero(dim);
  v(k) = 1.0;
  return PureState(v);
}

DensityMatrix::DensityMatrix(Mat matrix) : matrix_(std::move(matrix)) {
  require(matrix_.rows() == matrix_.cols() && matrix_.rows() >= 1,
          "density matrix: must be square with positive dimension");
  require(is_hermitian(matrix_, kHermitianTol), "density matrix: not Hermitian");
  require(std::abs(matrix_.trace().real() - 1.0) <= kNormTol &&
              std::abs(matrix_.trace().imag()) <= kNormTol,
          "density matrix: trace is not one");
  Eigen::SelfAdjointEigenSolver<Mat> solver(matrix_, Eigen::EigenvaluesOnly);
  require(solver.eigenvalues().minCoeff() >= -kPsdTol,
          "density matrix: not positive semidefinite");
}

double DensityMatrix::purity() const {
  return (matrix_ * matrix_).trace().real();
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  require(dim >= 1, "maximally_mixed: dimension must be positive");
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probabilities) {
  const int d = static_cast<int>(probabilities.size());
  require(d >= 1, "diagonal: empty probability vector");
  Mat m = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) m(k, k) = probabilities[k];
  return DensityMatrix(std::move(m));
}

Observable::Observable(Mat matrix, std::vector<double> eigenvalues,
                       std::vector<Mat> projectors,
                       std::vector<std::vector<Vec>> eigenbases)
    : matrix_(std::move(matrix)),
      eigenvalues_(std::move(eigenvalues)),
      projectors_(std::move(projectors)),
      eigenbases_(std::move(eigenbases)) {
  const double tol = 1e-10;
  require(!eigenvalues_.empty() && eigenvalues_.size() == projectors_.size() &&
              eigenvalues_.size() == eigenbases_.size(),
          "observable: inconsistent spectral data");
  require(std::is_sorted(eigenvalues_.rbegin(), eigenvalues_.rend()),
          "observable: eigenvalues must be sorted descending");
  const int d = static_cast<int>(matrix_.rows());
  Mat sum = Mat::Zero(d, d);
  Mat reassembled = Mat::Zero(d, d);
  for (std::size_t a = 0; a < projectors_.size(); ++a) {
    const Mat& p = projectors_[a];
    require((p * p - p).cwiseAbs().maxCoeff() <= tol, "observable: projector not idempotent");
    for (std::size_t b = a + 1; b < projectors_.size(); ++b) {
      require((p * projectors_[b]).cwiseAbs().maxCoeff() <= tol,
              "observable: projectors not mutually orthogonal");
    }
    sum += p;
    reassembled += eigenvalues_[a] * p;
  }
  require((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= tol,
          "observable: projectors do not sum to the identity");
  require((reassembled - matrix_).cwiseAbs().maxCoeff() <= tol,
          "observable: spectral data does not reassemble the matrix");
}

PVM::PVM(std::vector<Mat> projectors) : projectors_(std::move(projectors)) {
  require(!projectors_.empty(), "pvm: empty projector list");
  const double tol = 1e-10;
  const int d = static_cast<int>(projectors_.front().rows());
  Mat sum = Mat::Zero(d, d);
  for (std::size_t j = 0; j < projectors_.size(); ++j) {
    const Mat& p = projectors_[j];
    require(p.rows() == d && p.cols() == d, "pvm: projector dimension mismatch");
    require(is_hermitian(p, tol), "pvm: projector not Hermitian");
    require((p * p - p).cwiseAbs().maxCoeff() <= tol, "pvm: projector not idempotent");
    for (std::size_t k = j + 1; k < projectors_.size(); ++k) {
      require((p * projectors_[k]).cwiseAbs().maxCoeff() <= tol,
              "pvm: projectors not mutually orthogonal");
    }
    sum += p;
  }
  require((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= tol,
          "pvm: projectors do not sum to the identity");
}

PVM PVM::from_observable(const Observable& obs) {
  return PVM(obs.projectors());
}

OrthonormalBasis::OrthonormalBasis(std::vector<PureState> vectors)
    : vectors_(std::move(vectors)) {
  require(!vectors_.empty(), "basis: empty vector list");
  const int d = vectors_.front().dim();
  require(static_cast<int>(vectors_.size()) == d, "basis: must contain dim vectors");
  for (int j = 0; j < d; ++j) {
    require(vectors_[j].dim() == d, "basis: dimension mismatch");
    for (int k = j + 1; k < d; ++k) {
      require(std::abs(vectors_[j].inner(vectors_[k])) <= 1e-12,
              "basis: vectors are not orthogonal");
    }
  }
}

PVM OrthonormalBasis::to_pvm() const {
  std::vector<Mat> projectors;
  projectors.reserve(vectors_.size());
  for (const auto& v : vectors_) projectors.push_back(v.projector());
  return PVM(std::move(projectors));
}

OrthonormalBasis OrthonormalBasis::computational(int dim) {
  std::vector<PureState> vecs;
  vecs.reserve(dim);
  for (int k = 0; k < dim; ++k) vecs.push_back(PureState::basis_state(dim, k));
  return OrthonormalBasis(std::move(vecs));
}

OrthonormalBasis OrthonormalBasis::fourier(int dim) {
  require(dim >= 1, "fourier: dimension must be positive");
  std::vector<PureState> vecs;
  vecs.reserve(dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < dim; ++k) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) {
      const double phase = 2.0 * std::numbers::pi * j * k / dim;
      v(j) = norm * cplx(std::cos(phase), std::sin(phase));
    }
    vecs.emplace_back(std::move(v));
  }
  return OrthonormalBasis(std::move(vecs));
}

OrthonormalBasis OrthonormalBasis::from_columns(const Mat& unitary) {
  require(is_unitary(unitary, 1e-10), "from_columns: matrix is not unitary");
  std::vector<PureState> vecs;
  vecs.reserve(unitary.cols());
  for (int k = 0; k < unitary.cols(); ++k) {
    Vec col = unitary.col(k);
    col /= col.norm();
    vecs.emplace_back(std::move(col));
  }
  return OrthonormalBasis(std::move(vecs));
}

PureState random_pure_state(int dim, RngStream& rng) {
  require(dim >= 1, "random_pure_state: dimension must be positive");
  Vec v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(rng.normal(), rng.normal());
  v /= v.norm();
  return PureState(std::move(v));
}

PureState random_pure_state(int dim, std::uint64_t seed) {
  RngStream rng(seed);
  return random_pure_state(dim, rng);
}

PureState random_real_pure_state(int dim, RngStream& rng) {
  require(dim >= 1, "random_real_pure_state: dimension must be positive");
  Vec v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(rng.normal(), 0.0);
  v /= v.norm();
  return PureState(std::move(v));
}

DensityMatrix random_ginibre_density(int dim, int rank, RngStream& rng) {
  require(dim >= 1, "random_ginibre_density: dimension must be positive");
  require(rank >= 1 && rank <= dim, "random_ginibre_density: rank out of range");
  Mat g(dim, rank);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < rank; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  // symmetrize away rounding residue before validation
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(std::move(rho));
}

DensityMatrix random_ginibre_density(int dim, int rank, std::uint64_t seed) {
  RngStream rng(seed);
  return random_ginibre_density(dim, rank, rng);
}

DensityMatrix random_diagonal_density(int dim, RngStream& rng) {
  require(dim >= 1, "random_diagonal_density: dimension must be positive");
  std::vector<double> p(dim);
  double total = 0.0;
  for (int k = 0; k < dim; ++k) {
    p[k] = -std::log(1.0 - rng.uniform());  // Exp(1), Dirichlet(1,...,1) after normalization
    total += p[k];
  }
  for (double& x : p) x /= total;
  return DensityMatrix::diagonal(p);
}

Mat random_unitary(int dim, RngStream& rng) {
  Mat g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase ambiguity so the distribution is Haar
  for (int k = 0; k < dim; ++k) {
    cplx diag = r(k, k);
    q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

Observable spectral_decompose(const Mat& hermitian, double degeneracy_gap) {
  if (!is_hermitian(hermitian, 1e-10)) {
    throw std::invalid_argument("spectral_decompose: matrix is not Hermitian");
  }
  const int d = static_cast<int>(hermitian.rows());
  Mat sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_decompose: eigensolver failed");
  }
  // Eigen returns ascending order; walk backwards and merge near-degenerate
  // eigenvalues into a single projector.
  std::vector<double> eigenvalues;
  std::vector<Mat> projectors;
  std::vector<std::vector<Vec>> eigenbases;
  int k = d - 1;
  while (k >= 0) {
    int lo = k;
    while (lo > 0 && solver.eigenvalues()(lo) - solver.eigenvalues()(lo - 1) < degeneracy_gap) --lo;
    Mat proj = Mat::Zero(d, d);
    std::vector<Vec> basis;
    double mean = 0.0;
    for (int j = lo; j <= k; ++j) {
      Vec v = solver.eigenvectors().col(j);
      proj += v * v.adjoint();
      basis.push_back(std::move(v));
      mean += solver.eigenvalues()(j);
    }
    mean /= static_cast<double>(k - lo + 1);
    eigenvalues.push_back(mean);
    projectors.push_back(std::move(proj));
    eigenbases.push_back(std::move(basis));
    k = lo - 1;
  }
  // reassemble from merged data so the stored matrix matches the spectral form
  Mat reassembled = Mat::Zero(d, d);
  for (std::size_t a = 0; a < eigenvalues.size(); ++a) reassembled += eigenvalues[a] * projectors[a];
  return Observable(std::move(reassembled), std::move(eigenvalues), std::move(projectors),
                    std::move(eigenbases));
}

}  // namespace invlab
