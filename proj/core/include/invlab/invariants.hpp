#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invlab/states.hpp"

namespace invlab {

// n-th order Bargmann invariant Delta_n(rho_1,...,rho_n) = Tr(rho_1 ... rho_n)
// together with the argument order that produced it.
struct BargmannValue {
  int order = 0;
  cplx value{};
  std::vector<std::string> argument_labels;
};

// Kirkwood-Dirac table xi(rho | i, f) over the phase space I x F.
class KDGrid {
 public:
  KDGrid(Mat values, OrthonormalBasis basis_i, OrthonormalBasis basis_f);

  int dim() const { return static_cast<int>(values_.rows()); }
  cplx value(int i, int f) const { return values_(i, f); }
  const Mat& values() const { return values_; }
  const OrthonormalBasis& basis_i() const { return basis_i_; }
  const OrthonormalBasis& basis_f() const { return basis_f_; }

 private:
  Mat values_;
  OrthonormalBasis basis_i_;
  OrthonormalBasis basis_f_;
};

struct WeakValueResult {
  cplx value{};
  // eigenvalue -> Delta_3(phi, a, psi), summed over an orthonormal basis of
  // each eigenprojector's range
  std::map<double, cplx> numerator_terms;
  double denominator = 0.0;  // Delta_2(phi, psi)
};

enum class WeakValueClass { classical, anomalous_real, anomalous_imaginary };

// Fine-grained OTOC quasiprobability table, indexed by eigenvector labels
// (v1, w2, v2, w3) of V, W, V, W respectively (each axis runs over dim values;
// eigenvalue(axis, index) gives the associated eigenvalue).
struct OtocTable {
  int dim = 0;
  std::vector<cplx> entries;  // flattened, index = ((v1*d + w2)*d + v2)*d + w3
  std::vector<double> v_eigenvalues;  // per eigenvector label
  std::vector<double> w_eigenvalues;

  cplx at(int v1, int w2, int v2, int w3) const {
    return entries[static_cast<std::size_t>(((v1 * dim + w2) * dim + v2) * dim + w3)];
  }
};

struct OtocResult {
  cplx value{};          // direct trace Tr(W(t)^dag V^dag W(t) V rho)
  cplx invariant_sum{};  // coarse-grained sum over eigenprojector invariants
  OtocTable fine_grained;
};

BargmannValue bargmann(const std::vector<DensityMatrix>& states,
                       std::vector<std::string> labels = {});
BargmannValue bargmann(const std::vector<PureState>& states,
                       std::vector<std::string> labels = {});

double overlap(const DensityMatrix& a, const DensityMatrix& b);
double overlap(const PureState& a, const PureState& b);

// [Tr(rho), Tr(rho^2), ..., Tr(rho^max_n)]
std::vector<double> univariate_traces(const DensityMatrix& rho, int max_n);

cplx kd_value(const DensityMatrix& rho, const PureState& i, const PureState& f);
KDGrid kd_distribution(const DensityMatrix& rho, const OrthonormalBasis& basis_i,
                       const OrthonormalBasis& basis_f);

// Tr(Pi^1_{k1} ... Pi^n_{kn} rho)
cplx extended_kd(const DensityMatrix& rho, const std::vector<PVM>& pvms,
                 const std::vector<int>& outcomes);

// Inverts the KD map; requires <i|f> != 0 at every phase-space point.
DensityMatrix reconstruct_from_kd(const KDGrid& grid);

WeakValueResult weak_value(const Observable& a, const PureState& pre, const PureState& post);
WeakValueClass anomaly_check(const WeakValueResult& result, const Observable& a, double tol);

// Quantum Fisher information of the post-selected state for the phase family
// U_theta = exp(-i theta G) applied to |psi>, conditioned on the projector F.
double ps_qfi(const PureState& psi, const Observable& generator, const Mat& post_projector,
              double theta);

OtocResult otoc(const DensityMatrix& rho, const Observable& w, const Observable& v, const Mat& u);

}  // namespace invlab
