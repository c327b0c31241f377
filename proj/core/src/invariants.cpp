#include "invlab/invariants.hpp"

#include <cmath>

namespace invlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) labels.push_back("rho" + std::to_string(k));
  return labels;
}

cplx product_trace(const std::vector<Mat>& factors) {
  Mat acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) acc = acc * factors[k];
  return acc.trace();
}

double real_checked(cplx z, double imag_tol, const std::string& what) {
  if (std::abs(z.imag()) > imag_tol) {
    throw ConsistencyError(what + ": imaginary residue " + std::to_string(z.imag()) +
                           " exceeds tolerance");
  }
  return z.real();
}

}  // namespace

KDGrid::KDGrid(Mat values, OrthonormalBasis basis_i, OrthonormalBasis basis_f)
    : values_(std::move(values)), basis_i_(std::move(basis_i)), basis_f_(std::move(basis_f)) {
  const int d = basis_i_.dim();
  require(values_.rows() == d && values_.cols() == d && basis_f_.dim() == d,
          "kd grid: inconsistent dimensions");
  require(std::abs(values_.sum() - cplx(1.0, 0.0)) <= 1e-10, "kd grid: entries do not sum to one");
  for (int i = 0; i < d; ++i) {
    cplx row = values_.row(i).sum();
    require(std::abs(row.imag()) <= 1e-10 && row.real() >= -1e-10 && row.real() <= 1.0 + 1e-10,
            "kd grid: row marginal is not a probability");
  }
}

BargmannValue bargmann(const std::vector<DensityMatrix>& states, std::vector<std::string> labels) {
  require(!states.empty(), "bargmann: empty state list");
  const int d = states.front().dim();
  std::vector<Mat> factors;
  factors.reserve(states.size());
  for (const auto& s : states) {
    require(s.dim() == d, "bargmann: dimension mismatch");
    factors.push_back(s.matrix());
  }
  if (labels.empty()) labels = default_labels(states.size());
  require(labels.size() == states.size(), "bargmann: label count mismatch");
  return BargmannValue{static_cast<int>(states.size()), product_trace(factors), std::move(labels)};
}

BargmannValue bargmann(const std::vector<PureState>& states, std::vector<std::string> labels) {
  std::vector<DensityMatrix> rhos;
  rhos.reserve(states.size());
  for (const auto& s : states) rhos.push_back(DensityMatrix::from_pure(s));
  return bargmann(rhos, std::move(labels));
}

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), "overlap: dimension mismatch");
  cplx tr = (a.matrix() * b.matrix()).trace();
  double value = real_checked(tr, 1e-12, "overlap");
  require(value >= -1e-12 && value <= 1.0 + 1e-10, "overlap: value outside [0,1]");
  return std::max(0.0, value);
}

double overlap(const PureState& a, const PureState& b) {
  require(a.dim() == b.dim(), "overlap: dimension mismatch");
  return std::norm(a.inner(b));
}

std::vector<double> univariate_traces(const DensityMatrix& rho, int max_n) {
  require(max_n >= 1, "univariate_traces: max_n must be positive");
  std::vector<double> traces;
  traces.reserve(max_n);
  Mat power = rho.matrix();
  traces.push_back(real_checked(power.trace(), 1e-12, "univariate_traces"));
  for (int n = 2; n <= max_n; ++n) {
    power = power * rho.matrix();
    traces.push_back(real_checked(power.trace(), 1e-12, "univariate_traces"));
  }
  return traces;
}

cplx kd_value(const DensityMatrix& rho, const PureState& i, const PureState& f) {
  require(rho.dim() == i.dim() && rho.dim() == f.dim(), "kd_value: dimension mismatch");
  // <f|i><i|rho|f>
  cplx fi = f.inner(i);
  cplx irf = (i.amplitudes().adjoint() * rho.matrix() * f.amplitudes())(0, 0);
  return fi * irf;
}

KDGrid kd_distribution(const DensityMatrix& rho, const OrthonormalBasis& basis_i,
                       const OrthonormalBasis& basis_f) {
  const int d = rho.dim();
  require(basis_i.dim() == d && basis_f.dim() == d, "kd_distribution: dimension mismatch");
  Mat values(d, d);
  for (int i = 0; i < d; ++i)
    for (int f = 0; f < d; ++f) values(i, f) = kd_value(rho, basis_i.vector(i), basis_f.vector(f));
  return KDGrid(std::move(values), basis_i, basis_f);
}

cplx extended_kd(const DensityMatrix& rho, const std::vector<PVM>& pvms,
                 const std::vector<int>& outcomes) {
  require(pvms.size() == outcomes.size(), "extended_kd: PVM/outcome count mismatch");
  require(!pvms.empty(), "extended_kd: empty PVM list");
  const int d = rho.dim();
  Mat acc = Mat::Identity(d, d);
  for (std::size_t k = 0; k < pvms.size(); ++k) {
    require(pvms[k].dim() == d, "extended_kd: dimension mismatch");
    require(outcomes[k] >= 0 && outcomes[k] < pvms[k].size(),
            "extended_kd: outcome index out of range");
    acc = acc * pvms[k].projector(outcomes[k]);
  }
  return (acc * rho.matrix()).trace();
}

DensityMatrix reconstruct_from_kd(const KDGrid& grid) {
  const int d = grid.dim();
  Mat rho = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int f = 0; f < d; ++f) {
      // xi(rho|i,f) = <f|i><i|rho|f>, so <i|rho|f> = xi / <f|i>
      cplx fi = grid.basis_f().vector(f).inner(grid.basis_i().vector(i));
      if (std::abs(fi) <= 1e-9) {
        throw std::invalid_argument("reconstruct_from_kd: unbiased-pair violation at (i=" +
                                    std::to_string(i) + ", f=" + std::to_string(f) +
                                    "): <i|f> is numerically zero");
      }
      rho += (grid.value(i, f) / fi) * grid.basis_i().vector(i).amplitudes() *
             grid.basis_f().vector(f).amplitudes().adjoint();
    }
  }
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(std::move(rho));
}

WeakValueResult weak_value(const Observable& a, const PureState& pre, const PureState& post) {
  const int d = a.dim();
  require(pre.dim() == d && post.dim() == d, "weak_value: dimension mismatch");
  const cplx post_pre = post.inner(pre);  // <phi|psi>
  const double delta2 = std::norm(post_pre);
  if (delta2 <= 1e-12) {
    throw std::invalid_argument("weak_value: undefined weak value, pre and post selection "
                                "states are (numerically) orthogonal");
  }
  WeakValueResult result;
  result.denominator = delta2;
  const cplx pre_post = std::conj(post_pre);  // <psi|phi>
  cplx numerator = 0.0;
  for (std::size_t idx = 0; idx < a.eigenvalues().size(); ++idx) {
    // Delta_3(phi, a, psi) = <phi|a><a|psi><psi|phi>, summed over an
    // orthonormal basis of the eigenspace when the eigenvalue is degenerate.
    cplx term = 0.0;
    for (const Vec& vec : a.eigenbases()[idx]) {
      cplx phi_a = post.amplitudes().dot(vec);
      cplx a_psi = vec.dot(pre.amplitudes());
      term += phi_a * a_psi * pre_post;
    }
    result.numerator_terms[a.eigenvalues()[idx]] = term;
    numerator += a.eigenvalues()[idx] * term;
  }
  result.value = numerator / delta2;
  return result;
}

WeakValueClass anomaly_check(const WeakValueResult& result, const Observable& a, double tol) {
  if (std::abs(result.value.imag()) > tol) return WeakValueClass::anomalous_imaginary;
  const double re = result.value.real();
  if (re < a.min_eigenvalue() - tol || re > a.max_eigenvalue() + tol)
    return WeakValueClass::anomalous_real;
  return WeakValueClass::classical;
}

double ps_qfi(const PureState& psi, const Observable& generator, const Mat& post_projector,
              double theta) {
  const int d = psi.dim();
  require(generator.dim() == d && post_projector.rows() == d && post_projector.cols() == d,
          "ps_qfi: dimension mismatch");
  require(is_hermitian(post_projector, 1e-10) &&
              (post_projector * post_projector - post_projector).cwiseAbs().maxCoeff() <= 1e-10,
          "ps_qfi: post-selection operator is not a projector");

  // U_theta = exp(-i theta G) via the spectral decomposition of the generator
  Mat u = Mat::Zero(d, d);
  for (std::size_t k = 0; k < generator.eigenvalues().size(); ++k) {
    const double lam = generator.eigenvalues()[k];
    u += std::exp(cplx(0.0, -theta * lam)) * generator.projectors()[k];
  }
  const Vec psi_theta = u * psi.amplitudes();
  const Mat rho_theta = psi_theta * psi_theta.adjoint();

  const double p_ps = real_checked((post_projector * rho_theta).trace(), 1e-9, "ps_qfi probability");
  if (p_ps <= 1e-10) {
    throw std::invalid_argument("ps_qfi: vanishing post-selection probability");
  }

  // eigenbasis of the generator, with eigenvalues repeated per eigenvector
  std::vector<Vec> gen_vecs;
  std::vector<double> gen_vals;
  for (std::size_t k = 0; k < generator.eigenvalues().size(); ++k) {
    for (const Vec& v : generator.eigenbases()[k]) {
      gen_vecs.push_back(v);
      gen_vals.push_back(generator.eigenvalues()[k]);
    }
  }
  // orthonormal basis of the projector's range
  Eigen::SelfAdjointEigenSolver<Mat> fsolver(post_projector);
  std::vector<Vec> f_vecs;
  for (int k = 0; k < d; ++k) {
    if (fsolver.eigenvalues()(k) > 0.5) f_vecs.push_back(fsolver.eigenvectors().col(k));
  }
  require(!f_vecs.empty(), "ps_qfi: post-selection projector has rank zero");

  // extended KD values xi(rho_theta | i, i', f) = <i|rho|i'><i'|f><f|i>
  cplx quad = 0.0;
  cplx lin = 0.0;
  for (std::size_t i = 0; i < gen_vecs.size(); ++i) {
    for (std::size_t ip = 0; ip < gen_vecs.size(); ++ip) {
      cplx i_rho_ip = (gen_vecs[i].adjoint() * rho_theta * gen_vecs[ip])(0, 0);
      for (const Vec& f : f_vecs) {
        cplx xi = i_rho_ip * gen_vecs[ip].dot(f) * f.dot(gen_vecs[i]);
        quad += gen_vals[i] * gen_vals[ip] * xi;
        lin += gen_vals[i] * xi;
      }
    }
  }
  const cplx lin_mean = lin / p_ps;
  const cplx raw = 4.0 * quad / p_ps - 4.0 * std::norm(lin_mean);
  return real_checked(raw, 1e-9, "ps_qfi");
}

OtocResult otoc(const DensityMatrix& rho, const Observable& w, const Observable& v, const Mat& u) {
  const int d = rho.dim();
  require(w.dim() == d && v.dim() == d && u.rows() == d && u.cols() == d,
          "otoc: dimension mismatch");
  require(is_unitary(u, 1e-10), "otoc: evolution matrix is not unitary");

  OtocResult result;

  // direct route: W(t) = U^dag W U
  const Mat wt = u.adjoint() * w.matrix() * u;
  result.value = (wt.adjoint() * v.matrix().adjoint() * wt * v.matrix() * rho.matrix()).trace();

  // coarse-grained route: sum over eigenprojector invariants, with the W
  // projectors evolved to W(t) = U^dag W U (eigenvalues are real, so the
  // conjugations in the weights are plain products)
  std::vector<Mat> wt_projs;
  wt_projs.reserve(w.projectors().size());
  for (const Mat& p : w.projectors()) wt_projs.push_back(u.adjoint() * p * u);
  cplx coarse = 0.0;
  for (std::size_t w3 = 0; w3 < wt_projs.size(); ++w3) {
    for (std::size_t v2 = 0; v2 < v.projectors().size(); ++v2) {
      const Mat head = wt_projs[w3] * v.projectors()[v2];
      for (std::size_t w2 = 0; w2 < wt_projs.size(); ++w2) {
        const Mat mid = head * wt_projs[w2];
        for (std::size_t v1 = 0; v1 < v.projectors().size(); ++v1) {
          const cplx tr = (mid * v.projectors()[v1] * rho.matrix()).trace();
          coarse += v.eigenvalues()[v1] * w.eigenvalues()[w2] * v.eigenvalues()[v2] *
                    w.eigenvalues()[w3] * tr;
        }
      }
    }
  }
  result.invariant_sum = coarse;
  if (std::abs(result.value - result.invariant_sum) > 1e-10) {
    throw ConsistencyError("otoc: direct trace and invariant sum disagree beyond 1e-10");
  }

  // fine-grained quasiprobability table over eigenvector labels
  std::vector<Vec> v_vecs, w_vecs;
  std::vector<double> v_vals, w_vals;
  for (std::size_t k = 0; k < v.eigenvalues().size(); ++k) {
    for (const Vec& vec : v.eigenbases()[k]) {
      v_vecs.push_back(vec);
      v_vals.push_back(v.eigenvalues()[k]);
    }
  }
  for (std::size_t k = 0; k < w.eigenvalues().size(); ++k) {
    for (const Vec& vec : w.eigenbases()[k]) {
      w_vecs.push_back(vec);
      w_vals.push_back(w.eigenvalues()[k]);
    }
  }
  OtocTable table;
  table.dim = d;
  table.v_eigenvalues = v_vals;
  table.w_eigenvalues = w_vals;
  table.entries.resize(static_cast<std::size_t>(d) * d * d * d);
  const Mat rho_udag = rho.matrix() * u.adjoint();
  for (int v1 = 0; v1 < d; ++v1) {
    for (int w2 = 0; w2 < d; ++w2) {
      const cplx w2_u_v1 = (w_vecs[w2].adjoint() * u * v_vecs[v1])(0, 0);
      for (int v2 = 0; v2 < d; ++v2) {
        const cplx v2_udag_w2 = (v_vecs[v2].adjoint() * u.adjoint() * w_vecs[w2])(0, 0);
        for (int w3 = 0; w3 < d; ++w3) {
          const cplx w3_u_v2 = (w_vecs[w3].adjoint() * u * v_vecs[v2])(0, 0);
          const cplx v1_rho_udag_w3 = (v_vecs[v1].adjoint() * rho_udag * w_vecs[w3])(0, 0);
          table.entries[static_cast<std::size_t>(((v1 * d + w2) * d + v2) * d + w3)] =
              w3_u_v2 * v2_udag_w2 * w2_u_v1 * v1_rho_udag_w3;
        }
      }
    }
  }
  result.fine_grained = std::move(table);
  return result;
}

}  // namespace invlab
