#include "cpkernel/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace cpkernel {

namespace {

void check_structure(const PDKernel& k) {
  const Eigen::Index n = k.point_count();
  const Eigen::Index d = k.fiber_dim;
  if (n == 0 || d <= 0)
    throw Error(errc::dimension_mismatch, "kernel: empty point set or non-positive fiber dim");
  if (static_cast<Eigen::Index>(k.blocks.size()) != n)
    throw Error(errc::dimension_mismatch, "kernel: block row count != point count");
  for (const auto& row : k.blocks) {
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw Error(errc::dimension_mismatch, "kernel: block column count != point count");
    for (const auto& b : row) {
      if (b.rows() != d || b.cols() != d)
        throw Error(errc::dimension_mismatch, "kernel: block shape != fiber_dim");
      if (!all_finite(b)) throw Error(errc::numerical, "kernel: non-finite block entries");
    }
  }
}

}  // namespace

std::optional<Eigen::Index> PDKernel::index_of(const std::string& id) const {
  for (Eigen::Index i = 0; i < point_count(); ++i)
    if (points[i] == id) return i;
  return std::nullopt;
}

PDKernel kernel_from_gram(const std::vector<std::string>& points, Eigen::Index fiber_dim,
                          const ComplexMatrix& g) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  if (g.rows() != n * fiber_dim || g.cols() != n * fiber_dim)
    throw Error(errc::dimension_mismatch, "kernel_from_gram: gram shape mismatch");
  PDKernel k;
  k.points = points;
  k.fiber_dim = fiber_dim;
  k.blocks.assign(n, std::vector<ComplexMatrix>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      k.blocks[i][j] = g.block(i * fiber_dim, j * fiber_dim, fiber_dim, fiber_dim);
  return k;
}

ComplexMatrix gram(const PDKernel& k) {
  check_structure(k);
  const Eigen::Index n = k.point_count();
  const Eigen::Index d = k.fiber_dim;
  ComplexMatrix g(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g.block(i * d, j * d, d, d) = k.blocks[i][j];
  return g;
}

ValidationReport validate(const PDKernel& k, double tol) {
  ValidationReport report;
  check_structure(k);
  const Eigen::Index n = k.point_count();

  double herm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      herm = std::max(herm,
                      (k.blocks[i][j] - k.blocks[j][i].adjoint()).cwiseAbs().maxCoeff());
  report.hermitian_residual = herm;

  const ComplexMatrix g = gram(k);
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const bool herm_ok = herm <= kHermTol * gscale;

  const PsdCheck psd = psd_check(g, tol);
  report.min_gram_eig = psd.min_eig;
  report.gram_psd = psd.is_psd;

  double cs_slack = -std::numeric_limits<double>::infinity();
  std::vector<double> diag_norms(n);
  for (Eigen::Index i = 0; i < n; ++i) diag_norms[i] = op_norm(k.blocks[i][i]);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double lhs = op_norm(k.blocks[i][j]);
      const double rhs = std::sqrt(diag_norms[i] * diag_norms[j]);
      cs_slack = std::max(cs_slack, lhs - rhs);
    }
  report.cauchy_schwarz_slack = cs_slack;
  report.cauchy_schwarz_ok = cs_slack <= tol;

  report.passed = herm_ok && report.gram_psd && report.cauchy_schwarz_ok;
  if (!report.gram_psd) report.error = errc::not_psd;
  return report;
}

ComplexMatrix KolmogorovFactor::slice(Eigen::Index x) const {
  if (x < 0 || x >= n_points)
    throw Error(errc::dimension_mismatch, "KolmogorovFactor::slice: point index out of range");
  return W.middleCols(x * fiber_dim, fiber_dim);
}

KolmogorovFactor kolmogorov(const PDKernel& k, double rank_tol) {
  const ValidationReport report = validate(k);
  if (!report.passed)
    throw Error(errc::not_psd, "kolmogorov: kernel fails validation (min gram eig " +
                                   std::to_string(report.min_gram_eig) + ")");
  const ComplexMatrix g = gram(k);
  const HermitianEigen eig = hermitian_eigen(g);
  const Eigen::Index nd = g.rows();
  const double lambda_max = eig.values.size() > 0 ? eig.values(eig.values.size() - 1) : 0.0;
  const double cut = rank_tol * std::max(lambda_max, 0.0);

  // Rows of W are sqrt(lambda_i) u_i*, taken in descending eigenvalue order.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i)
    if (eig.values(i) > cut && eig.values(i) > 0.0) keep.push_back(i);

  KolmogorovFactor kf;
  kf.rank = static_cast<Eigen::Index>(keep.size());
  kf.n_points = k.point_count();
  kf.fiber_dim = k.fiber_dim;
  kf.rank_tol_used = rank_tol;
  kf.W.resize(kf.rank, nd);
  for (Eigen::Index r = 0; r < kf.rank; ++r)
    kf.W.row(r) = std::sqrt(eig.values(keep[r])) * eig.vectors.col(keep[r]).adjoint();
  return kf;
}

Complex scalar_lift(const KolmogorovFactor& kf, Eigen::Index x, const ComplexVector& a,
                    Eigen::Index y, const ComplexVector& b) {
  if (a.size() != kf.fiber_dim || b.size() != kf.fiber_dim)
    throw Error(errc::dimension_mismatch, "scalar_lift: vector length != fiber_dim");
  return (kf.slice(x) * a).dot(kf.slice(y) * b);
}

PDKernel kernel_from_factor(const KolmogorovFactor& kf, const std::vector<std::string>& points) {
  if (static_cast<Eigen::Index>(points.size()) != kf.n_points)
    throw Error(errc::dimension_mismatch, "kernel_from_factor: point id count mismatch");
  PDKernel k;
  k.points = points;
  k.fiber_dim = kf.fiber_dim;
  k.blocks.assign(kf.n_points, std::vector<ComplexMatrix>(kf.n_points));
  for (Eigen::Index i = 0; i < kf.n_points; ++i)
    for (Eigen::Index j = 0; j < kf.n_points; ++j)
      k.blocks[i][j] = kf.slice(i).adjoint() * kf.slice(j);
  return k;
}

Domination dominates(const PDKernel& k, const PDKernel& l, double tol) {
  if (k.point_count() != l.point_count() || k.fiber_dim != l.fiber_dim)
    throw Error(errc::dimension_mismatch, "dominates: kernels live on different spaces");
  const PsdCheck psd = psd_check(gram(k) - gram(l), tol);
  return {psd.is_psd, psd.min_eig};
}

}  // namespace cpkernel
