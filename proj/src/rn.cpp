#include "cpkernel/rn.hpp"

#include <algorithm>
#include <cmath>

namespace cpkernel {

RNDerivative rn_derivative(const KolmogorovFactor& kf, const PDKernel& l, double tol) {
  if (l.point_count() != kf.n_points || l.fiber_dim != kf.fiber_dim)
    throw Error(errc::dimension_mismatch, "rn_derivative: L lives on a different space");

  const ComplexMatrix gl = gram(l);
  const ComplexMatrix gk = kf.W.adjoint() * kf.W;
  const double scale = std::max(1.0, op_norm(gk));

  const PsdCheck dom = psd_check(gk - gl, tol);
  if (!dom.is_psd)
    throw Error(errc::not_dominated,
                "rn_derivative: K - L has min eigenvalue " + std::to_string(dom.min_eig));

  const ComplexMatrix wplus = pinv(kf.W).pinv;
  // Range inclusion: columns of gram(L) must lie in range(gram(K)) = range(W*).
  const Eigen::Index nd = kf.W.cols();
  const ComplexMatrix row_proj = wplus * kf.W;
  const double range_residual =
      op_norm((ComplexMatrix::Identity(nd, nd) - row_proj) * gl) / std::max(1.0, op_norm(gl));
  if (range_residual > 1e-7)
    throw Error(errc::not_dominated,
                "rn_derivative: gram(L) leaves range(gram(K)) by " +
                    std::to_string(range_residual));

  RNDerivative out;
  out.a = hermitian_part(wplus.adjoint() * gl * wplus);
  out.reconstruction_residual = op_norm(kf.W.adjoint() * out.a * kf.W - gl) / scale;

  const HermitianEigen eig = hermitian_eigen(out.a);
  out.min_eig = eig.values.size() > 0 ? eig.values(0) : 0.0;
  out.max_eig = eig.values.size() > 0 ? eig.values(eig.values.size() - 1) : 0.0;

  if (out.reconstruction_residual > kReconTol || out.min_eig < -kPsdTol ||
      out.max_eig > 1.0 + kPsdTol)
    throw Error(errc::not_dominated,
                "rn_derivative: verification failed (reconstruction " +
                    std::to_string(out.reconstruction_residual) + ", spectrum [" +
                    std::to_string(out.min_eig) + ", " + std::to_string(out.max_eig) + "])");
  return out;
}

RNDerivative rn_iterated(const LiftSet& lifts, const KolmogorovFactor& kf, const Word& w,
                         const CPMapSet& maps, double tol) {
  for (const auto& [label, lf] : lifts)
    if (!is_subunital(lf.source, tol))
      throw Error(errc::not_subunital, "rn_iterated: map '" + label + "' is not subunital");
  const Certificate cert = certify(lifts);
  if (!cert.model_contractive)
    throw Error(errc::certificate_failed, "rn_iterated: model-contractivity certificate failed");

  const CompressedGram cg = compressed_gram(lifts, w);
  RNDerivative out;
  out.a = cg.a_w;

  const HermitianEigen eig = hermitian_eigen(out.a);
  out.min_eig = eig.values.size() > 0 ? eig.values(0) : 0.0;
  out.max_eig = eig.values.size() > 0 ? eig.values(eig.values.size() - 1) : 0.0;
  if (out.min_eig < -kPsdTol || out.max_eig > 1.0 + tol * (1.0 + static_cast<double>(w.size())))
    throw Error(errc::numerical, "rn_iterated: a_w spectrum [" + std::to_string(out.min_eig) +
                                     ", " + std::to_string(out.max_eig) +
                                     "] escapes [0, 1] under a contractive certificate");

  // Oracle match and kernel domination, both against the direct route.
  const PDKernel base = kernel_from_factor(kf, [&] {
    std::vector<std::string> ids;
    for (Eigen::Index i = 0; i < kf.n_points; ++i) ids.push_back("p" + std::to_string(i));
    return ids;
  }());
  const PDKernel kw = iterate_kernel(base, w, maps);
  const double scale = std::max(1.0, op_norm(kf.W.adjoint() * kf.W));
  double resid = 0.0;
  for (Eigen::Index i = 0; i < kf.n_points; ++i)
    for (Eigen::Index j = 0; j < kf.n_points; ++j)
      resid = std::max(resid, op_norm(realize_kernel(kf, cg, i, j) - kw.blocks[i][j]));
  out.reconstruction_residual = resid / scale;
  if (out.reconstruction_residual > kReconTol)
    throw Error(errc::numerical,
                "rn_iterated: compressed realization disagrees with direct iteration by " +
                    std::to_string(resid));
  if (!dominates(base, kw, tol).dominated)
    throw Error(errc::numerical, "rn_iterated: K_w escapes the order below K");
  return out;
}

PDKernel cross_model(const PDKernel& k1, const PDKernel& k2, const KolmogorovFactor& kf2,
                     const LiftSet& lifts2, const Word& w, const CPMapSet& maps, double tol) {
  const Domination dom = dominates(k2, k1, tol);
  if (!dom.dominated)
    throw Error(errc::not_dominated,
                "cross_model: K1 is not dominated by K2 (min eig " +
                    std::to_string(dom.min_eig) + ")");
  for (const auto& label : w) {
    auto it = lifts2.find(label);
    if (it == lifts2.end())
      throw Error(errc::unknown_label, "cross_model: no lifted family '" + label + "'");
    if (!it->second.admissible)
      throw Error(errc::lift_inadmissible, "cross_model: family '" + label + "' inadmissible");
  }

  ComplexMatrix b = rn_derivative(kf2, k1, tol).a;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    b = lifted_apply(lifts2.at(*it), b);
  b = hermitian_part(b);

  PDKernel out = k1;
  for (Eigen::Index i = 0; i < kf2.n_points; ++i)
    for (Eigen::Index j = 0; j < kf2.n_points; ++j)
      out.blocks[i][j] = kf2.slice(i).adjoint() * b * kf2.slice(j);

  const PDKernel oracle = iterate_kernel(k1, w, maps);
  const double scale = std::max(1.0, op_norm(gram(k2)));
  double resid = 0.0;
  for (Eigen::Index i = 0; i < out.point_count(); ++i)
    for (Eigen::Index j = 0; j < out.point_count(); ++j)
      resid = std::max(resid, op_norm(out.blocks[i][j] - oracle.blocks[i][j]));
  if (resid > kReconTol * scale)
    throw Error(errc::numerical,
                "cross_model: compressed fold disagrees with direct iteration by " +
                    std::to_string(resid));
  return out;
}

}  // namespace cpkernel
