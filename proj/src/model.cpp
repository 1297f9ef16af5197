#include "cpkernel/model.hpp"

#include <algorithm>
#include <cmath>

namespace cpkernel {

namespace {

ComplexMatrix block_diag_copies(const ComplexMatrix& a, Eigen::Index n) {
  const Eigen::Index d = a.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i) out.block(i * d, i * d, d, d) = a;
  return out;
}

const LiftedFamily& resolve_lift(const LiftSet& lifts, const std::string& label) {
  auto it = lifts.find(label);
  if (it == lifts.end())
    throw Error(errc::unknown_label, "no lifted family with label '" + label + "'");
  return it->second;
}

void require_admissible(const LiftSet& lifts, const Word& w) {
  for (const auto& label : w) {
    const LiftedFamily& lf = resolve_lift(lifts, label);
    if (!lf.admissible)
      throw Error(errc::lift_inadmissible,
                  "family '" + label + "' has residual " +
                      std::to_string(*std::max_element(lf.residuals.begin(),
                                                       lf.residuals.end())) +
                      " above tolerance " + std::to_string(lf.adm_tol));
  }
}

}  // namespace

double default_adm_tol(const KolmogorovFactor& kf, const CPMap& phi) {
  double max_a = 0.0;
  for (const auto& a : phi.kraus) max_a = std::max(max_a, op_norm(a));
  return 1e-8 * op_norm(kf.W) * max_a;
}

LiftedFamily lift(const KolmogorovFactor& kf, const CPMap& phi, double adm_tol) {
  check_cpmap(phi);
  if (phi.dim() != kf.fiber_dim)
    throw Error(errc::dimension_mismatch,
                "lift: map '" + phi.label + "' does not act on the kernel fiber");

  const Eigen::Index m = kf.rank;
  const Eigen::Index nd = kf.W.cols();
  const ComplexMatrix wplus = pinv(kf.W).pinv;            // (n d) x m
  const ComplexMatrix row_proj = wplus * kf.W;            // projection onto range(W*)
  const ComplexMatrix complement = ComplexMatrix::Identity(nd, nd) - row_proj;

  LiftedFamily lf;
  lf.label = phi.label;
  lf.source = phi;
  lf.adm_tol = adm_tol;
  lf.gammas.reserve(phi.kraus.size());
  lf.residuals.reserve(phi.kraus.size());

  ComplexMatrix d_op = ComplexMatrix::Zero(m, m);
  double max_residual = 0.0;
  for (const auto& a : phi.kraus) {
    const ComplexMatrix pushed = kf.W * block_diag_copies(a, kf.n_points);
    lf.gammas.push_back(pushed * wplus);
    const double res = op_norm(pushed * complement);
    lf.residuals.push_back(res);
    max_residual = std::max(max_residual, res);
    d_op += lf.gammas.back().adjoint() * lf.gammas.back();
  }
  lf.d_op = hermitian_part(d_op);
  lf.d_norm = op_norm(lf.d_op);
  lf.admissible = max_residual <= adm_tol;
  return lf;
}

LiftedFamily lift(const KolmogorovFactor& kf, const CPMap& phi) {
  return lift(kf, phi, default_adm_tol(kf, phi));
}

LiftSet lift_all(const KolmogorovFactor& kf, const CPMapSet& maps) {
  LiftSet out;
  for (const auto& [label, phi] : maps) out.emplace(label, lift(kf, phi));
  return out;
}

ComplexMatrix lifted_apply(const LiftedFamily& lf, const ComplexMatrix& t) {
  const Eigen::Index m = lf.gammas.empty() ? 0 : lf.gammas.front().rows();
  if (t.rows() != m || t.cols() != m)
    throw Error(errc::dimension_mismatch, "lifted_apply: argument is not " + std::to_string(m) +
                                              "x" + std::to_string(m));
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (const auto& g : lf.gammas) out += g.adjoint() * t * g;
  return out;
}

CompressedGram compressed_gram(const LiftSet& lifts, const Word& w) {
  require_admissible(lifts, w);
  Eigen::Index m = 0;
  if (!w.empty()) {
    m = resolve_lift(lifts, w.front()).d_op.rows();
  } else if (!lifts.empty()) {
    m = lifts.begin()->second.d_op.rows();
  }
  CompressedGram cg;
  cg.word = w;
  cg.a_w = ComplexMatrix::Identity(m, m);
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    cg.a_w = lifted_apply(resolve_lift(lifts, *it), cg.a_w);
  cg.a_w = hermitian_part(cg.a_w);
  return cg;
}

ComplexMatrix realize_kernel(const KolmogorovFactor& kf, const CompressedGram& cg,
                             Eigen::Index x, Eigen::Index y) {
  if (cg.a_w.rows() != kf.rank)
    throw Error(errc::dimension_mismatch, "realize_kernel: a_w does not act on the factor space");
  return kf.slice(x).adjoint() * cg.a_w * kf.slice(y);
}

double model_norm(const LiftSet& lifts, const Word& w) {
  return std::sqrt(op_norm(compressed_gram(lifts, w).a_w));
}

double FeatureVector::squared_norm() const {
  double out = 0.0;
  for (const auto& [key, c] : components) out += c.squaredNorm();
  return out;
}

FeatureVector feature_vector(const KolmogorovFactor& kf, const CPMapSet& maps, const Word& w,
                             Eigen::Index x, const ComplexVector& a, std::size_t max_count) {
  if (a.size() != kf.fiber_dim)
    throw Error(errc::dimension_mismatch, "feature_vector: vector length != fiber_dim");
  const ComplexMatrix vx = kf.slice(x);
  FeatureVector fv;
  fv.word = w;
  fv.x = x;
  for (const auto& s : kraus_strings(w, maps, max_count))
    fv.components.emplace(s.key(), vx * (s.product * a));
  return fv;
}

Complex feature_gram(const FeatureVector& f, const FeatureVector& g) {
  Complex out(0.0, 0.0);
  // Tagged strings of distinct words never share a key, so mismatched words
  // contribute nothing.
  for (const auto& [key, fc] : f.components) {
    auto it = g.components.find(key);
    if (it != g.components.end()) out += fc.dot(it->second);
  }
  return out;
}

Complex model_inner(const KolmogorovFactor& kf, const CPMapSet& maps, const Word& w,
                    Eigen::Index x, const ComplexVector& a, const Word& v, Eigen::Index y,
                    const ComplexVector& b, std::size_t max_count) {
  // Keys collide across words only for identical words, so this detour
  // through the key maps is literal about layer orthogonality.
  return feature_gram(feature_vector(kf, maps, w, x, a, max_count),
                      feature_vector(kf, maps, v, y, b, max_count));
}

Certificate certify(const LiftSet& lifts, double tol) {
  Certificate cert;
  cert.tol = tol;
  bool contractive = !lifts.empty();
  for (const auto& [label, lf] : lifts) {
    LabelCertificate lc;
    lc.admissible = lf.admissible;
    lc.max_residual =
        lf.residuals.empty() ? 0.0 : *std::max_element(lf.residuals.begin(), lf.residuals.end());
    lc.d_norm = lf.d_norm;
    lc.cb_value = cb_norm(lf.source);
    lc.paper_premise_holds = lc.d_norm <= lc.cb_value + tol;
    contractive = contractive && lc.admissible && lc.d_norm <= 1.0 + tol;
    cert.per_label.emplace(label, lc);
  }
  cert.model_contractive = contractive;
  return cert;
}

}  // namespace cpkernel
