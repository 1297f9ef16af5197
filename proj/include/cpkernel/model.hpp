#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpkernel/channels.hpp"
#include "cpkernel/kernels.hpp"

namespace cpkernel {

/// Compression of the creation operators of one CP map to the Kolmogorov
/// feature space C^m: Gamma(A_r) = W (I_n kron A_r) W^+.
///
/// The compression is well defined only when W (I_n kron A_r) annihilates
/// ker W; `residuals` record how badly that fails per Kraus operator, and the
/// family is admissible iff every residual stays below the tolerance. On
/// full-rank Grams the residuals vanish up to roundoff.
struct LiftedFamily {
  std::string label;
  CPMap source;
  std::vector<ComplexMatrix> gammas;
  std::vector<double> residuals;
  ComplexMatrix d_op;  // sum_r Gamma_r* Gamma_r (Hermitian PSD)
  double d_norm = 0.0;
  bool admissible = false;
  double adm_tol = 0.0;
};

using LiftSet = std::map<std::string, LiftedFamily>;

/// Scale-aware default: 1e-8 ||W|| max_r ||A_r||.
double default_adm_tol(const KolmogorovFactor& kf, const CPMap& phi);

LiftedFamily lift(const KolmogorovFactor& kf, const CPMap& phi, double adm_tol);
LiftedFamily lift(const KolmogorovFactor& kf, const CPMap& phi);
LiftSet lift_all(const KolmogorovFactor& kf, const CPMapSet& maps);

/// Psi(T) = sum_r Gamma_r* T Gamma_r, the compressed conjugation.
ComplexMatrix lifted_apply(const LiftedFamily& lf, const ComplexMatrix& t);

/// A_w on C^m, realizing K_w(x,y) = V_x* A_w V_y. Folds from the right: the
/// last label of w is applied to the identity first, mirroring the kernel
/// iteration order. The empty word yields I_m.
struct CompressedGram {
  Word word;
  ComplexMatrix a_w;
};

/// ErrLiftInadmissible when any referenced family has an out-of-tolerance
/// residual (the compressed path is undefined there; use feature_gram).
CompressedGram compressed_gram(const LiftSet& lifts, const Word& w);

/// V_x* a_w V_y.
ComplexMatrix realize_kernel(const KolmogorovFactor& kf, const CompressedGram& cg,
                             Eigen::Index x, Eigen::Index y);

/// ||C_w|| = op_norm(a_w)^(1/2); exact for admissible lifts because the model
/// operator acts layer-diagonally as I kron A_w.
double model_norm(const LiftSet& lifts, const Word& w);

/// Pushed-forward feature vector of (x, a) along all tagged Kraus strings of
/// w: component(rho) = V_x (A_rho a). Summing squared norms over rho gives
/// <a, K_w(x,x) a>, with no admissibility requirement.
struct FeatureVector {
  Word word;
  Eigen::Index x = 0;
  std::map<std::string, ComplexVector> components;  // keyed by KrausString::key()

  double squared_norm() const;
};

FeatureVector feature_vector(const KolmogorovFactor& kf, const CPMapSet& maps, const Word& w,
                             Eigen::Index x, const ComplexVector& a, std::size_t max_count);

/// sum over tagged strings present in both of <F(rho), G(rho)>. Strings from
/// distinct words never match, so cross-word grams vanish exactly.
Complex feature_gram(const FeatureVector& f, const FeatureVector& g);

/// The sesquilinear form between pushed-forward features of (w,x,a) and
/// (v,y,b): zero for w != v, and <a, K_w(x,y) b> for w = v.
Complex model_inner(const KolmogorovFactor& kf, const CPMapSet& maps, const Word& w,
                    Eigen::Index x, const ComplexVector& a, const Word& v, Eigen::Index y,
                    const ComplexVector& b, std::size_t max_count);

struct LabelCertificate {
  bool admissible = false;
  double max_residual = 0.0;
  double d_norm = 0.0;
  double cb_value = 0.0;
  bool paper_premise_holds = false;  // d_norm <= cb_value + tol
};

/// Computed substitute for the cb-norm contraction bound: every
/// contraction-dependent result downstream is gated on `model_contractive`
/// (all families admissible and all d_norm <= 1 + tol) instead of assuming
/// the bound. `paper_premise_holds` separately reports whether the cb bound
/// holds per label on this instance.
struct Certificate {
  std::map<std::string, LabelCertificate> per_label;
  bool model_contractive = false;
  double tol = kPsdTol;
};

Certificate certify(const LiftSet& lifts, double tol = kPsdTol);

}  // namespace cpkernel
