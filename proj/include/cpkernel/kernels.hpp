#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpkernel/matrix.hpp"

namespace cpkernel {

/// Operator-valued positive definite kernel on a finite point set: an n x n
/// array of d x d blocks. The point ids carry no structure beyond identity.
struct PDKernel {
  std::vector<std::string> points;
  Eigen::Index fiber_dim = 0;
  std::vector<std::vector<ComplexMatrix>> blocks;  // blocks[i][j] = K(x_i, x_j)

  Eigen::Index point_count() const { return static_cast<Eigen::Index>(points.size()); }
  const ComplexMatrix& block(Eigen::Index i, Eigen::Index j) const { return blocks[i][j]; }
  std::optional<Eigen::Index> index_of(const std::string& id) const;
};

/// Kernel with constant-shaped blocks from a pre-assembled (n d) x (n d) Gram.
PDKernel kernel_from_gram(const std::vector<std::string>& points, Eigen::Index fiber_dim,
                          const ComplexMatrix& g);

/// The (n d) x (n d) Hermitian matrix with (i,j) block K(x_i, x_j).
ComplexMatrix gram(const PDKernel& k);

struct ValidationReport {
  bool passed = false;
  double hermitian_residual = 0.0;  // max entrywise |K(x,y) - K(y,x)*|
  double min_gram_eig = 0.0;
  bool gram_psd = false;
  double cauchy_schwarz_slack = 0.0;  // max over pairs of lhs - rhs
  bool cauchy_schwarz_ok = false;
  std::optional<errc> error;  // errc::not_psd carried here, never thrown
};

/// Structural and PSD validation, plus the Cauchy-Schwarz block bound
/// ||K(x,y)|| <= sqrt(||K(x,x)|| ||K(y,y)||) + tol.
ValidationReport validate(const PDKernel& k, double tol = kPsdTol);

/// Factor W with W*W = gram(K); the m x d column slice at point x realizes
/// V_x, so K(x,y) = V_x* V_y. W is unique only up to a left unitary; compare
/// W*W, never W itself.
struct KolmogorovFactor {
  ComplexMatrix W;  // m x (n d), full row rank
  Eigen::Index rank = 0;
  Eigen::Index n_points = 0;
  Eigen::Index fiber_dim = 0;
  double rank_tol_used = kDefaultRankTol;

  ComplexMatrix slice(Eigen::Index x) const;  // V_x, m x d
};

/// Rank-truncated PSD square-root factorization of the Gram.
/// Pre: validate(k) passes; ErrNotPSD otherwise.
KolmogorovFactor kolmogorov(const PDKernel& k, double rank_tol = kDefaultRankTol);

/// <V_x a, V_y b> = <a, K(x,y) b>.
Complex scalar_lift(const KolmogorovFactor& kf, Eigen::Index x, const ComplexVector& a,
                    Eigen::Index y, const ComplexVector& b);

/// Reconstruct the kernel V_x* V_y from a factor (equals the source kernel up
/// to the factorization tolerance).
PDKernel kernel_from_factor(const KolmogorovFactor& kf, const std::vector<std::string>& points);

struct Domination {
  bool dominated = false;
  double min_eig = 0.0;  // min eigenvalue of gram(K) - gram(L)
};

/// The kernel order: L <= K iff gram(K) - gram(L) is PSD at tolerance tol.
Domination dominates(const PDKernel& k, const PDKernel& l, double tol = kPsdTol);

}  // namespace cpkernel
