#pragma once

#include <vector>

#include "cpkernel/model.hpp"

namespace cpkernel {

/// Outcome of iterating the compressed positive contraction D_n = Psi^n(I).
struct LimitResult {
  ComplexMatrix d_inf;
  std::size_t iterations = 0;
  double step_residual = 0.0;      // ||D_{n+1} - D_n||_op at stop
  double projection_defect = 0.0;  // ||d_inf^2 - d_inf||_op
  PDKernel kbar;                   // kbar(x,y) = V_x* d_inf V_y
  double monotonicity_slack = 0.0;  // min over n of min eig(D_n - D_{n+1})
  double direct_residual = 0.0;     // direct-orbit step residual at stop
  double consistency_residual = 0.0;  // ||gram(kbar) - gram(Phi^n K)||_op at stop

  // Per-iteration series for emission: (n, step_residual, ||D_n||, defect).
  std::vector<double> series_step;
  std::vector<double> series_norm;
  std::vector<double> series_defect;
};

/// Iterates D_{n+1} = Psi(D_n) from D_0 = I until the step residual falls
/// below conv_tol, while monitoring the direct kernel orbit Phi^n(K) rebuilt
/// from the factor.
///
/// Gate: d_norm <= 1 + cert_tol (ErrCertificateFailed otherwise) — the
/// computed contractivity condition under which the monotone-limit argument
/// applies. The direct monitor guards against a fabricated limit: if the
/// kernel orbit cycles or fails to settle, ErrNotConverged is thrown with the
/// detected period; if it settles but disagrees with the compressed limit
/// (possible only for inadmissible lifts), ErrCertificateFailed is thrown.
LimitResult limit_kernel(const LiftedFamily& lf, const KolmogorovFactor& kf,
                         double conv_tol = 1e-12, std::size_t max_iter = 10000,
                         double cert_tol = kPsdTol);

/// Stein data for one map: defect Q = K - Phi(K), increments Phi^j(Q), partial
/// sums S_N, and the telescoping residuals ||gram(S_N) - (gram K - gram
/// Phi^N K)|| / max(1, ||gram K||). The series is raw algebra and is computed
/// for every instance; PSD of the increments is reported as flags and is a
/// theorem only under the contractivity certificate.
struct SteinResult {
  PDKernel q;
  bool q_psd = false;
  double q_min_eig = 0.0;
  std::vector<PDKernel> increments;     // Phi^j(Q), j = 0..N-1
  std::vector<PDKernel> partial_sums;   // S_N, N = 1..N_max
  std::vector<double> telescoping_residuals;
  std::vector<bool> increments_psd;
  std::vector<double> increment_min_eigs;
};

SteinResult stein(const PDKernel& k, const CPMap& phi, std::size_t n_max);

/// max over blocks of ||Phi(Kbar)(x,y) - Kbar(x,y)||_op.
double harmonic_check(const PDKernel& kbar, const CPMap& phi);

/// Under a model-contractivity certificate, checks that any Phi-harmonic L
/// dominated by K is also dominated by Kbar.
/// Pre: harmonic_check(L) <= tol and dominates(K, L); ErrPreconditionFailed
/// otherwise. ErrCertificateFailed without a contractive certificate.
bool maximality_check(const PDKernel& l, const PDKernel& k, const PDKernel& kbar,
                      const CPMap& phi, const Certificate& cert, double tol);

struct DecayBoundRow {
  Eigen::Index x = 0;
  Eigen::Index y = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

struct DecayBoundReport {
  std::vector<DecayBoundRow> rows;
  bool all_ok = false;
};

/// ||K_w(x,y)|| <= (prod_j cb_norm(Phi_{s_j})) sqrt(||K(x,x)|| ||K(y,y)||)
/// with slack 1e-9, checked on every pair. Holds on all instances: each CP
/// application contracts the block norm by its cb norm, and the base kernel
/// obeys the Cauchy-Schwarz bound.
DecayBoundReport decay_bound_check(const PDKernel& k, const CPMapSet& maps, const Word& w);

struct SpectralRadiusEstimate {
  std::vector<double> r;            // r_n = op_norm(Psi^n(I))^(1/2n)
  std::vector<double> running_min;  // Gelfand envelope, converges from above
  double estimate = 0.0;            // r at n_max
};

/// ErrLiftInadmissible for inadmissible families.
SpectralRadiusEstimate spectral_radius_estimate(const LiftedFamily& lf, std::size_t n_max);

}  // namespace cpkernel
