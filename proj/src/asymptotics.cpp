#include "cpkernel/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace cpkernel {

namespace {

std::vector<std::string> factor_point_ids(const KolmogorovFactor& kf) {
  std::vector<std::string> ids;
  ids.reserve(kf.n_points);
  for (Eigen::Index i = 0; i < kf.n_points; ++i) ids.push_back("p" + std::to_string(i));
  return ids;
}

PDKernel apply_blockwise(const PDKernel& k, const CPMap& phi) {
  PDKernel out = k;
  for (Eigen::Index i = 0; i < k.point_count(); ++i)
    for (Eigen::Index j = 0; j < k.point_count(); ++j)
      out.blocks[i][j] = apply(phi, k.blocks[i][j]);
  return out;
}

}  // namespace

LimitResult limit_kernel(const LiftedFamily& lf, const KolmogorovFactor& kf, double conv_tol,
                         std::size_t max_iter, double cert_tol) {
  if (lf.d_norm > 1.0 + cert_tol)
    throw Error(errc::certificate_failed,
                "limit_kernel: d_norm " + std::to_string(lf.d_norm) + " exceeds 1");
  const Eigen::Index m = kf.rank;

  // Direct monitor: the kernel orbit rebuilt from the factor. The compressed
  // sequence D_n is monotone under the gate and always settles; the direct
  // orbit is what can cycle (peripheral spectrum), and it is also what rules
  // out a fabricated limit when the lift is not admissible.
  PDKernel direct = kernel_from_factor(kf, factor_point_ids(kf));
  ComplexMatrix g_direct = gram(direct);
  const double g_scale = std::max(1.0, op_norm(g_direct));

  constexpr std::size_t kMaxPeriod = 8;
  std::deque<ComplexMatrix> history;  // recent direct grams, most recent last
  history.push_back(g_direct);

  LimitResult out;
  out.monotonicity_slack = std::numeric_limits<double>::infinity();
  ComplexMatrix d = ComplexMatrix::Identity(m, m);
  double step = std::numeric_limits<double>::infinity();
  double direct_step = std::numeric_limits<double>::infinity();
  std::size_t pending_period = 0;
  std::size_t pending_hits = 0;

  std::size_t n = 0;
  bool converged = false;
  while (n < max_iter) {
    ++n;
    const ComplexMatrix d_next = hermitian_part(lifted_apply(lf, d));
    step = op_norm(d_next - d);
    const HermitianEigen mono = hermitian_eigen(d - d_next);
    if (mono.values.size() > 0)
      out.monotonicity_slack = std::min(out.monotonicity_slack, mono.values(0));

    direct = apply_blockwise(direct, lf.source);
    ComplexMatrix g_next = gram(direct);
    direct_step = op_norm(g_next - g_direct);

    d = d_next;
    g_direct = g_next;

    out.series_step.push_back(step);
    out.series_norm.push_back(op_norm(d));
    out.series_defect.push_back(op_norm(d * d - d));

    if (step <= conv_tol && direct_step <= conv_tol) {
      converged = true;
      break;
    }

    // Cycle detection on the direct orbit: recurrence much tighter than the
    // step residual means a genuine period, not slow convergence.
    if (direct_step > conv_tol) {
      std::size_t period = 0;
      double gap = 0.0;
      for (std::size_t p = 2; p <= std::min(kMaxPeriod, history.size()); ++p) {
        gap = op_norm(g_direct - history[history.size() - p]);
        if (gap <= 1e-12 * g_scale) {
          period = p;
          break;
        }
      }
      if (period != 0 && period == pending_period) {
        if (++pending_hits >= 2)
          throw NotConvergedError(
              "limit_kernel: direct kernel orbit cycles with period " + std::to_string(period),
              n, step, direct_step, period, gap);
      } else {
        pending_period = period;
        pending_hits = period != 0 ? 1 : 0;
      }
    }
    history.push_back(g_direct);
    if (history.size() > kMaxPeriod + 1) history.pop_front();
  }

  if (!converged)
    throw NotConvergedError("limit_kernel: no convergence within " + std::to_string(max_iter) +
                                " iterations",
                            n, step, direct_step, 0, 0.0);

  out.d_inf = d;
  out.iterations = n;
  out.step_residual = step;
  out.direct_residual = direct_step;
  out.projection_defect = op_norm(d * d - d);

  out.kbar = direct;  // reuse ids/shape; blocks overwritten below
  for (Eigen::Index i = 0; i < kf.n_points; ++i)
    for (Eigen::Index j = 0; j < kf.n_points; ++j)
      out.kbar.blocks[i][j] = kf.slice(i).adjoint() * d * kf.slice(j);

  out.consistency_residual = op_norm(gram(out.kbar) - g_direct);
  if (out.consistency_residual > std::max(1e-7 * g_scale, 10.0 * conv_tol * g_scale))
    throw Error(errc::certificate_failed,
                "limit_kernel: compressed limit disagrees with the direct orbit (residual " +
                    std::to_string(out.consistency_residual) +
                    "); the lift is not admissible");
  return out;
}

SteinResult stein(const PDKernel& k, const CPMap& phi, std::size_t n_max) {
  check_cpmap(phi);
  if (phi.dim() != k.fiber_dim)
    throw Error(errc::dimension_mismatch, "stein: map does not act on the kernel fiber");

  SteinResult out;
  const ComplexMatrix g0 = gram(k);
  const double scale = std::max(1.0, op_norm(g0));

  out.q = k;
  const PDKernel phik = apply_blockwise(k, phi);
  for (Eigen::Index i = 0; i < k.point_count(); ++i)
    for (Eigen::Index j = 0; j < k.point_count(); ++j)
      out.q.blocks[i][j] = k.blocks[i][j] - phik.blocks[i][j];
  const PsdCheck qc = psd_check(gram(out.q));
  out.q_psd = qc.is_psd;
  out.q_min_eig = qc.min_eig;

  PDKernel increment = out.q;   // Phi^j(Q)
  PDKernel iterate = phik;      // Phi^{N}(K)
  PDKernel sum = out.q;         // S_N
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) {
      increment = apply_blockwise(increment, phi);
      for (Eigen::Index i = 0; i < k.point_count(); ++i)
        for (Eigen::Index j = 0; j < k.point_count(); ++j)
          sum.blocks[i][j] += increment.blocks[i][j];
      iterate = apply_blockwise(iterate, phi);
    }
    out.increments.push_back(increment);
    const PsdCheck ic = psd_check(gram(increment));
    out.increments_psd.push_back(ic.is_psd);
    out.increment_min_eigs.push_back(ic.min_eig);
    out.partial_sums.push_back(sum);
    out.telescoping_residuals.push_back(op_norm(gram(sum) - (g0 - gram(iterate))) / scale);
  }
  return out;
}

double harmonic_check(const PDKernel& kbar, const CPMap& phi) {
  check_cpmap(phi);
  if (phi.dim() != kbar.fiber_dim)
    throw Error(errc::dimension_mismatch, "harmonic_check: map does not act on the kernel fiber");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < kbar.point_count(); ++i)
    for (Eigen::Index j = 0; j < kbar.point_count(); ++j)
      worst = std::max(worst, op_norm(apply(phi, kbar.blocks[i][j]) - kbar.blocks[i][j]));
  return worst;
}

bool maximality_check(const PDKernel& l, const PDKernel& k, const PDKernel& kbar,
                      const CPMap& phi, const Certificate& cert, double tol) {
  if (!cert.model_contractive)
    throw Error(errc::certificate_failed, "maximality_check: certificate not contractive");
  if (harmonic_check(l, phi) > tol)
    throw Error(errc::precondition_failed, "maximality_check: L is not Phi-harmonic");
  if (!dominates(k, l, tol).dominated)
    throw Error(errc::precondition_failed, "maximality_check: L is not dominated by K");
  return dominates(kbar, l, tol).dominated;
}

DecayBoundReport decay_bound_check(const PDKernel& k, const CPMapSet& maps, const Word& w) {
  double prod_cb = 1.0;
  for (const auto& label : w) prod_cb *= cb_norm(resolve(maps, label));
  const PDKernel kw = iterate_kernel(k, w, maps);

  const Eigen::Index n = k.point_count();
  std::vector<double> diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = op_norm(k.blocks[i][i]);

  DecayBoundReport report;
  report.all_ok = true;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      DecayBoundRow row;
      row.x = i;
      row.y = j;
      row.lhs = op_norm(kw.blocks[i][j]);
      row.rhs = prod_cb * std::sqrt(diag[i] * diag[j]);
      row.ok = row.lhs <= row.rhs + 1e-9;
      report.all_ok = report.all_ok && row.ok;
      report.rows.push_back(row);
    }
  return report;
}

SpectralRadiusEstimate spectral_radius_estimate(const LiftedFamily& lf, std::size_t n_max) {
  if (!lf.admissible)
    throw Error(errc::lift_inadmissible, "spectral_radius_estimate: lift is not admissible");
  const Eigen::Index m = lf.d_op.rows();

  SpectralRadiusEstimate out;
  ComplexMatrix a = ComplexMatrix::Identity(m, m);
  double acc_log = 0.0;  // log of the peeled-off normalizations
  bool nilpotent = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (!nilpotent) {
      a = hermitian_part(lifted_apply(lf, a));
      const double nrm = op_norm(a);
      if (nrm == 0.0) {
        nilpotent = true;
      } else {
        out.r.push_back(std::exp((acc_log + std::log(nrm)) / (2.0 * n)));
        a /= nrm;
        acc_log += std::log(nrm);
      }
    }
    if (nilpotent) out.r.push_back(0.0);
    out.running_min.push_back(out.running_min.empty() ? out.r.back()
                                                      : std::min(out.running_min.back(),
                                                                 out.r.back()));
  }
  out.estimate = out.r.empty() ? 1.0 : out.r.back();
  return out;
}

}  // namespace cpkernel
