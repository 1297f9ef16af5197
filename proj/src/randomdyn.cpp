#include "cpkernel/randomdyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cpkernel/rng.hpp"

namespace cpkernel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const LiftedFamily& lift_for(const LiftSet& lifts, const std::string& label) {
  auto it = lifts.find(label);
  if (it == lifts.end())
    throw Error(errc::unknown_label, "no lifted family with label '" + label + "'");
  if (!it->second.admissible)
    throw Error(errc::lift_inadmissible, "family '" + label + "' is not admissible");
  return it->second;
}

}  // namespace

void validate_model(const IIDModel& model) {
  if (model.labels.empty() || model.labels.size() != model.probs.size())
    throw Error(errc::bad_distribution, "label/probability count mismatch or empty model");
  std::set<std::string> seen;
  double sum = 0.0;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    if (!seen.insert(model.labels[i]).second)
      throw Error(errc::bad_distribution, "duplicate label '" + model.labels[i] + "'");
    if (!(model.probs[i] >= 0.0))
      throw Error(errc::bad_distribution, "negative probability for '" + model.labels[i] + "'");
    sum += model.probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(errc::bad_distribution, "probabilities sum to " + std::to_string(sum));
}

PathSample sample_path(const IIDModel& model, std::size_t n, std::uint64_t seed) {
  validate_model(model);
  if (n < 1) throw Error(errc::bad_distribution, "sample_path: n must be >= 1");

  std::vector<double> cum(model.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < model.probs.size(); ++i) {
    acc += model.probs[i];
    cum[i] = acc;
  }

  SeededRng rng(seed);
  PathSample path;
  path.seed = seed;
  path.labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform01();
    std::size_t pick = cum.size() - 1;  // u past the last cell falls in it
    for (std::size_t i = 0; i < cum.size(); ++i) {
      if (u < cum[i]) {
        pick = i;
        break;
      }
    }
    path.labels.push_back(model.labels[pick]);
  }
  return path;
}

LogNormTrack path_log_norm(const LiftSet& lifts, const PathSample& path,
                           PathLogNormOptions opts) {
  const std::size_t n = path.labels.size();
  LogNormTrack track;
  track.xs.assign(n, 0.0);

  Eigen::Index m = 0;
  for (const auto& label : path.labels) m = lift_for(lifts, label).d_op.rows();

  if (!opts.exact_order) {
    // Incremental fold in draw order: after k steps this is a_w for the
    // reversed word z_k ... z_1, so X_k = (1/2) log op_norm. Compensated
    // summation keeps the accumulated logs exact enough for the closed-form
    // anchors at n = 10^4.
    ComplexMatrix b = ComplexMatrix::Identity(m, m);
    double acc_log = 0.0;
    double comp = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      b = hermitian_part(lifted_apply(lift_for(lifts, path.labels[k]), b));
      const double nrm = op_norm(b);
      if (nrm == 0.0) {
        if (!opts.renorm)
          throw Error(errc::underflow,
                      "path_log_norm: product norm reached zero at step " + std::to_string(k + 1) +
                          " without renormalization");
        track.hit_zero = true;
        track.zero_step = k + 1;
        for (std::size_t j = k; j < n; ++j) track.xs[j] = -kInf;
        return track;
      }
      const double step_log = std::log(nrm);
      track.xs[k] = 0.5 * ((acc_log + comp) + step_log);
      if (opts.renorm) {
        b /= nrm;
        // Kahan update of acc_log += step_log.
        const double y = step_log + comp;
        const double t = acc_log + y;
        comp = y - (t - acc_log);
        acc_log = t;
      }
    }
    return track;
  }

  // Exact-order validation mode: a_(xi_k) places the latest draw innermost,
  // so each prefix needs its own nested fold.
  for (std::size_t k = 1; k <= n; ++k) {
    ComplexMatrix a = ComplexMatrix::Identity(m, m);
    double acc_log = 0.0;
    double x_val = 0.0;
    bool zero = false;
    for (std::size_t j = k; j-- > 0;) {
      a = hermitian_part(lifted_apply(lift_for(lifts, path.labels[j]), a));
      const double nrm = op_norm(a);
      if (nrm == 0.0) {
        if (!opts.renorm)
          throw Error(errc::underflow, "path_log_norm: product norm reached zero");
        zero = true;
        break;
      }
      x_val = 0.5 * (acc_log + std::log(nrm));
      if (opts.renorm) {
        a /= nrm;
        acc_log += std::log(nrm);
      }
    }
    if (zero) {
      track.hit_zero = true;
      if (track.zero_step == 0) track.zero_step = k;
      track.xs[k - 1] = -kInf;
    } else {
      track.xs[k - 1] = x_val;
    }
  }
  return track;
}

LyapunovEstimate lyapunov_estimate(const IIDModel& model, const LiftSet& lifts, std::size_t n,
                                   std::size_t trials, std::uint64_t seed) {
  validate_model(model);
  if (n < 1 || trials < 1)
    throw Error(errc::bad_distribution, "lyapunov_estimate: n and trials must be >= 1");

  LyapunovEstimate est;
  est.n = n;
  est.trials = trials;
  est.seed = seed;
  est.per_trial_xn.reserve(trials);
  est.tracks.reserve(trials);
  std::vector<double> sum_xk(n, 0.0);

  for (std::size_t t = 0; t < trials; ++t) {
    const PathSample path = sample_path(model, n, sub_seed(seed, t));
    LogNormTrack track = path_log_norm(lifts, path, {});
    if (track.hit_zero) est.minus_infinity = true;
    for (std::size_t k = 0; k < n; ++k) sum_xk[k] += track.xs[k];
    est.per_trial_xn.push_back(track.xs[n - 1]);
    est.tracks.push_back(std::move(track.xs));
  }

  double mean = 0.0;
  for (double xn : est.per_trial_xn) mean += xn / static_cast<double>(n);
  mean /= static_cast<double>(trials);
  est.lambda_hat = mean;

  est.inf_formula_track.resize(n);
  double inf_val = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    est.inf_formula_track[k] =
        sum_xk[k] / (static_cast<double>(trials) * static_cast<double>(k + 1));
    inf_val = std::min(inf_val, est.inf_formula_track[k]);
  }
  est.lambda_inf_hat = inf_val;

  if (trials > 1 && !est.minus_infinity) {
    double ss = 0.0;
    for (double xn : est.per_trial_xn) {
      const double dev = xn / static_cast<double>(n) - mean;
      ss += dev * dev;
    }
    est.stderr_ = std::sqrt(ss / static_cast<double>(trials - 1)) /
                  std::sqrt(static_cast<double>(trials));
  }
  return est;
}

std::vector<GrowthRow> growth_check(const KolmogorovFactor& kf, const LiftSet& lifts,
                                    const PathSample& path, Eigen::Index x,
                                    const ComplexVector& a, Eigen::Index y,
                                    const ComplexVector& b) {
  if (a.size() != kf.fiber_dim || b.size() != kf.fiber_dim)
    throw Error(errc::dimension_mismatch, "growth_check: vector length != fiber_dim");
  const ComplexVector u = kf.slice(x) * a;  // J_x a as a concrete feature vector
  const ComplexVector v = kf.slice(y) * b;
  const double ju = u.norm();
  const double jv = v.norm();
  const Eigen::Index m = kf.rank;
  const std::size_t n = path.labels.size();

  std::vector<GrowthRow> rows;
  rows.reserve(n);
  for (std::size_t kk = 1; kk <= n; ++kk) {
    ComplexMatrix aw = ComplexMatrix::Identity(m, m);
    double acc_log = 0.0;
    for (std::size_t j = kk; j-- > 0;) {
      aw = hermitian_part(lifted_apply(lift_for(lifts, path.labels[j]), aw));
      const double nrm = op_norm(aw);
      if (nrm == 0.0) {
        acc_log = -kInf;
        break;
      }
      aw /= nrm;
      acc_log += std::log(nrm);
    }
    GrowthRow row;
    row.k = kk;
    if (acc_log == -kInf) {
      row.lhs = 0.0;
      row.rhs = 0.0;
      row.ok = true;
      row.log_lhs = -kInf;
      row.exponent = -kInf;
      row.two_xk_over_k = -kInf;
    } else {
      const double norm_aw = op_norm(aw);  // 1 up to roundoff after peeling
      row.lhs = std::abs(u.dot(aw * v));
      row.rhs = norm_aw * ju * jv;
      row.ok = row.lhs <= row.rhs + 1e-9;
      row.log_lhs = acc_log + std::log(row.lhs);
      row.exponent = row.log_lhs / static_cast<double>(kk);
      row.two_xk_over_k = (acc_log + std::log(norm_aw)) / static_cast<double>(kk);
    }
    rows.push_back(row);
  }
  return rows;
}

UniformBoundReport uniform_bound_check(const PDKernel& k, const CPMapSet& maps,
                                       const PathSample& path) {
  const ComplexMatrix g = gram(k);
  (void)g;
  const Eigen::Index n_pts = k.point_count();
  const Eigen::Index d = k.fiber_dim;

  UniformBoundReport report;
  report.l_max = 0.0;
  for (const auto& label : path.labels) report.l_max = std::max(report.l_max, cb_norm(resolve(maps, label)));
  report.decays = report.l_max < 1.0;

  std::vector<double> diag(n_pts);
  for (Eigen::Index i = 0; i < n_pts; ++i) diag[i] = op_norm(k.blocks[i][i]);

  // Prefix superoperator products give every K_(xi_k) in one pass.
  std::map<std::string, ComplexMatrix> sops;
  for (const auto& label : path.labels)
    if (!sops.count(label)) sops.emplace(label, superop(resolve(maps, label)));

  std::vector<ComplexVector> vecs(n_pts * n_pts);
  for (Eigen::Index i = 0; i < n_pts; ++i)
    for (Eigen::Index j = 0; j < n_pts; ++j) {
      ComplexVector vec(d * d);
      for (Eigen::Index c = 0; c < d; ++c) vec.segment(c * d, d) = k.blocks[i][j].col(c);
      vecs[i * n_pts + j] = vec;
    }

  ComplexMatrix prefix = ComplexMatrix::Identity(d * d, d * d);
  report.all_ok = true;
  double rhs_scale = 1.0;
  for (std::size_t step = 0; step < path.labels.size(); ++step) {
    prefix = prefix * sops.at(path.labels[step]);
    rhs_scale *= report.l_max;

    UniformBoundRow row;
    row.k = step + 1;
    row.rhs_scale = rhs_scale;
    row.worst_slack = -kInf;
    for (Eigen::Index i = 0; i < n_pts; ++i)
      for (Eigen::Index j = 0; j < n_pts; ++j) {
        const ComplexVector pushed = prefix * vecs[i * n_pts + j];
        ComplexMatrix block(d, d);
        for (Eigen::Index c = 0; c < d; ++c) block.col(c) = pushed.segment(c * d, d);
        const double lhs = op_norm(block);
        const double rhs = rhs_scale * std::sqrt(diag[i] * diag[j]);
        row.max_lhs = std::max(row.max_lhs, lhs);
        row.worst_slack = std::max(row.worst_slack, lhs - rhs);
      }
    row.ok = row.worst_slack <= 1e-9;
    report.all_ok = report.all_ok && row.ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cpkernel
