#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpkernel/model.hpp"

namespace cpkernel {

/// i.i.d. label distribution; the path space exists only through the seeded
/// sampling contract below.
struct IIDModel {
  std::vector<std::string> labels;
  std::vector<double> probs;
};

/// ErrBadDistribution for negative, unnormalized, or mismatched data.
void validate_model(const IIDModel& model);

struct PathSample {
  std::uint64_t seed = 0;
  std::vector<std::string> labels;  // z_1 ... z_n
};

/// Inverse-CDF draws over the cumulative probabilities with half-open cells
/// [c_{k-1}, c_k), from the deterministic 64-bit-seeded generator. The same
/// (seed, n, model) always yields the same sequence.
PathSample sample_path(const IIDModel& model, std::size_t n, std::uint64_t seed);

struct PathLogNormOptions {
  bool renorm = true;       // peel op-norm factors each step, accumulate logs
  bool exact_order = false;  // recompute the nested fold per k (O(n^2) applies)
};

struct LogNormTrack {
  std::vector<double> xs;  // X_1 ... X_n, X_k = log ||C_(word at step k)||
  bool hit_zero = false;   // a product vanished exactly: X_j = -inf from there on
  std::size_t zero_step = 0;
};

/// Log-norm track of the random operator product. The incremental mode
/// evaluates the reversed word z_k ... z_1 (each new draw wraps outermost),
/// which has the same law as the drawn word under i.i.d. sampling; the
/// exact-order mode evaluates z_1 ... z_k literally for validation.
/// ErrUnderflow when renorm is disabled and the product norm reaches zero.
LogNormTrack path_log_norm(const LiftSet& lifts, const PathSample& path,
                           PathLogNormOptions opts = {});

struct LyapunovEstimate {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_trial_xn;       // X_n per trial
  double lambda_hat = 0.0;                // mean of X_n / n
  std::vector<double> inf_formula_track;  // (1/k) mean_t X_k, k = 1..n
  double lambda_inf_hat = 0.0;            // min over tracked k
  double stderr_ = 0.0;                   // sample std of X_n/n over sqrt(trials)
  bool minus_infinity = false;            // some trial hit an exactly-zero product
  std::vector<std::vector<double>> tracks;  // per-trial X_k series, for emission
};

/// Trial t draws its path from sub_seed(seed, t); aggregation is in ascending
/// trial order, so results are bitwise reproducible.
LyapunovEstimate lyapunov_estimate(const IIDModel& model, const LiftSet& lifts, std::size_t n,
                                   std::size_t trials, std::uint64_t seed);

struct GrowthRow {
  std::size_t k = 0;
  double lhs = 0.0;          // |<a, K_(xi_k)(x,y) b>| on the renormalized scale
  double rhs = 0.0;          // ||a_(xi_k)|| ||J_x a|| ||J_y b||, same scale
  bool ok = false;
  double log_lhs = 0.0;      // true log|<a, K_(xi_k)(x,y) b>|
  double exponent = 0.0;     // log_lhs / k
  double two_xk_over_k = 0.0;
};

/// Per-step Cauchy-Schwarz bound behind the kernel growth law:
/// |<a, K_(xi_k)(x,y) b>| <= ||C_(xi_k)||^2 ||J_x a|| ||J_y b||, evaluated in
/// exact word order with per-step renormalization. O(n^2) lifted applies.
std::vector<GrowthRow> growth_check(const KolmogorovFactor& kf, const LiftSet& lifts,
                                    const PDKernel& k, const PathSample& path, Eigen::Index x,
                                    const ComplexVector& a, Eigen::Index y,
                                    const ComplexVector& b);

struct UniformBoundRow {
  std::size_t k = 0;
  double max_lhs = 0.0;    // worst block norm at step k
  double rhs_scale = 0.0;  // L^k, before the per-pair diagonal factors
  double worst_slack = 0.0;  // max over pairs of lhs - rhs
  bool ok = false;
};

struct UniformBoundReport {
  double l_max = 0.0;  // max_s cb_norm(Phi_s)
  bool decays = false;  // L < 1: guaranteed exponential decay
  std::vector<UniformBoundRow> rows;
  bool all_ok = false;
};

/// ||K_(xi_k)(x,y)|| <= L^k sqrt(||K(x,x)|| ||K(y,y)||) + 1e-9 for all pairs
/// and steps, via the direct route (superoperator prefix products).
UniformBoundReport uniform_bound_check(const PDKernel& k, const CPMapSet& maps,
                                       const PathSample& path);

}  // namespace cpkernel
