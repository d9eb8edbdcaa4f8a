#pragma once

#include <functional>
#include <vector>

#include "compsamp/rng.hpp"

namespace compsamp {

// Normalized autocorrelation at lags 0..max_lag using the centered, biased estimator
// rho(k) = sum_{t<N-k} (x_t - xbar)(x_{t+k} - xbar) / sum_t (x_t - xbar)^2.
// Throws std::invalid_argument on a constant series or when max_lag >= N.
Vector autocorrelation(const Vector& series, Index max_lag);

// N / (1 + 2 sum rho(k)), truncating the sum with Geyer's initial monotone positive
// sequence, clamped to [1, N].
double ess(const Vector& series);

struct EssReport {
  Vector ess_per_coordinate;
  double min_ess = 0.0;
  std::vector<Index> lags_used;  // last lag included in each coordinate's sum
};

// Per-column ESS of a chain stored one state per row.
EssReport ess_report(const Matrix& chain);

// sup_x |F_a(x) - F_b(x)| between the two empirical CDFs.
double ks_two_sample(const Vector& a, const Vector& b);

// sup_x |F_n(x) - F(x)| against a continuous reference CDF.
double ks_one_sample(const Vector& sample, const std::function<double(double)>& cdf);

// Returns the next `steps` states of a chain (one per row). Successive calls continue
// the same chain.
using ChainExtender = std::function<Matrix(long steps)>;

struct MixingResult {
  long steps = 0;         // smallest block multiple meeting the threshold, or max_steps
  bool converged = false; // false when max_steps was reached first
  double min_ess = 0.0;   // min-coordinate ESS at `steps`
};

inline constexpr double kMixingEssThreshold = 10.0;
inline constexpr double kBurnInFraction = 0.1;

// First chain length n (a multiple of step_block) at which every coordinate of the trace,
// after discarding the first 10% as burn-in, has ESS above the threshold. Lengths are
// probed by doubling (a probe counts only if the threshold also holds at twice its
// length), then bisected at block granularity.
MixingResult mixing_time(const ChainExtender& extend, long step_block, long max_steps,
                         double threshold = kMixingEssThreshold);

// Min-coordinate ESS of rows [0, n) after burn-in.
double burned_min_ess(const Matrix& chain, Index n);

}  // namespace compsamp
