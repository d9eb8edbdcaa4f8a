#include "compsamp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace compsamp {
namespace {

// Biased autocovariance at every lag, via zero-padded FFT.
std::vector<double> autocovariance(const Vector& series) {
  const Index n = series.size();
  const double mean = series.mean();
  std::size_t padded = 1;
  while (padded < static_cast<std::size_t>(2 * n)) padded <<= 1;
  std::vector<double> centered(padded, 0.0);
  for (Index t = 0; t < n; ++t) centered[static_cast<std::size_t>(t)] = series[t] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);
  for (auto& c : spectrum) c = std::norm(c);
  std::vector<double> acov;
  fft.inv(acov, spectrum);
  acov.resize(static_cast<std::size_t>(n));
  for (double& v : acov) v /= static_cast<double>(n);
  return acov;
}

void require_nonconstant(const Vector& series, const char* what) {
  if (series.size() < 2) throw std::invalid_argument(std::string(what) + ": need >= 2 points");
  if ((series.array() == series[0]).all() || !series.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": series is constant or non-finite");
  }
}

struct EssValue {
  double ess;
  Index last_lag;
};

EssValue geyer_ess(const Vector& series) {
  require_nonconstant(series, "ess");
  const std::vector<double> acov = autocovariance(series);
  const double var = acov[0];
  if (!(var > 0.0)) throw std::invalid_argument("ess: series has zero variance");
  const Index n = series.size();

  // Pair sums Gamma_m = rho(2m) + rho(2m+1), kept while positive and forced monotone.
  double tau = -1.0;
  double previous = std::numeric_limits<double>::infinity();
  Index last_lag = 0;
  for (Index m = 0; 2 * m + 1 < n; ++m) {
    double gamma = (acov[static_cast<std::size_t>(2 * m)] +
                    acov[static_cast<std::size_t>(2 * m + 1)]) / var;
    if (gamma <= 0.0) break;
    gamma = std::min(gamma, previous);
    previous = gamma;
    tau += 2.0 * gamma;
    last_lag = 2 * m + 1;
  }
  const double nn = static_cast<double>(n);
  const double value = tau > 0.0 ? nn / tau : nn;
  return {std::clamp(value, 1.0, nn), last_lag};
}

}  // namespace

Vector autocorrelation(const Vector& series, Index max_lag) {
  if (max_lag < 1 || max_lag >= series.size()) {
    throw std::invalid_argument("autocorrelation: need 1 <= max_lag < series length");
  }
  require_nonconstant(series, "autocorrelation");
  const std::vector<double> acov = autocovariance(series);
  if (!(acov[0] > 0.0)) throw std::invalid_argument("autocorrelation: zero variance");
  Vector rho(max_lag + 1);
  for (Index k = 0; k <= max_lag; ++k) rho[k] = acov[static_cast<std::size_t>(k)] / acov[0];
  rho[0] = 1.0;
  return rho;
}

double ess(const Vector& series) { return geyer_ess(series).ess; }

EssReport ess_report(const Matrix& chain) {
  EssReport report;
  report.ess_per_coordinate.resize(chain.cols());
  report.lags_used.resize(static_cast<std::size_t>(chain.cols()));
  for (Index j = 0; j < chain.cols(); ++j) {
    const EssValue v = geyer_ess(chain.col(j));
    report.ess_per_coordinate[j] = v.ess;
    report.lags_used[static_cast<std::size_t>(j)] = v.last_lag;
  }
  report.min_ess = chain.cols() > 0 ? report.ess_per_coordinate.minCoeff() : 0.0;
  return report;
}

double ks_two_sample(const Vector& a, const Vector& b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("ks_two_sample: empty input");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return sup;
}

double ks_one_sample(const Vector& sample, const std::function<double(double)>& cdf) {
  if (sample.size() == 0) throw std::invalid_argument("ks_one_sample: empty input");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    sup = std::max({sup, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return sup;
}

double burned_min_ess(const Matrix& chain, Index n) {
  const Index burn = static_cast<Index>(std::floor(kBurnInFraction * static_cast<double>(n)));
  const Index kept = n - burn;
  if (kept < 2) return 0.0;
  double min_ess = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < chain.cols(); ++j) {
    const Vector column = chain.col(j).segment(burn, kept);
    if ((column.array() == column[0]).all()) return 0.0;  // a stuck coordinate has not mixed
    min_ess = std::min(min_ess, ess(column));
  }
  return min_ess;
}

MixingResult mixing_time(const ChainExtender& extend, long step_block, long max_steps,
                         double threshold) {
  if (step_block < 1 || max_steps < step_block) {
    throw std::invalid_argument("mixing_time: need 1 <= step_block <= max_steps");
  }
  Matrix trace = extend(step_block);
  if (trace.rows() != step_block) {
    throw std::runtime_error("mixing_time: chain returned the wrong number of rows");
  }
  auto grow_to = [&](long n) {
    if (n <= trace.rows()) return;
    const Matrix more = extend(n - trace.rows());
    const Index old_rows = trace.rows();
    trace.conservativeResize(n, Eigen::NoChange);
    trace.bottomRows(n - old_rows) = more;
  };

  // Doubling phase. A candidate count is accepted only when the threshold still holds at
  // twice that length; on chains much shorter than their autocorrelation time the ESS
  // estimate is noisy and biased upward, and a single crossing is often spurious.
  const long max_blocks = max_steps / step_block;
  auto ess_at = [&](long blocks) {
    grow_to(blocks * step_block);
    return burned_min_ess(trace, blocks * step_block);
  };
  long lo_blocks = 0;  // largest count known to fail
  long hi_blocks = 1;
  double hi_ess = ess_at(hi_blocks);
  auto sustained = [&] {
    if (!(hi_ess > threshold)) return false;
    const long confirm = std::min(2 * hi_blocks, max_blocks);
    return confirm == hi_blocks || ess_at(confirm) > threshold;
  };
  while (!sustained()) {
    if (hi_blocks >= max_blocks) return {max_steps, false, hi_ess};
    lo_blocks = hi_blocks;
    hi_blocks = std::min(2 * hi_blocks, max_blocks);
    hi_ess = ess_at(hi_blocks);
  }
  // Bisection on the already simulated prefix.
  while (hi_blocks - lo_blocks > 1) {
    const long mid = lo_blocks + (hi_blocks - lo_blocks) / 2;
    const double mid_ess = burned_min_ess(trace, mid * step_block);
    if (mid_ess > threshold) {
      hi_blocks = mid;
      hi_ess = mid_ess;
    } else {
      lo_blocks = mid;
    }
  }
  return {hi_blocks * step_block, true, hi_ess};
}

}  // namespace compsamp
