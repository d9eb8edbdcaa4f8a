#pragma once

#include <functional>
#include <vector>

namespace compsamp {

using LogDensity1d = std::function<double(double)>;

struct QuadratureResult {
  double log_z = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  long nodes_used = 0;
};

inline constexpr long kMaxQuadratureNodes = 1L << 20;
inline constexpr double kQuadratureRelTol = 1e-10;

// Integrates exp(log_density) over the finite interval [lo, hi] with adaptive 15-point
// Gauss-Kronrod bisection, starting from n_nodes evenly spaced nodes' worth of panels.
// Panels are split until the estimated relative error of the normalizer and the first two
// moments is below 1e-10. Kinks and steep tails are handled by refinement. Throws
// std::runtime_error when more than 2^20 nodes would be needed.
QuadratureResult quadrature_1d(const LogDensity1d& log_density, double lo, double hi,
                               long n_nodes = 150);

// Normalized CDF of exp(log_density) on [lo, hi], built on the same adaptive partition.
class QuadratureCdf {
 public:
  QuadratureCdf(LogDensity1d log_density, double lo, double hi, long n_nodes = 150);

  double operator()(double x) const;
  const QuadratureResult& summary() const { return summary_; }

 private:
  LogDensity1d log_density_;
  double shift_;
  double z_;
  std::vector<double> edges_;       // panel boundaries, increasing
  std::vector<double> cumulative_;  // unnormalized mass left of each edge
  QuadratureResult summary_;
};

}  // namespace compsamp
