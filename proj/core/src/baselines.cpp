#include "compsamp/baselines.hpp"

#include <cmath>
#include <limits>

#include "compsamp/truncated_normal.hpp"

namespace compsamp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxChordRedraws = 64;

}  // namespace

RestrictedGaussian::RestrictedGaussian(Vector mean, const Matrix& covariance,
                                       std::optional<OrthantSpec> orthant)
    : mean_(std::move(mean)), orthant_(std::move(orthant)) {
  const Index d = mean_.size();
  if (covariance.rows() != d || covariance.cols() != d) {
    throw DimensionMismatch("RestrictedGaussian: covariance must be d x d");
  }
  if (orthant_) require_dim(d, orthant_->dim(), "RestrictedGaussian (orthant)");
  if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
    throw std::invalid_argument("RestrictedGaussian: covariance must be symmetric");
  }
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("RestrictedGaussian: covariance must be positive definite");
  }
  chol_ = llt.matrixL();
  precision_ = llt.solve(Matrix::Identity(d, d));
  precision_ = 0.5 * (precision_ + precision_.transpose());
}

bool RestrictedGaussian::contains(const Vector& x) const {
  require_dim(dim(), x.size(), "RestrictedGaussian::contains");
  return !orthant_ || orthant_->contains(x);
}

bool RestrictedGaussian::strictly_inside(const Vector& x) const {
  require_dim(dim(), x.size(), "RestrictedGaussian::strictly_inside");
  if (!orthant_) return x.allFinite();
  for (Index i = 0; i < x.size(); ++i) {
    if (!(orthant_->signs[static_cast<std::size_t>(i)] * x[i] > 0.0)) return false;
  }
  return true;
}

std::pair<double, double> chord_interval(const RestrictedGaussian& target, const Vector& x,
                                         const Vector& u) {
  require_dim(target.dim(), u.size(), "chord_interval");
  if (!target.strictly_inside(x)) {
    throw std::invalid_argument("chord_interval: x must lie strictly inside the orthant");
  }
  double lo = -kInf;
  double hi = kInf;
  if (!target.orthant()) return {lo, hi};
  const auto& signs = target.orthant()->signs;
  for (Index i = 0; i < x.size(); ++i) {
    const double s = signs[static_cast<std::size_t>(i)];
    const double depth = s * x[i];  // > 0
    const double speed = s * u[i];
    if (speed > 0.0) {
      lo = std::max(lo, -depth / speed);
    } else if (speed < 0.0) {
      hi = std::min(hi, depth / -speed);
    }
  }
  return {lo, hi};
}

Vector hit_and_run_step(const RestrictedGaussian& target, const Vector& x, Rng& rng) {
  if (!target.strictly_inside(x)) {
    throw std::invalid_argument("hit_and_run_step: x must lie strictly inside the orthant");
  }
  const Vector u = rng.unit_vector(target.dim());
  const auto [lo, hi] = chord_interval(target, x, u);
  const Vector pu = target.precision() * u;
  const double curvature = u.dot(pu);
  const double line_mean = -pu.dot(x - target.mean()) / curvature;
  const TruncSpec spec{line_mean, 1.0 / std::sqrt(curvature), lo, hi};
  // A draw clamped onto a chord endpoint would leave the open orthant; redraw it.
  for (int attempt = 0; attempt < kMaxChordRedraws; ++attempt) {
    Vector next = x + sample_trunc_normal_1d(spec, rng) * u;
    if (target.strictly_inside(next)) return next;
  }
  return x;
}

Vector hit_and_run_start(const RestrictedGaussian& target) {
  if (!target.orthant()) return target.mean();
  const Vector sigma = target.covariance().diagonal().cwiseSqrt();
  Vector x(target.dim());
  for (Index i = 0; i < x.size(); ++i) {
    x[i] = target.orthant()->signs[static_cast<std::size_t>(i)] *
           (std::abs(target.mean()[i]) + sigma[i]);
  }
  return x;
}

Matrix hit_and_run_chain(const RestrictedGaussian& target, const Vector& x0, long steps,
                         Rng& rng) {
  if (steps < 0) throw std::invalid_argument("hit_and_run_chain: steps must be >= 0");
  Matrix out(steps, target.dim());
  Vector x = x0;
  for (long k = 0; k < steps; ++k) {
    x = hit_and_run_step(target, x, rng);
    out.row(k) = x.transpose();
  }
  return out;
}

RejectionResult naive_rejection(const RestrictedGaussian& target, Index n, Rng& rng,
                                std::uint64_t trial_budget) {
  if (n < 1) throw std::invalid_argument("naive_rejection: n must be >= 1");
  RejectionResult result;
  result.samples.resize(n, target.dim());
  Index accepted = 0;
  while (accepted < n) {
    if (result.trials >= trial_budget) {
      result.complete = false;
      result.samples.conservativeResize(accepted, Eigen::NoChange);
      break;
    }
    ++result.trials;
    Vector x = target.mean() + target.covariance_factor() * rng.normal_vector(target.dim());
    if (target.contains(x)) result.samples.row(accepted++) = x.transpose();
  }
  return result;
}

}  // namespace compsamp
