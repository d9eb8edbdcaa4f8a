#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "compsamp/oracles.hpp"

namespace compsamp {

// Gaussian N(m, Sigma) optionally restricted to an orthant.
class RestrictedGaussian {
 public:
  RestrictedGaussian(Vector mean, const Matrix& covariance,
                     std::optional<OrthantSpec> orthant = std::nullopt);

  Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance_factor() const { return chol_; }
  const Matrix& precision() const { return precision_; }
  Matrix covariance() const { return chol_ * chol_.transpose(); }
  const std::optional<OrthantSpec>& orthant() const { return orthant_; }

  // Orthant membership; always true without an orthant. Boundary points count as inside.
  bool contains(const Vector& x) const;
  bool strictly_inside(const Vector& x) const;

 private:
  Vector mean_;
  Matrix chol_;
  Matrix precision_;
  std::optional<OrthantSpec> orthant_;
};

// {t : x + t u in the orthant}, for x strictly inside. Unbounded ends are +-inf.
std::pair<double, double> chord_interval(const RestrictedGaussian& target, const Vector& x,
                                         const Vector& u);

// One hit-and-run move: uniform direction, then an exact draw from the Gaussian restricted
// to the chord through x. Throws std::invalid_argument if x is not strictly inside.
Vector hit_and_run_step(const RestrictedGaussian& target, const Vector& x, Rng& rng);

// Coordinatewise s_i (|m_i| + sigma_i); m itself when there is no orthant.
Vector hit_and_run_start(const RestrictedGaussian& target);

// Runs `steps` moves from x0 and returns them as rows.
Matrix hit_and_run_chain(const RestrictedGaussian& target, const Vector& x0, long steps,
                         Rng& rng);

struct RejectionResult {
  Matrix samples;          // accepted draws as rows; fewer than requested if incomplete
  std::uint64_t trials = 0;
  bool complete = true;    // false when the trial budget ran out
};

inline constexpr std::uint64_t kDefaultRejectionBudget = 1000000000ULL;

// Draws m + L z until n of them land in the orthant.
RejectionResult naive_rejection(const RestrictedGaussian& target, Index n, Rng& rng,
                                std::uint64_t trial_budget = kDefaultRejectionBudget);

}  // namespace compsamp
