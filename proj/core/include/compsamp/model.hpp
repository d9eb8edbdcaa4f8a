#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "compsamp/rng.hpp"

namespace compsamp {

// Thrown when an internal mathematical guarantee is violated at run time, e.g. an
// acceptance probability above one. These indicate mis-declared constants (L, mu)
// or a non-convex potential, never bad luck.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_dim(Index expected, Index actual, const char* what);

// The quadratic (1/(2*lambda)) * ||x - center||^2. Every oracle call is phrased in
// terms of one of these.
struct GaussianFactor {
  double lambda;
  Vector center;

  GaussianFactor(double lambda, Vector center);

  double exponent(const Vector& x) const {
    return (x - center).squaredNorm() / (2.0 * lambda);
  }
};

// Product of two isotropic factors: precisions add, centers are precision-weighted.
// A factor with infinite lambda is vacuous and returns the other unchanged.
GaussianFactor fold_factors(const GaussianFactor& a, const GaussianFactor& b);
inline GaussianFactor fold_factors(const GaussianFactor& a) { return a; }

// Smooth, strongly convex part f of the negative log-density. L and mu are declared
// by the caller and trusted; every step size is a closed-form function of them.
class SmoothPotential {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  SmoothPotential(Index dim, double smoothness, double strong_convexity, ValueFn value,
                  GradientFn gradient);

  double value(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const { return gradient_(x); }

  Index dim() const { return dim_; }
  double smoothness() const { return smoothness_; }
  double strong_convexity() const { return strong_convexity_; }
  double condition_number() const { return smoothness_ / strong_convexity_; }

 private:
  Index dim_;
  double smoothness_;
  double strong_convexity_;
  ValueFn value_;
  GradientFn gradient_;
};

// f(x) = 1/2 (x - center)^T precision (x - center); L and mu are the extreme
// eigenvalues of the (symmetric positive definite) precision.
SmoothPotential quadratic_potential(const Matrix& precision, const Vector& center);

// f(x) = (curvature/2) ||x - center||^2.
SmoothPotential isotropic_quadratic_potential(double curvature, const Vector& center);

// Convex, possibly non-smooth part g. Its value may be +infinity (indicators). Sampling
// goes through the restricted Gaussian oracle: a draw from
// exp(-g(x) - ||x - v||^2 / (2 lambda)). The proximal map is optional.
class CompositePotential {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using OracleFn = std::function<Vector(const GaussianFactor&, Rng&)>;
  using ProxFn = std::function<Vector(double, const Vector&)>;

  CompositePotential(Index dim, std::string support, ValueFn value, OracleFn oracle,
                     ProxFn prox = {});

  double value(const Vector& x) const { return value_(x); }
  Vector sample(const GaussianFactor& factor, Rng& rng) const;
  bool has_prox() const { return static_cast<bool>(prox_); }
  // argmin_x (1/(2 lambda)) ||x - v||^2 + g(x).
  Vector prox(double lambda, const Vector& v) const;

  Index dim() const { return dim_; }
  // Human-readable description of the oracle's support, e.g. "orthant(+,-,+)".
  const std::string& support() const { return support_; }

 private:
  Index dim_;
  std::string support_;
  ValueFn value_;
  OracleFn oracle_;
  ProxFn prox_;
};

// Target density proportional to exp(-f(x) - g(x)), with an optional cached minimizer of
// f + g.
struct CompositeTarget {
  SmoothPotential f;
  CompositePotential g;
  std::optional<Vector> x_star;

  CompositeTarget(SmoothPotential f, CompositePotential g,
                  std::optional<Vector> x_star = std::nullopt);

  Index dim() const { return f.dim(); }
  double value(const Vector& x) const { return f.value(x) + g.value(x); }
};

// Moves the linear term <c, x> from f onto g: f~ = f - <c,.>, g~ = g + <c,.>. The sum
// f + g is unchanged. g~'s oracle and prox delegate to g with the center moved by
// -lambda * c. The cached minimizer carries over since f + g is unchanged.
CompositeTarget shift_linear(const CompositeTarget& target, const Vector& c);

// L * ||x - prox_g(1/L, x - grad f(x) / L)||; zero exactly at the minimizer of f + g.
double prox_gradient_residual(const SmoothPotential& f, const CompositePotential& g,
                              const Vector& x);

}  // namespace compsamp
