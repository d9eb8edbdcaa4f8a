#include "compsamp/model.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

namespace compsamp {

void require_dim(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << expected << ", got " << actual;
    throw DimensionMismatch(msg.str());
  }
}

GaussianFactor::GaussianFactor(double lambda_, Vector center_)
    : lambda(lambda_), center(std::move(center_)) {
  if (!(lambda > 0.0) || std::isnan(lambda)) {
    throw std::invalid_argument("GaussianFactor: lambda must be strictly positive");
  }
}

GaussianFactor fold_factors(const GaussianFactor& a, const GaussianFactor& b) {
  require_dim(a.center.size(), b.center.size(), "fold_factors");
  if (std::isinf(b.lambda)) return a;
  if (std::isinf(a.lambda)) return b;
  const double precision = 1.0 / a.lambda + 1.0 / b.lambda;
  const double lambda = 1.0 / precision;
  return GaussianFactor(lambda, lambda * (a.center / a.lambda + b.center / b.lambda));
}

SmoothPotential::SmoothPotential(Index dim, double smoothness, double strong_convexity,
                                 ValueFn value, GradientFn gradient)
    : dim_(dim),
      smoothness_(smoothness),
      strong_convexity_(strong_convexity),
      value_(std::move(value)),
      gradient_(std::move(gradient)) {
  if (dim_ < 1) throw std::invalid_argument("SmoothPotential: dim must be positive");
  if (!(strong_convexity_ > 0.0) || !std::isfinite(smoothness_) ||
      strong_convexity_ > smoothness_) {
    throw std::invalid_argument("SmoothPotential: need 0 < mu <= L < inf");
  }
  if (!value_ || !gradient_) {
    throw std::invalid_argument("SmoothPotential: value and gradient are required");
  }
}

SmoothPotential quadratic_potential(const Matrix& precision, const Vector& center) {
  require_dim(precision.rows(), precision.cols(), "quadratic_potential (square)");
  require_dim(precision.rows(), center.size(), "quadratic_potential");
  if (!precision.isApprox(precision.transpose(), 1e-12)) {
    throw std::invalid_argument("quadratic_potential: precision must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(precision, Eigen::EigenvaluesOnly);
  const double mu = eig.eigenvalues().minCoeff();
  const double L = eig.eigenvalues().maxCoeff();
  if (!(mu > 0.0)) {
    throw std::invalid_argument("quadratic_potential: precision must be positive definite");
  }
  auto P = std::make_shared<const Matrix>(precision);
  auto m = std::make_shared<const Vector>(center);
  return SmoothPotential(
      center.size(), L, mu,
      [P, m](const Vector& x) {
        const Vector r = x - *m;
        return 0.5 * r.dot(*P * r);
      },
      [P, m](const Vector& x) -> Vector { return *P * (x - *m); });
}

SmoothPotential isotropic_quadratic_potential(double curvature, const Vector& center) {
  if (!(curvature > 0.0)) {
    throw std::invalid_argument("isotropic_quadratic_potential: curvature must be > 0");
  }
  auto m = std::make_shared<const Vector>(center);
  return SmoothPotential(
      center.size(), curvature, curvature,
      [m, curvature](const Vector& x) { return 0.5 * curvature * (x - *m).squaredNorm(); },
      [m, curvature](const Vector& x) -> Vector { return curvature * (x - *m); });
}

CompositePotential::CompositePotential(Index dim, std::string support, ValueFn value,
                                       OracleFn oracle, ProxFn prox)
    : dim_(dim),
      support_(std::move(support)),
      value_(std::move(value)),
      oracle_(std::move(oracle)),
      prox_(std::move(prox)) {
  if (dim_ < 1) throw std::invalid_argument("CompositePotential: dim must be positive");
  if (!value_ || !oracle_) {
    throw std::invalid_argument("CompositePotential: value and oracle are required");
  }
}

Vector CompositePotential::sample(const GaussianFactor& factor, Rng& rng) const {
  require_dim(dim_, factor.center.size(), "CompositePotential::sample");
  return oracle_(factor, rng);
}

Vector CompositePotential::prox(double lambda, const Vector& v) const {
  if (!prox_) throw std::logic_error("CompositePotential: no proximal map for " + support_);
  require_dim(dim_, v.size(), "CompositePotential::prox");
  return prox_(lambda, v);
}

CompositeTarget::CompositeTarget(SmoothPotential f_, CompositePotential g_,
                                 std::optional<Vector> x_star_)
    : f(std::move(f_)), g(std::move(g_)), x_star(std::move(x_star_)) {
  require_dim(f.dim(), g.dim(), "CompositeTarget (g)");
  if (x_star) require_dim(f.dim(), x_star->size(), "CompositeTarget (x_star)");
}

CompositeTarget shift_linear(const CompositeTarget& target, const Vector& c) {
  require_dim(target.dim(), c.size(), "shift_linear");
  if (!c.allFinite()) throw std::invalid_argument("shift_linear: shift must be finite");

  const SmoothPotential f = target.f;
  const CompositePotential g = target.g;
  auto shift = std::make_shared<const Vector>(c);

  SmoothPotential f_shifted(
      f.dim(), f.smoothness(), f.strong_convexity(),
      [f, shift](const Vector& x) { return f.value(x) - shift->dot(x); },
      [f, shift](const Vector& x) -> Vector { return f.gradient(x) - *shift; });

  CompositePotential::ProxFn prox;
  if (g.has_prox()) {
    prox = [g, shift](double lambda, const Vector& v) -> Vector {
      return g.prox(lambda, v - lambda * *shift);
    };
  }
  CompositePotential g_shifted(
      g.dim(), g.support(),
      [g, shift](const Vector& x) { return g.value(x) + shift->dot(x); },
      [g, shift](const GaussianFactor& factor, Rng& rng) -> Vector {
        return g.sample(GaussianFactor(factor.lambda, factor.center - factor.lambda * *shift),
                        rng);
      },
      std::move(prox));

  return CompositeTarget(std::move(f_shifted), std::move(g_shifted), target.x_star);
}

double prox_gradient_residual(const SmoothPotential& f, const CompositePotential& g,
                              const Vector& x) {
  const double L = f.smoothness();
  const Vector step = g.prox(1.0 / L, x - f.gradient(x) / L);
  return L * (x - step).norm();
}

}  // namespace compsamp
