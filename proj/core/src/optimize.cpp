#include "compsamp/optimize.hpp"

#include <cmath>
#include <sstream>

namespace compsamp {

OptResult fista(const SmoothPotential& f, const CompositePotential& g, const Vector& x0,
                const FistaOptions& options) {
  require_dim(f.dim(), x0.size(), "fista");
  require_dim(f.dim(), g.dim(), "fista (g)");
  if (!g.has_prox()) throw std::invalid_argument("fista: g has no proximal map");

  const double L = f.smoothness();
  const double step = 1.0 / L;
  const double tol = options.tol.value_or(1e-8 * L * (1.0 + x0.norm()));
  if (!(tol > 0.0)) throw std::invalid_argument("fista: tol must be positive");

  auto objective = [&](const Vector& x) { return f.value(x) + g.value(x); };
  auto prox_step = [&](const Vector& y) -> Vector {
    return g.prox(step, y - step * f.gradient(y));
  };

  OptResult result;
  // Start from a feasible point so the restart test compares finite objectives.
  Vector x = prox_step(x0);
  double fx = objective(x);
  Vector y = x;
  double t = 1.0;

  for (long k = 1; k <= options.max_iter; ++k) {
    result.iterations = k;
    const Vector next_from_x = prox_step(x);
    const double residual = L * (x - next_from_x).norm();
    if (residual <= tol) {
      result.x_star = x;
      result.residual = residual;
      result.converged = true;
      return result;
    }

    Vector x_next = prox_step(y);
    double f_next = objective(x_next);
    if (!(f_next <= fx)) {
      // Momentum overshot: restart from the plain proximal gradient step.
      x_next = next_from_x;
      f_next = objective(x_next);
      t = 1.0;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = std::move(x_next);
    fx = f_next;
    t = t_next;
  }

  result.x_star = x;
  result.residual = prox_gradient_residual(f, g, x);
  result.converged = result.residual <= tol;
  return result;
}

const Vector& ensure_minimizer(CompositeTarget& target) {
  if (target.x_star) return *target.x_star;
  if (!target.g.has_prox()) {
    throw std::invalid_argument(
        "target has no cached minimizer and g (" + target.g.support() +
        ") has no proximal map to compute one");
  }
  OptResult opt = fista(target.f, target.g, Vector::Zero(target.dim()));
  if (!opt.converged) {
    std::ostringstream msg;
    msg << "minimizer computation did not converge (residual " << opt.residual << " after "
        << opt.iterations << " iterations)";
    throw std::runtime_error(msg.str());
  }
  target.x_star = std::move(opt.x_star);
  return *target.x_star;
}

}  // namespace compsamp
