#pragma once

#include <optional>

#include "compsamp/model.hpp"

namespace compsamp {

struct OptResult {
  Vector x_star;
  long iterations = 0;
  // Prox-gradient mapping norm L * ||x - prox(1/L, x - grad f(x) / L)|| at x_star.
  double residual = 0.0;
  bool converged = false;
};

struct FistaOptions {
  // Defaults to 1e-8 * L * (1 + ||x0||).
  std::optional<double> tol;
  long max_iter = 100000;
};

// Accelerated proximal gradient for min f + g with step 1/L and function-value restart.
// Stops once the prox-gradient residual falls below tol. Hitting max_iter is reported
// through OptResult::converged, not thrown.
OptResult fista(const SmoothPotential& f, const CompositePotential& g, const Vector& x0,
                const FistaOptions& options = {});

// Fills target.x_star via fista (from the origin) when it is absent. Throws if g has no
// proximal map or the solve does not converge.
const Vector& ensure_minimizer(CompositeTarget& target);

}  // namespace compsamp
