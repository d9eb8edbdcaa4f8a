#pragma once

#include <vector>

#include "compsamp/model.hpp"
#include "compsamp/truncated_normal.hpp"

namespace compsamp {

// Coordinatewise sign constraints: sign[i] * x[i] >= 0. Closed orthant.
struct OrthantSpec {
  std::vector<int> signs;

  explicit OrthantSpec(std::vector<int> signs);
  static OrthantSpec positive(Index dim);

  Index dim() const { return static_cast<Index>(signs.size()); }
  bool contains(const Vector& x) const;
  std::string describe() const;
};

// Exact restricted Gaussian oracles: draws from exp(-||x - v||^2 / (2 lambda) - g(x)).
// All separable cases reduce to independent one-dimensional truncated normals.

Vector rgo_orthant(double lambda, const Vector& v, const OrthantSpec& orthant, Rng& rng);

Vector rgo_box(double lambda, const Vector& v, const Vector& lo, const Vector& hi, Rng& rng);

// g(x) = alpha * ||x||_1. Each coordinate is a two-piece mixture of truncated normals
// with weights computed in log space.
Vector rgo_l1(double lambda, const Vector& v, double alpha, Rng& rng);

// g(x) = 1/2 x^T diag(a) x + <b, x>; the restricted Gaussian is itself Gaussian.
Vector rgo_quadratic(double lambda, const Vector& v, const Vector& a_diag, const Vector& b,
                     Rng& rng);

// Log-weight of the nonnegative branch of the l1 oracle minus that of the negative
// branch, for one coordinate. Exposed for testing the mixture weights.
double l1_branch_log_odds(double lambda, double v, double alpha);

// CompositePotential factories pairing each oracle with g's value and proximal map.
CompositePotential zero_potential(Index dim);
CompositePotential orthant_potential(const OrthantSpec& orthant);
CompositePotential box_potential(const Vector& lo, const Vector& hi);
CompositePotential l1_potential(Index dim, double alpha);
CompositePotential diagonal_quadratic_potential(const Vector& a_diag, const Vector& b);

}  // namespace compsamp
