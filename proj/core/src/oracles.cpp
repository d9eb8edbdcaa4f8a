#include "compsamp/oracles.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace compsamp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("restricted Gaussian oracle: lambda must be finite and > 0");
  }
}

}  // namespace

OrthantSpec::OrthantSpec(std::vector<int> signs_) : signs(std::move(signs_)) {
  for (int s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("OrthantSpec: signs must be +1 or -1");
  }
}

OrthantSpec OrthantSpec::positive(Index dim) {
  return OrthantSpec(std::vector<int>(static_cast<std::size_t>(dim), 1));
}

bool OrthantSpec::contains(const Vector& x) const {
  require_dim(dim(), x.size(), "OrthantSpec::contains");
  for (Index i = 0; i < x.size(); ++i) {
    if (signs[static_cast<std::size_t>(i)] * x[i] < 0.0) return false;
  }
  return true;
}

std::string OrthantSpec::describe() const {
  std::string out = "orthant(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i) out += ',';
    out += signs[i] > 0 ? '+' : '-';
  }
  return out + ")";
}

Vector rgo_orthant(double lambda, const Vector& v, const OrthantSpec& orthant, Rng& rng) {
  require_lambda(lambda);
  require_dim(orthant.dim(), v.size(), "rgo_orthant");
  const double sd = std::sqrt(lambda);
  Vector x(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const bool positive = orthant.signs[static_cast<std::size_t>(i)] > 0;
    x[i] = sample_trunc_normal_1d(
        {v[i], sd, positive ? 0.0 : -kInf, positive ? kInf : 0.0}, rng);
  }
  return x;
}

Vector rgo_box(double lambda, const Vector& v, const Vector& lo, const Vector& hi, Rng& rng) {
  require_lambda(lambda);
  require_dim(v.size(), lo.size(), "rgo_box (lo)");
  require_dim(v.size(), hi.size(), "rgo_box (hi)");
  const double sd = std::sqrt(lambda);
  Vector x(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    x[i] = sample_trunc_normal_1d({v[i], sd, lo[i], hi[i]}, rng);
  }
  return x;
}

double l1_branch_log_odds(double lambda, double v, double alpha) {
  // On x >= 0 the exponent is -(x - (v - alpha lambda))^2 / (2 lambda) - alpha v + const,
  // on x <= 0 it is -(x - (v + alpha lambda))^2 / (2 lambda) + alpha v + const.
  const double sd = std::sqrt(lambda);
  const double log_pos = -alpha * v + log_normal_cdf((v - alpha * lambda) / sd);
  const double log_neg = alpha * v + log_normal_cdf(-(v + alpha * lambda) / sd);
  return log_pos - log_neg;
}

Vector rgo_l1(double lambda, const Vector& v, double alpha, Rng& rng) {
  require_lambda(lambda);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("rgo_l1: alpha must be finite and >= 0");
  }
  const double sd = std::sqrt(lambda);
  Vector x(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    if (alpha == 0.0) {
      x[i] = v[i] + sd * rng.normal();
      continue;
    }
    const double log_odds = l1_branch_log_odds(lambda, v[i], alpha);
    // P(positive branch) = 1 / (1 + exp(-log_odds)), evaluated without overflow.
    const double p_pos = log_odds >= 0.0 ? 1.0 / (1.0 + std::exp(-log_odds))
                                         : std::exp(log_odds) / (1.0 + std::exp(log_odds));
    if (rng.uniform() < p_pos) {
      x[i] = sample_trunc_normal_1d({v[i] - alpha * lambda, sd, 0.0, kInf}, rng);
    } else {
      x[i] = sample_trunc_normal_1d({v[i] + alpha * lambda, sd, -kInf, 0.0}, rng);
    }
  }
  return x;
}

Vector rgo_quadratic(double lambda, const Vector& v, const Vector& a_diag, const Vector& b,
                     Rng& rng) {
  require_lambda(lambda);
  require_dim(v.size(), a_diag.size(), "rgo_quadratic (a)");
  require_dim(v.size(), b.size(), "rgo_quadratic (b)");
  Vector x(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double precision = 1.0 / lambda + a_diag[i];
    const double mean = (v[i] / lambda - b[i]) / precision;
    x[i] = mean + rng.normal() / std::sqrt(precision);
  }
  return x;
}

CompositePotential zero_potential(Index dim) {
  return CompositePotential(
      dim, "R^d", [](const Vector&) { return 0.0; },
      [](const GaussianFactor& factor, Rng& rng) -> Vector {
        return factor.center + std::sqrt(factor.lambda) * rng.normal_vector(factor.center.size());
      },
      [](double, const Vector& v) -> Vector { return v; });
}

CompositePotential orthant_potential(const OrthantSpec& orthant) {
  auto spec = std::make_shared<const OrthantSpec>(orthant);
  return CompositePotential(
      orthant.dim(), orthant.describe(),
      [spec](const Vector& x) { return spec->contains(x) ? 0.0 : kInf; },
      [spec](const GaussianFactor& factor, Rng& rng) -> Vector {
        return rgo_orthant(factor.lambda, factor.center, *spec, rng);
      },
      [spec](double, const Vector& v) -> Vector {
        Vector x = v;
        for (Index i = 0; i < x.size(); ++i) {
          if (spec->signs[static_cast<std::size_t>(i)] * x[i] < 0.0) x[i] = 0.0;
        }
        return x;
      });
}

CompositePotential box_potential(const Vector& lo, const Vector& hi) {
  require_dim(lo.size(), hi.size(), "box_potential");
  for (Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box_potential: need lo < hi");
  }
  auto lower = std::make_shared<const Vector>(lo);
  auto upper = std::make_shared<const Vector>(hi);
  return CompositePotential(
      lo.size(), "box",
      [lower, upper](const Vector& x) {
        const bool inside = (x.array() >= lower->array()).all() &&
                            (x.array() <= upper->array()).all();
        return inside ? 0.0 : kInf;
      },
      [lower, upper](const GaussianFactor& factor, Rng& rng) -> Vector {
        return rgo_box(factor.lambda, factor.center, *lower, *upper, rng);
      },
      [lower, upper](double, const Vector& v) -> Vector {
        return v.cwiseMax(*lower).cwiseMin(*upper);
      });
}

CompositePotential l1_potential(Index dim, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("l1_potential: alpha must be >= 0");
  std::ostringstream name;
  name << "l1(alpha=" << alpha << ")";
  return CompositePotential(
      dim, name.str(), [alpha](const Vector& x) { return alpha * x.lpNorm<1>(); },
      [alpha](const GaussianFactor& factor, Rng& rng) -> Vector {
        return rgo_l1(factor.lambda, factor.center, alpha, rng);
      },
      [alpha](double lambda, const Vector& v) -> Vector {
        const double t = alpha * lambda;
        return v.unaryExpr([t](double z) {
          return z > t ? z - t : (z < -t ? z + t : 0.0);
        });
      });
}

CompositePotential diagonal_quadratic_potential(const Vector& a_diag, const Vector& b) {
  require_dim(a_diag.size(), b.size(), "diagonal_quadratic_potential");
  if ((a_diag.array() < 0.0).any()) {
    throw std::invalid_argument("diagonal_quadratic_potential: a must be >= 0");
  }
  auto a = std::make_shared<const Vector>(a_diag);
  auto lin = std::make_shared<const Vector>(b);
  return CompositePotential(
      a_diag.size(), "R^d (diagonal quadratic)",
      [a, lin](const Vector& x) {
        return 0.5 * x.dot(a->cwiseProduct(x)) + lin->dot(x);
      },
      [a, lin](const GaussianFactor& factor, Rng& rng) -> Vector {
        return rgo_quadratic(factor.lambda, factor.center, *a, *lin, rng);
      },
      [a, lin](double lambda, const Vector& v) -> Vector {
        return ((v / lambda - *lin).array() / (1.0 / lambda + a->array())).matrix();
      });
}

}  // namespace compsamp
