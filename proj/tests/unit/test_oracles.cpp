#include <doctest.h>

#include <cmath>
#include <limits>

#include "compsamp/diagnostics.hpp"
#include "compsamp/oracles.hpp"
#include "compsamp/quadrature.hpp"

using namespace compsamp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector draw_1d(const CompositePotential& g, double lambda, double v, Index n, Rng& rng) {
  Vector out(n);
  const GaussianFactor factor(lambda, Vector::Constant(1, v));
  for (Index i = 0; i < n; ++i) out[i] = g.sample(factor, rng)[0];
  return out;
}

}  // namespace

TEST_CASE("OrthantSpec basics") {
  const OrthantSpec o({1, -1, 1});
  CHECK(o.dim() == 3);
  CHECK(o.contains((Vector(3) << 1.0, -2.0, 0.0).finished()));
  CHECK_FALSE(o.contains((Vector(3) << 1.0, 2.0, 0.0).finished()));
  CHECK(o.describe() == "orthant(+,-,+)");
  CHECK_THROWS_AS(OrthantSpec({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(o.contains(Vector::Zero(2)), DimensionMismatch);
}

TEST_CASE("oracles reject invalid lambda and dimensions") {
  Rng rng(1);
  const Vector v = Vector::Zero(2);
  CHECK_THROWS_AS(rgo_orthant(0.0, v, OrthantSpec::positive(2), rng), std::invalid_argument);
  CHECK_THROWS_AS(rgo_orthant(1.0, v, OrthantSpec::positive(3), rng), DimensionMismatch);
  CHECK_THROWS_AS(rgo_box(kInf, v, v, v, rng), std::invalid_argument);
  CHECK_THROWS_AS(rgo_l1(1.0, v, -1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(rgo_quadratic(1.0, v, Vector::Zero(3), v, rng), DimensionMismatch);
  CHECK_THROWS_AS(box_potential(Vector::Ones(2), Vector::Ones(2)), std::invalid_argument);
  CHECK_THROWS_AS(diagonal_quadratic_potential(-Vector::Ones(2), v), std::invalid_argument);
}

TEST_CASE("orthant oracle respects signs and matches the half-normal mean") {
  Rng rng(2);
  const OrthantSpec o({1, -1});
  const Index n = 40000;
  Vector sum = Vector::Zero(2);
  for (Index i = 0; i < n; ++i) {
    const Vector x = rgo_orthant(1.0, Vector::Zero(2), o, rng);
    REQUIRE(o.contains(x));
    sum += x;
  }
  const double half_normal = std::sqrt(2.0 / M_PI);
  const double se = std::sqrt((1.0 - 2.0 / M_PI) / n);
  CHECK(std::abs(sum[0] / n - half_normal) < 3.0 * se);
  CHECK(std::abs(sum[1] / n + half_normal) < 3.0 * se);
}

TEST_CASE("l1 branch weights agree with quadrature") {
  for (double lambda : {0.1, 1.0, 4.0}) {
    for (double v : {-3.0, -0.4, 0.0, 0.7, 5.0}) {
      for (double alpha : {0.5, 2.0}) {
        auto log_density = [=](double x) {
          return -(x - v) * (x - v) / (2.0 * lambda) - alpha * std::abs(x);
        };
        const double width = 40.0 * std::sqrt(lambda) + std::abs(v);
        const double pos = quadrature_1d(log_density, 0.0, width).log_z;
        const double neg = quadrature_1d(log_density, -width, 0.0).log_z;
        CAPTURE(lambda);
        CAPTURE(v);
        CAPTURE(alpha);
        CHECK(l1_branch_log_odds(lambda, v, alpha) == doctest::Approx(pos - neg).epsilon(1e-9));
      }
    }
  }
  // Far tails stay finite.
  CHECK(std::isfinite(l1_branch_log_odds(0.01, 50.0, 3.0)));
  CHECK(std::isfinite(l1_branch_log_odds(0.01, -50.0, 3.0)));
}

TEST_CASE("l1 oracle with alpha = 0 is the plain Gaussian") {
  Rng rng(3);
  const Vector x = rgo_l1(2.0, Vector::Constant(3, 1.0), 0.0, rng);
  CHECK(x.size() == 3);
}

TEST_CASE("l1 and box oracles match quadrature CDFs in 1-D") {
  Rng rng(4);
  const double lambda = 0.8;
  const double v = 0.9;
  {
    const double alpha = 1.5;
    const QuadratureCdf cdf(
        [=](double x) { return -(x - v) * (x - v) / (2 * lambda) - alpha * std::abs(x); },
        -20.0, 20.0);
    CHECK(ks_one_sample(draw_1d(l1_potential(1, alpha), lambda, v, 20000, rng), cdf) < 0.015);
  }
  {
    const QuadratureCdf cdf([=](double x) { return -(x - v) * (x - v) / (2 * lambda); }, -0.5,
                            0.25);
    const Vector draws = draw_1d(box_potential(Vector::Constant(1, -0.5), Vector::Constant(1, 0.25)),
                                 lambda, v, 20000, rng);
    CHECK(draws.minCoeff() >= -0.5);
    CHECK(draws.maxCoeff() <= 0.25);
    CHECK(ks_one_sample(draws, cdf) < 0.015);
  }
}

TEST_CASE("quadratic oracle has the closed-form Gaussian moments") {
  Rng rng(5);
  const double lambda = 0.5;
  const Vector v = (Vector(2) << 1.0, -2.0).finished();
  const Vector a = (Vector(2) << 3.0, 0.0).finished();
  const Vector b = (Vector(2) << 1.0, -1.0).finished();
  const Index n = 100000;
  Vector sum = Vector::Zero(2);
  Vector sq = Vector::Zero(2);
  for (Index i = 0; i < n; ++i) {
    const Vector x = rgo_quadratic(lambda, v, a, b, rng);
    sum += x;
    sq += x.cwiseProduct(x);
  }
  const Vector precision = (1.0 / lambda + a.array()).matrix();
  const Vector mean = ((v / lambda - b).array() / precision.array()).matrix();
  const Vector var = precision.cwiseInverse();
  const Vector m_hat = sum / n;
  const Vector v_hat = sq / n - m_hat.cwiseProduct(m_hat);
  for (Index i = 0; i < 2; ++i) {
    CHECK(std::abs(m_hat[i] - mean[i]) < 3.0 * std::sqrt(var[i] / n));
    CHECK(std::abs(v_hat[i] - var[i]) < 3.0 * var[i] * std::sqrt(2.0 / n));
  }
}

TEST_CASE("proximal maps") {
  const Vector v = (Vector(4) << 3.0, -0.2, 0.5, -4.0).finished();
  CHECK(orthant_potential(OrthantSpec::positive(4)).prox(1.0, v) ==
        (Vector(4) << 3.0, 0.0, 0.5, 0.0).finished());
  CHECK(box_potential(Vector::Constant(4, -1.0), Vector::Constant(4, 1.0)).prox(1.0, v) ==
        (Vector(4) << 1.0, -0.2, 0.5, -1.0).finished());
  // Soft threshold at alpha * lambda = 0.6.
  const Vector st = l1_potential(4, 1.2).prox(0.5, v);
  CHECK((st - (Vector(4) << 2.4, 0.0, 0.0, -3.4).finished()).norm() < 1e-15);
  CHECK(zero_potential(4).prox(3.0, v) == v);
  // Quadratic prox satisfies its first-order condition.
  const Vector a = (Vector(4) << 1.0, 0.0, 2.0, 5.0).finished();
  const Vector b = (Vector(4) << 0.5, -1.0, 0.0, 2.0).finished();
  const double lambda = 0.3;
  const Vector x = diagonal_quadratic_potential(a, b).prox(lambda, v);
  CHECK(((x - v) / lambda + a.cwiseProduct(x) + b).norm() < 1e-12);
}

TEST_CASE("potential values") {
  const Vector inside = (Vector(2) << 1.0, 2.0).finished();
  const Vector outside = (Vector(2) << -1.0, 2.0).finished();
  const auto orthant = orthant_potential(OrthantSpec::positive(2));
  CHECK(orthant.value(inside) == 0.0);
  CHECK(std::isinf(orthant.value(outside)));
  const auto box = box_potential(Vector::Zero(2), Vector::Constant(2, 1.5));
  CHECK(std::isinf(box.value(inside)));
  CHECK(l1_potential(2, 2.0).value(outside) == doctest::Approx(6.0));
  CHECK(diagonal_quadratic_potential(Vector::Ones(2), Vector::Ones(2)).value(inside) ==
        doctest::Approx(2.5 + 3.0));
}
