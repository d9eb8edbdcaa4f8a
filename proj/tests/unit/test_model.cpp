#include <doctest.h>

#include <cmath>
#include <limits>

#include "compsamp/model.hpp"
#include "compsamp/oracles.hpp"
#include "support/potentials.hpp"
#include "support/stats.hpp"

using namespace compsamp;

namespace {

void check_gradient_and_pairs(const SmoothPotential& f, Rng& rng, double scale) {
  const Index d = f.dim();
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = scale * rng.normal_vector(d);
    const Vector g = f.gradient(x);
    for (Index i = 0; i < d; ++i) {
      Vector e = Vector::Zero(d);
      e[i] = h;
      const double fd = (f.value(x + e) - f.value(x - e)) / (2.0 * h);
      REQUIRE(std::abs(fd - g[i]) <= 1e-5 * (1.0 + std::abs(g[i])));
    }
  }
  for (int pair = 0; pair < 1000; ++pair) {
    const Vector x = scale * rng.normal_vector(d);
    const Vector y = scale * rng.normal_vector(d);
    const double gap = f.value(y) - f.value(x) - f.gradient(x).dot(y - x);
    const double r2 = (y - x).squaredNorm();
    const double slack = 1e-10 * (1.0 + std::abs(f.value(x)) + std::abs(f.value(y)));
    REQUIRE(gap >= 0.5 * f.strong_convexity() * r2 - slack);
    REQUIRE(gap <= 0.5 * f.smoothness() * r2 + slack);
  }
}

}  // namespace

TEST_CASE("GaussianFactor rejects non-positive lambda") {
  CHECK_THROWS_AS(GaussianFactor(0.0, Vector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(GaussianFactor(-1.0, Vector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(GaussianFactor(std::nan(""), Vector::Zero(2)), std::invalid_argument);
  CHECK(GaussianFactor(2.0, Vector::Ones(3)).exponent(Vector::Zero(3)) == doctest::Approx(0.75));
}

TEST_CASE("fold_factors is commutative and associative") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianFactor a(0.1 + rng.uniform(), rng.normal_vector(4));
    const GaussianFactor b(0.1 + 5.0 * rng.uniform(), rng.normal_vector(4));
    const GaussianFactor c(0.01 + rng.uniform(), rng.normal_vector(4));
    const GaussianFactor ab = fold_factors(a, b);
    const GaussianFactor ba = fold_factors(b, a);
    CHECK(std::abs(ab.lambda - ba.lambda) <= 1e-12 * ab.lambda);
    CHECK((ab.center - ba.center).norm() <= 1e-12 * (1.0 + ab.center.norm()));
    const GaussianFactor left = fold_factors(fold_factors(a, b), c);
    const GaussianFactor right = fold_factors(a, fold_factors(b, c));
    CHECK(std::abs(left.lambda - right.lambda) <= 1e-12 * left.lambda);
    CHECK((left.center - right.center).norm() <= 1e-12 * (1.0 + left.center.norm()));
  }
}

TEST_CASE("fold_factors matches completing the square") {
  const GaussianFactor a(0.5, Vector::Constant(1, 1.0));
  const GaussianFactor b(2.0, Vector::Constant(1, -3.0));
  const GaussianFactor ab = fold_factors(a, b);
  // precision 2 + 0.5 = 2.5; center (1*2 + (-3)*0.5) / 2.5 = 0.2.
  CHECK(ab.lambda == doctest::Approx(0.4));
  CHECK(ab.center[0] == doctest::Approx(0.2));
  // The exponents agree up to a constant.
  const Vector x1 = Vector::Constant(1, 0.7);
  const Vector x2 = Vector::Constant(1, -1.9);
  const double lhs = a.exponent(x1) + b.exponent(x1) - a.exponent(x2) - b.exponent(x2);
  CHECK(lhs == doctest::Approx(ab.exponent(x1) - ab.exponent(x2)));
}

TEST_CASE("fold_factors treats infinite lambda as the identity") {
  const GaussianFactor a(0.3, Vector::Constant(2, 1.5));
  const GaussianFactor vacuous(std::numeric_limits<double>::infinity(), Vector::Zero(2));
  CHECK(fold_factors(a, vacuous).lambda == a.lambda);
  CHECK(fold_factors(vacuous, a).center == a.center);
  CHECK(fold_factors(a).lambda == a.lambda);
  CHECK_THROWS_AS(fold_factors(a, GaussianFactor(1.0, Vector::Zero(3))), DimensionMismatch);
}

TEST_CASE("SmoothPotential validates its constants") {
  auto v = [](const Vector& x) { return x.squaredNorm(); };
  auto g = [](const Vector& x) -> Vector { return 2.0 * x; };
  CHECK_THROWS_AS(SmoothPotential(2, 1.0, 2.0, v, g), std::invalid_argument);
  CHECK_THROWS_AS(SmoothPotential(2, 1.0, 0.0, v, g), std::invalid_argument);
  CHECK_THROWS_AS(SmoothPotential(0, 2.0, 2.0, v, g), std::invalid_argument);
  CHECK_THROWS_AS(SmoothPotential(2, std::numeric_limits<double>::infinity(), 1.0, v, g),
                  std::invalid_argument);
  CHECK(SmoothPotential(2, 4.0, 2.0, v, g).condition_number() == doctest::Approx(2.0));
}

TEST_CASE("quadratic potential: constants, gradient and pair inequalities") {
  Rng rng(12);
  const Index d = 4;
  Matrix a = Matrix::Random(d, d);
  Matrix p = a * a.transpose() + 0.5 * Matrix::Identity(d, d);
  const Vector m = rng.normal_vector(d);
  const SmoothPotential f = quadratic_potential(p, m);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
  CHECK(f.smoothness() == doctest::Approx(eig.eigenvalues().maxCoeff()));
  CHECK(f.strong_convexity() == doctest::Approx(eig.eigenvalues().minCoeff()));
  CHECK(f.value(m) == 0.0);
  check_gradient_and_pairs(f, rng, 2.0);

  Matrix asym = p;
  asym(0, 1) += 1.0;
  CHECK_THROWS_AS(quadratic_potential(asym, m), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_potential(-p, m), std::invalid_argument);
}

TEST_CASE("non-quadratic potentials satisfy their declared L and mu") {
  Rng rng(13);
  check_gradient_and_pairs(testing::smoothed_abs_potential(3, 0.5, 0.2), rng, 1.5);
  check_gradient_and_pairs(testing::logistic_potential(5, 0.1), rng, 3.0);
  check_gradient_and_pairs(isotropic_quadratic_potential(2.5, Vector::Ones(3)), rng, 1.0);
}

TEST_CASE("CompositeTarget checks dimensions") {
  const SmoothPotential f = isotropic_quadratic_potential(1.0, Vector::Zero(3));
  CHECK_THROWS_AS(CompositeTarget(f, zero_potential(2)), DimensionMismatch);
  CHECK_THROWS_AS(CompositeTarget(f, zero_potential(3), Vector::Zero(2)), DimensionMismatch);
  const CompositeTarget t(f, l1_potential(3, 1.0));
  CHECK(t.value(Vector::Ones(3)) == doctest::Approx(1.5 + 3.0));
}

TEST_CASE("shift_linear preserves f + g and moves the oracle center") {
  Rng rng(14);
  const Index d = 3;
  const Vector c = (Vector(3) << 0.5, -1.0, 2.0).finished();
  const CompositeTarget base(isotropic_quadratic_potential(2.0, Vector::Ones(d)), zero_potential(d));
  const CompositeTarget shifted = shift_linear(base, c);
  for (int i = 0; i < 20; ++i) {
    const Vector x = rng.normal_vector(d);
    CHECK(shifted.value(x) == doctest::Approx(base.value(x)).epsilon(1e-12));
    CHECK((shifted.f.gradient(x) - (base.f.gradient(x) - c)).norm() < 1e-12);
  }

  // With g = 0 the shifted oracle samples N(v - lambda c, lambda I).
  const double lambda = 0.7;
  const Vector v = (Vector(3) << 1.0, 0.0, -2.0).finished();
  const Index n = 100000;
  Matrix draws(n, d);
  for (Index i = 0; i < n; ++i) draws.row(i) = shifted.g.sample(GaussianFactor(lambda, v), rng).transpose();
  const Vector expected = v - lambda * c;
  const Vector se = testing::mean_se(Vector::Constant(d, lambda), n);
  const Vector err = (testing::column_mean(draws) - expected).cwiseAbs();
  for (Index i = 0; i < d; ++i) CHECK(err[i] < 3.0 * se[i]);
  CHECK(shifted.g.has_prox());
  CHECK((shifted.g.prox(lambda, v) - expected).norm() < 1e-12);
}

TEST_CASE("prox_gradient_residual vanishes at the composite minimizer") {
  // f = 1/2 (x - 3)^2 on the nonnegative orthant, minimizer 3; with l1 weight 1 it is 2.
  const SmoothPotential f = isotropic_quadratic_potential(1.0, Vector::Constant(1, 3.0));
  CHECK(prox_gradient_residual(f, orthant_potential(OrthantSpec::positive(1)),
                               Vector::Constant(1, 3.0)) < 1e-15);
  CHECK(prox_gradient_residual(f, l1_potential(1, 1.0), Vector::Constant(1, 2.0)) < 1e-15);
  CHECK(prox_gradient_residual(f, l1_potential(1, 1.0), Vector::Constant(1, 1.0)) > 0.5);
}
