#include <doctest.h>

#include <cmath>

#include "compsamp/baselines.hpp"
#include "compsamp/truncated_normal.hpp"
#include "support/stats.hpp"

using namespace compsamp;

TEST_CASE("RestrictedGaussian caches a consistent factorization") {
  Rng rng(1);
  Matrix a = Matrix::Random(4, 4);
  const Matrix sigma = a * a.transpose() + Matrix::Identity(4, 4);
  const RestrictedGaussian t(rng.normal_vector(4), sigma, OrthantSpec::positive(4));
  CHECK((t.covariance_factor() * t.covariance_factor().transpose() - sigma).norm() < 1e-8);
  CHECK((sigma * t.precision() - Matrix::Identity(4, 4)).norm() < 1e-8);
  CHECK(t.covariance_factor().isLowerTriangular());
  CHECK_THROWS_AS(RestrictedGaussian(Vector::Zero(3), sigma), DimensionMismatch);
  CHECK_THROWS_AS(RestrictedGaussian(Vector::Zero(4), -sigma), std::invalid_argument);
}

TEST_CASE("chord interval through (1,1) along (-1,1)/sqrt(2)") {
  const RestrictedGaussian t(Vector::Zero(2), Matrix::Identity(2, 2), OrthantSpec::positive(2));
  const Vector x = Vector::Ones(2);
  const Vector u = (Vector(2) << -1.0, 1.0).finished() / std::sqrt(2.0);
  const auto [lo, hi] = chord_interval(t, x, u);
  CHECK(lo == doctest::Approx(-std::sqrt(2.0)));
  CHECK(hi == doctest::Approx(std::sqrt(2.0)));
  const RestrictedGaussian free(Vector::Zero(2), Matrix::Identity(2, 2));
  const auto [flo, fhi] = chord_interval(free, x, u);
  CHECK(std::isinf(flo));
  CHECK(std::isinf(fhi));
}

TEST_CASE("hit-and-run rejects points outside the orthant") {
  Rng rng(2);
  const RestrictedGaussian t(Vector::Zero(2), Matrix::Identity(2, 2), OrthantSpec({1, -1}));
  CHECK_THROWS_AS(hit_and_run_step(t, Vector::Ones(2), rng), std::invalid_argument);
  CHECK_THROWS_AS(hit_and_run_step(t, (Vector(2) << 1.0, 0.0).finished(), rng),
                  std::invalid_argument);
  const Vector start = hit_and_run_start(t);
  CHECK(start[0] == doctest::Approx(1.0));
  CHECK(start[1] == doctest::Approx(-1.0));
  CHECK(t.strictly_inside(hit_and_run_step(t, start, rng)));
}

TEST_CASE("hit-and-run leaves an unrestricted Gaussian invariant (d=3)") {
  Rng rng(3);
  const Matrix sigma = (Matrix(3, 3) << 2.0, 0.6, 0.0, 0.6, 1.0, -0.3, 0.0, -0.3, 0.5).finished();
  const Vector m = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const RestrictedGaussian t(m, sigma);
  const Index n = 100000;
  const Matrix chain = hit_and_run_chain(t, hit_and_run_start(t), n, rng);
  const Vector mean = testing::column_mean(chain);
  const Matrix cov = testing::sample_covariance(chain);
  // Correlated draws: widen the iid standard errors by the integrated autocorrelation of the
  // slowest coordinate, bounded here by 6 (measured about 3).
  const double inflation = std::sqrt(6.0);
  for (Index i = 0; i < 3; ++i) {
    CHECK(std::abs(mean[i] - m[i]) < 3.0 * inflation * std::sqrt(sigma(i, i) / n));
    for (Index j = 0; j < 3; ++j) {
      CHECK(std::abs(cov(i, j) - sigma(i, j)) <
            3.0 * inflation * testing::covariance_se(sigma, i, j, n));
    }
  }
}

TEST_CASE("hit-and-run in 1-D on the positive half line has mean sqrt(2/pi)") {
  Rng rng(4);
  const RestrictedGaussian t(Vector::Zero(1), Matrix::Identity(1, 1), OrthantSpec::positive(1));
  const Matrix chain = hit_and_run_chain(t, hit_and_run_start(t), 100000, rng);
  // In 1-D every move is an exact independent draw.
  CHECK(std::abs(chain.mean() - std::sqrt(2.0 / M_PI)) <
        3.0 * std::sqrt((1.0 - 2.0 / M_PI) / 100000.0));
}

TEST_CASE("naive rejection acceptance rates") {
  Rng rng(5);
  {
    const RestrictedGaussian t(Vector::Zero(5), Matrix::Identity(5, 5), OrthantSpec::positive(5));
    const Index n = 20000;
    const RejectionResult r = naive_rejection(t, n, rng);
    CHECK(r.complete);
    CHECK(r.samples.rows() == n);
    for (Index i = 0; i < n; ++i) REQUIRE(t.contains(r.samples.row(i).transpose()));
    // trials is negative binomial: mean n/p, sd sqrt(n(1-p))/p.
    const double p = 1.0 / 32.0;
    CHECK(std::abs(static_cast<double>(r.trials) - n / p) < 3.0 * std::sqrt(n * (1.0 - p)) / p);
  }
  {
    const RestrictedGaussian t(Vector::Constant(1, 10.0), Matrix::Identity(1, 1),
                               OrthantSpec::positive(1));
    const RejectionResult r = naive_rejection(t, 1000, rng);
    CHECK(r.trials == 1000);
  }
  {
    const Vector m = (Vector(3) << 0.3, -0.5, 1.0).finished();
    const Vector s = (Vector(3) << 1.0, 2.0, 0.5).finished();
    const RestrictedGaussian t(m, Matrix(s.cwiseProduct(s).asDiagonal()), OrthantSpec({1, 1, -1}));
    const double p = normal_cdf(m[0] / s[0]) * normal_cdf(m[1] / s[1]) * normal_cdf(-m[2] / s[2]);
    const Index n = 5000;
    const RejectionResult r = naive_rejection(t, n, rng);
    CHECK(std::abs(static_cast<double>(r.trials) - n / p) < 3.0 * std::sqrt(n * (1.0 - p)) / p);
  }
}

TEST_CASE("naive rejection reports an exhausted budget as a partial result") {
  Rng rng(6);
  const RestrictedGaussian t(Vector::Zero(10), Matrix::Identity(10, 10),
                             OrthantSpec::positive(10));
  const RejectionResult r = naive_rejection(t, 100, rng, 5000);
  CHECK_FALSE(r.complete);
  CHECK(r.trials == 5000);
  CHECK(r.samples.rows() < 100);
  CHECK_THROWS_AS(naive_rejection(t, 0, rng), std::invalid_argument);
}
