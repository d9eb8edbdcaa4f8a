#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "compsamp/csv.hpp"
#include "compsamp/experiments.hpp"
#include "compsamp/quadrature.hpp"
#include "support/stats.hpp"

using namespace compsamp;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "compsamp_test_experiments" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("random_gaussian_target structure") {
  Rng rng(1);
  for (Index d : {1, 2, 7, 30}) {
    const GaussianTestTarget t = random_gaussian_target(d, 10.0, 5.0, 0.5, rng);
    const Matrix& p = t.precision;
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((t.gaussian.covariance() * p - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-8);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    CHECK(hi == doctest::Approx(5.0).epsilon(1e-10));
    if (d > 1) {
      CHECK(hi / lo >= 5.0);
      CHECK(hi / lo <= 10.0 * (1.0 + 1e-10));
    }
    CHECK(t.gaussian.mean().cwiseAbs().maxCoeff() <= 0.5);
    REQUIRE(t.gaussian.orthant().has_value());
    CHECK(t.composite.g.support() == t.gaussian.orthant()->describe());
    const Vector x = rng.normal_vector(d);
    const Vector r = x - t.gaussian.mean();
    CHECK(t.composite.f.value(x) == doctest::Approx(0.5 * r.dot(p * r)));
  }
  const GaussianTestTarget zero_mean = random_gaussian_target(5, 10.0, 5.0, 0.0, rng);
  CHECK(zero_mean.gaussian.mean().isZero(0.0));
  CHECK_THROWS_AS(random_gaussian_target(3, 0.5, 5.0, 0.5, rng), std::invalid_argument);
}

TEST_CASE("config JSON round trip, sidecar parsing and validation") {
  ExperimentConfig c;
  c.experiment = Experiment::kScaling;
  c.dims = {5, 9};
  c.eta = 0.02;
  c.seeds = {3, 18446744073709551615ULL};
  c.algorithms = {"composite"};
  c.record_timing = false;
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.seeds[1] == 18446744073709551615ULL);
  CHECK(back.eta.value() == 0.02);
  CHECK_FALSE(back.dim.has_value());

  const std::string sidecar = "{\"config\": " + config_to_json(c) + ", \"resolved\": {}}";
  CHECK(config_to_json(config_from_json(sidecar)) == config_to_json(c));

  CHECK_THROWS_AS(config_from_json("{\"kapa\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("{\"kappa\": 0.5}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("{\"seeds\": []}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("{\"algorithms\": [\"gibbs\"]}"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("{\"experiment\": \"nope\"}"), std::invalid_argument);
}

TEST_CASE("run_sample: unknown family, empty output and sidecar rerun") {
  ExperimentConfig c;
  c.family = "gaussian-simplex";
  c.out_dir = scratch("sample_bad").string();
  try {
    run_sample(c);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    for (const auto& f : kSampleFamilies) CHECK(msg.find(f) != std::string::npos);
  }

  c.family = "gaussian-box";
  c.dim = 3;
  c.n_samples = 0;
  c.out_dir = scratch("sample_empty").string();
  const auto empty = run_sample(c);
  CHECK(slurp(empty.front().csv) == "x0,x1,x2\n");

  c.n_samples = 40;
  c.seeds = {5};
  c.out_dir = scratch("sample_a").string();
  const auto first = run_sample(c);
  ExperimentConfig again = load_config(std::filesystem::path(c.out_dir) / "params.json");
  again.out_dir = scratch("sample_b").string();
  const auto second = run_sample(again);
  CHECK(slurp(first.front().csv) == slurp(second.front().csv));
  CHECK(read_csv(first.front().csv).rows.size() == 40);
}

TEST_CASE("gaussian-l1 family in 2-D matches a product-quadrature oracle") {
  ExperimentConfig c;
  c.family = "gaussian-l1";
  c.dim = 2;
  c.n_samples = 3000;
  c.seeds = {11};
  c.eta = 0.02;
  c.k_iters = 400;
  c.out_dir = scratch("sample_l1").string();
  const auto result = run_sample(c).front();
  const FamilyTarget family = sample_family_target(c, 11);
  const CompositeTarget& t = family.target;

  // Nested adaptive quadrature: inner over x1 gives the log marginal of x0.
  auto log_marginal = [&](double x0) {
    return quadrature_1d(
               [&](double x1) { return -t.value((Vector(2) << x0, x1).finished()); }, -15.0, 15.0)
        .log_z;
  };
  const QuadratureResult m0 = quadrature_1d(log_marginal, -15.0, 15.0);
  auto log_marginal1 = [&](double x1) {
    return quadrature_1d(
               [&](double x0) { return -t.value((Vector(2) << x0, x1).finished()); }, -15.0, 15.0)
        .log_z;
  };
  const QuadratureResult m1 = quadrature_1d(log_marginal1, -15.0, 15.0);

  const Vector mean = testing::column_mean(result.samples);
  const double n = static_cast<double>(result.samples.rows());
  CHECK(std::abs(mean[0] - m0.mean) < 3.0 * std::sqrt(m0.variance / n));
  CHECK(std::abs(mean[1] - m1.mean) < 3.0 * std::sqrt(m1.variance / n));
}

TEST_CASE("run_verify writes projections and a KS summary") {
  ExperimentConfig c;
  c.dim = 3;
  c.n_samples = 300;
  c.k_iters = 100;
  c.out_dir = scratch("verify").string();
  const VerifyResult r = run_verify(c);
  CHECK(r.composite.rows() == 300);
  CHECK(r.rejection.rows() == 300);
  CHECK(r.ks.size() == 10);
  const CsvTable summary = read_csv(std::filesystem::path(c.out_dir) / "verify_ks.csv");
  CHECK(summary.rows.size() == 10);
  for (int p = 0; p < 5; ++p) {
    const auto stem = std::filesystem::path(c.out_dir) / ("verify_pair" + std::to_string(p));
    CHECK(read_csv(stem.string() + "_composite.csv").rows.size() == 300);
    CHECK(read_csv(stem.string() + "_rejection.csv").rows.size() == 300);
  }
  CHECK(std::filesystem::exists(std::filesystem::path(c.out_dir) / "params.json"));
  c.dim = 16;
  CHECK_THROWS_AS(run_verify(c), std::invalid_argument);
}

TEST_CASE("run_scaling: header, order and failure rows") {
  ExperimentConfig c;
  c.dims = {6, 3};
  c.seeds = {2, 1};
  c.record_timing = false;
  c.workers = 3;
  c.out_dir = scratch("scaling").string();
  const auto rows = run_scaling(c);
  REQUIRE(rows.size() == 8);
  const auto path = std::filesystem::path(c.out_dir) / "scaling.csv";
  const std::string text = slurp(path);
  CHECK(text.substr(0, text.find('\n')) == kScalingHeader);
  CHECK(rows.front().algorithm == "composite");
  CHECK(rows.front().d == 3);
  CHECK(rows.front().seed == 1);
  CHECK(rows.back().algorithm == "hitandrun");
  CHECK(rows.back().d == 6);
  CHECK(rows.back().seed == 2);
  for (const auto& r : rows) {
    CHECK(r.mixing_steps > 0);
    CHECK(r.wall_ms == 0.0);
    CHECK(r.oracle_calls > 0);
  }
  // Worker count does not change the output.
  c.workers = 1;
  c.out_dir = scratch("scaling_serial").string();
  run_scaling(c);
  CHECK(slurp(std::filesystem::path(c.out_dir) / "scaling.csv") == text);

  c.max_steps = 10;
  c.step_block = 10;
  c.dims = {40};
  c.seeds = {1};
  c.out_dir = scratch("scaling_fail").string();
  const auto failed = run_scaling(c);
  for (const auto& r : failed) CHECK(r.mixing_steps == -1);
}

TEST_CASE("run_autocorr writes lag tables starting at 1") {
  ExperimentConfig c;
  c.dim = 8;
  c.autocorr_steps = 3000;
  c.max_lag = 50;
  c.out_dir = scratch("autocorr").string();
  const AutocorrResult r = run_autocorr(c);
  REQUIRE(r.autocorrelation.size() == 2);
  for (const auto& [name, rho] : r.autocorrelation) {
    CHECK(rho.size() == 51);
    CHECK(rho[0] == 1.0);
    const CsvTable t = read_csv(std::filesystem::path(c.out_dir) / ("autocorr_" + name + ".csv"));
    CHECK(t.header == std::vector<std::string>{"lag", "autocorrelation"});
    CHECK(t.rows.front()[1] == "1");
  }
  CHECK(r.direction.norm() == doctest::Approx(1.0));
}
