#include "compsamp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "compsamp/csv.hpp"
#include "compsamp/diagnostics.hpp"
#include "compsamp/optimize.hpp"

namespace compsamp {
namespace {

using json = nlohmann::ordered_json;

// Independent random streams derived from each user seed.
enum Stream : std::uint64_t {
  kTargetStream = 1,
  kCompositeStream = 2,
  kBaselineStream = 3,
  kDirectionStream = 4,
};

constexpr Index kVerifyMaxDim = 15;
constexpr int kVerifyPairs = 5;
constexpr double kVerifyEta = 0.01;
constexpr long kVerifyIterations = 500;
constexpr double kEmpiricalEtaScale = 0.3;  // eta = 0.3 / d
constexpr Index kAutocorrDefaultDim = 100;
constexpr Index kAutocorrPaperDim = 500;
constexpr double kAutocorrPaperEta = 0.0014;
constexpr Index kSampleDefaultDim = 10;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json stats_json(const OuterStats& s) {
  return {{"samples", s.samples},
          {"outer_loops", s.outer_loops},
          {"outside_omega", s.outside_omega},
          {"theta_evaluations", s.theta_evaluations},
          {"theta_bound_exceeded", s.theta_bound_exceeded},
          {"max_log_theta", finite_or_null(s.max_log_theta)},
          {"joint_iterations", s.joint_iterations},
          {"gradient_calls", s.gradient_calls},
          {"oracle_calls", s.oracle_calls}};
}

json params_json(const SamplerParams& p) {
  return {{"epsilon", p.epsilon},
          {"delta", p.delta},
          {"eta", p.eta},
          {"iterations", p.iterations},
          {"loop_constant", p.loop_constant},
          {"omega_radius", p.omega_radius},
          {"inner_radius", p.inner_radius},
          {"sample_y_delta", p.sample_y_delta},
          {"fallback_constant", p.fallback_constant},
          {"paper_faithful", p.paper_faithful},
          {"enforce_theta_bound", p.enforce_theta_bound}};
}

std::filesystem::path out_path(const ExperimentConfig& c, const std::string& name) {
  return std::filesystem::path(c.out_dir) / name;
}

void write_sidecar(const ExperimentConfig& config, json resolved) {
  json doc;
  doc["config"] = json::parse(config_to_json(config));
  doc["resolved"] = std::move(resolved);
  const auto path = out_path(config, "params.json");
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::string> column_names(const std::string& prefix, Index count) {
  std::vector<std::string> names;
  for (Index i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

// Sampler options for an experiment whose empirical step size is `default_eta`.
// The bound theta_hat <= 4 is only guaranteed for the theoretical step size, so it is
// enforced there and merely counted otherwise.
SamplerOptions sampler_options(const ExperimentConfig& c, double default_eta,
                               std::optional<long> default_iterations) {
  SamplerOptions o;
  if (c.eta) {
    o.eta = c.eta;
  } else if (!c.eta_theory && !c.paper_faithful) {
    o.eta = default_eta;
  }
  // Fixed iteration counts belong to the empirical step size; the theoretical step size
  // gets the theoretical count unless K is given explicitly.
  o.iterations = c.k_iters ? c.k_iters : (o.eta ? default_iterations : std::nullopt);
  o.loop_constant = c.loop_constant;
  o.paper_faithful = c.paper_faithful;
  o.enforce_theta_bound = !o.eta.has_value();
  return o;
}

double empirical_eta(Index d) { return kEmpiricalEtaScale / static_cast<double>(d); }

int worker_count(const ExperimentConfig& c, std::size_t jobs) {
  int workers = c.workers > 0 ? c.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, workers);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), jobs));
}

}  // namespace

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::kVerify: return "verify";
    case Experiment::kScaling: return "scaling";
    case Experiment::kAutocorr: return "autocorr";
    case Experiment::kSample: return "sample";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::kVerify, Experiment::kScaling, Experiment::kAutocorr,
                       Experiment::kSample}) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown experiment '" + name +
                              "' (expected verify, scaling, autocorr or sample)");
}

void ExperimentConfig::validate() const {
  if (dim && *dim < 1) throw std::invalid_argument("config: dim must be >= 1");
  for (Index d : dims) {
    if (d < 1) throw std::invalid_argument("config: every entry of dims must be >= 1");
  }
  if (!(kappa >= 1.0)) throw std::invalid_argument("config: kappa must be >= 1");
  if (!(smoothness > 0.0)) throw std::invalid_argument("config: smoothness must be > 0");
  if (!(mean_range >= 0.0)) throw std::invalid_argument("config: mean_range must be >= 0");
  if (eta && !(*eta > 0.0)) throw std::invalid_argument("config: eta must be > 0");
  if (eta && eta_theory) throw std::invalid_argument("config: eta and eta_theory conflict");
  if (k_iters && *k_iters < 1) throw std::invalid_argument("config: k_iters must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
  if (n_samples < 0) throw std::invalid_argument("config: n_samples must be >= 0");
  if (step_block < 1 || max_steps < step_block) {
    throw std::invalid_argument("config: need 1 <= step_block <= max_steps");
  }
  if (max_lag < 1 || autocorr_steps <= max_lag) {
    throw std::invalid_argument("config: need 1 <= max_lag < autocorr_steps");
  }
  for (const auto& a : algorithms) {
    if (std::find(kAlgorithms.begin(), kAlgorithms.end(), a) == kAlgorithms.end()) {
      throw std::invalid_argument("config: unknown algorithm '" + a +
                                  "' (known: composite, hitandrun, rejection)");
    }
  }
}

bool ExperimentConfig::runs(const std::string& algorithm) const {
  return std::find(algorithms.begin(), algorithms.end(), algorithm) != algorithms.end();
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["dim"] = c.dim ? json(*c.dim) : json(nullptr);
  j["dims"] = c.dims;
  j["kappa"] = c.kappa;
  j["smoothness"] = c.smoothness;
  j["mean_range"] = c.mean_range;
  j["eta"] = c.eta ? json(*c.eta) : json(nullptr);
  j["eta_theory"] = c.eta_theory;
  j["k_iters"] = c.k_iters ? json(*c.k_iters) : json(nullptr);
  j["loop_constant"] = c.loop_constant;
  j["paper_faithful"] = c.paper_faithful;
  j["epsilon"] = c.epsilon;
  j["seeds"] = c.seeds;
  j["n_samples"] = c.n_samples;
  j["algorithms"] = c.algorithms;
  j["out_dir"] = c.out_dir;
  j["paper_grid"] = c.paper_grid;
  j["family"] = c.family;
  j["workers"] = c.workers;
  j["step_block"] = c.step_block;
  j["max_steps"] = c.max_steps;
  j["autocorr_steps"] = c.autocorr_steps;
  j["max_lag"] = c.max_lag;
  j["record_timing"] = c.record_timing;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json doc = json::parse(text);
  const json& j = doc.contains("config") ? doc.at("config") : doc;
  if (!j.is_object()) throw std::invalid_argument("config JSON must be an object");
  static const std::vector<std::string> known = {
      "experiment", "dim",        "dims",       "kappa",          "smoothness", "mean_range",
      "eta",        "eta_theory", "k_iters",    "loop_constant",  "paper_faithful",
      "epsilon",    "seeds",      "n_samples",  "algorithms",     "out_dir",    "paper_grid",
      "family",     "workers",    "step_block", "max_steps",      "autocorr_steps",
      "max_lag",    "record_timing"};
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw std::invalid_argument("config JSON: unknown key '" + item.key() + "'");
    }
  }
  ExperimentConfig c;
  auto read = [&j](const char* key, auto& field) {
    if (j.contains(key) && !j.at(key).is_null()) {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    }
  };
  auto read_optional = [&j](const char* key, auto& field) {
    if (j.contains(key) && !j.at(key).is_null()) {
      field = j.at(key).get<typename std::remove_reference_t<decltype(field)>::value_type>();
    }
  };
  if (j.contains("experiment")) c.experiment = parse_experiment(j.at("experiment").get<std::string>());
  read_optional("dim", c.dim);
  read("dims", c.dims);
  read("kappa", c.kappa);
  read("smoothness", c.smoothness);
  read("mean_range", c.mean_range);
  read_optional("eta", c.eta);
  read("eta_theory", c.eta_theory);
  read_optional("k_iters", c.k_iters);
  read("loop_constant", c.loop_constant);
  read("paper_faithful", c.paper_faithful);
  read("epsilon", c.epsilon);
  read("seeds", c.seeds);
  read("n_samples", c.n_samples);
  read("algorithms", c.algorithms);
  read("out_dir", c.out_dir);
  read("paper_grid", c.paper_grid);
  read("family", c.family);
  read("workers", c.workers);
  read("step_block", c.step_block);
  read("max_steps", c.max_steps);
  read("autocorr_steps", c.autocorr_steps);
  read("max_lag", c.max_lag);
  read("record_timing", c.record_timing);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

GaussianTestTarget random_gaussian_target(Index dim, double kappa, double L, double mean_range,
                                          Rng& rng) {
  if (dim < 1) throw std::invalid_argument("random_gaussian_target: dim must be >= 1");
  if (!(kappa >= 1.0)) throw std::invalid_argument("random_gaussian_target: kappa must be >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("random_gaussian_target: L must be > 0");

  // Haar-distributed orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive.
  Matrix gauss(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) gauss(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }

  Vector eigenvalues(dim);
  const double log_lo = std::log(L / kappa);
  const double log_span = std::log(kappa);
  for (Index i = 0; i < dim; ++i) {
    double t = rng.uniform();
    if (i == 0) t = dim == 1 ? 1.0 : 0.0;
    if (i == dim - 1) t = 1.0;
    eigenvalues[i] = std::exp(log_lo + t * log_span);
  }
  Matrix precision = q * eigenvalues.asDiagonal() * q.transpose();
  precision = 0.5 * (precision + precision.transpose());
  Matrix covariance = q * eigenvalues.cwiseInverse().asDiagonal() * q.transpose();
  covariance = 0.5 * (covariance + covariance.transpose());

  Vector mean(dim);
  for (Index i = 0; i < dim; ++i) mean[i] = mean_range * (2.0 * rng.uniform() - 1.0);
  std::vector<int> signs(static_cast<std::size_t>(dim));
  for (int& s : signs) s = rng.coin() ? 1 : -1;
  const OrthantSpec orthant(signs);

  return {precision, RestrictedGaussian(mean, covariance, orthant),
          CompositeTarget(quadratic_potential(precision, mean), orthant_potential(orthant))};
}

VerifyResult run_verify(const ExperimentConfig& config) {
  config.validate();
  const Index d = config.dim.value_or(10);
  if (d > kVerifyMaxDim) {
    throw std::invalid_argument("verify: dim must be <= 15 for naive rejection to be feasible");
  }
  if (config.n_samples < 1) throw std::invalid_argument("verify: n_samples must be >= 1");
  const std::uint64_t seed = config.seeds.front();
  const Index n = config.n_samples;

  Rng target_rng(mix_seed(seed, kTargetStream));
  GaussianTestTarget target =
      random_gaussian_target(d, config.kappa, config.smoothness, config.mean_range, target_rng);

  VerifyResult result;
  CompositeSampler sampler(target.composite, config.epsilon,
                           sampler_options(config, kVerifyEta, kVerifyIterations));
  Rng composite_rng(mix_seed(seed, kCompositeStream));
  result.composite.resize(n, d);
  for (Index i = 0; i < n; ++i) result.composite.row(i) = sampler.sample(composite_rng).transpose();
  result.stats = sampler.stats();

  Rng rejection_rng(mix_seed(seed, kBaselineStream));
  RejectionResult rejection = naive_rejection(target.gaussian, n, rejection_rng);
  if (!rejection.complete) {
    throw std::runtime_error("verify: naive rejection exhausted its trial budget after " +
                             std::to_string(rejection.trials) + " trials");
  }
  result.rejection = std::move(rejection.samples);
  result.rejection_trials = rejection.trials;

  Rng direction_rng(mix_seed(seed, kDirectionStream));
  result.directions.resize(2 * kVerifyPairs, d);
  for (Index k = 0; k < 2 * kVerifyPairs; ++k) {
    result.directions.row(k) = direction_rng.unit_vector(d).transpose();
  }
  const Matrix composite_proj = result.composite * result.directions.transpose();
  const Matrix rejection_proj = result.rejection * result.directions.transpose();

  CsvWriter summary(out_path(config, "verify_ks.csv"), {"pair", "axis", "ks"});
  for (int p = 0; p < kVerifyPairs; ++p) {
    const std::string stem = "verify_pair" + std::to_string(p);
    CsvWriter(out_path(config, stem + "_composite.csv"), {"proj_a", "proj_b"})
        .rows(composite_proj.middleCols(2 * p, 2));
    CsvWriter(out_path(config, stem + "_rejection.csv"), {"proj_a", "proj_b"})
        .rows(rejection_proj.middleCols(2 * p, 2));
    for (int axis = 0; axis < 2; ++axis) {
      const Index k = 2 * p + axis;
      const double ks = ks_two_sample(composite_proj.col(k), rejection_proj.col(k));
      result.ks.push_back(ks);
      summary.cell(p).cell(axis == 0 ? "a" : "b").cell(ks).end_row();
    }
  }
  CsvWriter(out_path(config, "verify_directions.csv"), column_names("u", d))
      .rows(result.directions);
  CsvWriter(out_path(config, "verify_composite_samples.csv"), column_names("x", d))
      .rows(result.composite);

  write_sidecar(config, {{"dim", d},
                         {"seed", seed},
                         {"n_samples", n},
                         {"sampler", params_json(sampler.params())},
                         {"outer", stats_json(result.stats)},
                         {"rejection_trials", result.rejection_trials}});
  return result;
}

namespace {

struct ScalingJob {
  std::string algorithm;
  Index d;
  std::uint64_t seed;
};

ScalingRow run_scaling_job(const ExperimentConfig& config, const ScalingJob& job) {
  ScalingRow row{job.algorithm, job.d, job.seed, -1, 0.0, 0, 0};
  const auto started = std::chrono::steady_clock::now();
  // Both algorithms of one (d, seed) pair see the same target, with mean fixed at 0.
  Rng target_rng(mix_seed(mix_seed(job.seed, kTargetStream), static_cast<std::uint64_t>(job.d)));
  GaussianTestTarget target =
      random_gaussian_target(job.d, config.kappa, config.smoothness, 0.0, target_rng);
  const Index d = job.d;

  MixingResult mixing;
  if (job.algorithm == "composite") {
    CompositeTarget& t = target.composite;
    const Vector& x_star = ensure_minimizer(t);
    const SamplerParams params =
        make_sampler_params(t.f, config.epsilon, sampler_options(config, empirical_eta(d), 1L));
    Rng rng(mix_seed(mix_seed(job.seed, kCompositeStream), static_cast<std::uint64_t>(d)));
    JointDistChain chain(t.f, t.g, x_star, params, rng);
    const ChainExtender extend = [&](long steps) {
      Matrix block(steps, d);
      for (long i = 0; i < steps; ++i) {
        chain.step(rng);
        block.row(i) = chain.state().transpose();
      }
      return block;
    };
    mixing = mixing_time(extend, config.step_block, config.max_steps);
    row.gradient_calls = chain.counters().gradient_calls;
    row.oracle_calls = chain.counters().oracle_calls;
  } else {
    Rng rng(mix_seed(mix_seed(job.seed, kBaselineStream), static_cast<std::uint64_t>(d)));
    Vector x = hit_and_run_start(target.gaussian);
    long moves = 0;
    const ChainExtender extend = [&](long steps) {
      Matrix block(steps, d);
      for (long i = 0; i < steps; ++i) {
        x = hit_and_run_step(target.gaussian, x, rng);
        block.row(i) = x.transpose();
      }
      moves += steps;
      return block;
    };
    mixing = mixing_time(extend, config.step_block, config.max_steps);
    row.oracle_calls = moves;
  }
  row.mixing_steps = mixing.converged ? mixing.steps : -1;
  if (config.record_timing) row.wall_ms = elapsed_ms(started);
  return row;
}

}  // namespace

std::vector<ScalingRow> run_scaling(const ExperimentConfig& config) {
  config.validate();
  const std::vector<Index>& dims =
      !config.dims.empty() ? config.dims : (config.paper_grid ? kPaperGrid : kDeskGrid);
  std::vector<ScalingJob> jobs;
  for (const std::string algorithm : {"composite", "hitandrun"}) {
    if (!config.runs(algorithm)) continue;
    for (Index d : dims) {
      for (std::uint64_t seed : config.seeds) jobs.push_back({algorithm, d, seed});
    }
  }

  std::vector<ScalingRow> rows(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        rows[i] = run_scaling_job(config, jobs[i]);
      } catch (const std::exception& e) {
        rows[i] = {jobs[i].algorithm, jobs[i].d, jobs[i].seed, -1, 0.0, 0, 0};
        failures[i] = e.what();
      }
    }
  };
  const int workers = worker_count(config, jobs.size());
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(rows[a].algorithm, rows[a].d, rows[a].seed) <
           std::tie(rows[b].algorithm, rows[b].d, rows[b].seed);
  });
  std::vector<ScalingRow> sorted;
  json errors = json::array();
  CsvWriter csv(out_path(config, "scaling.csv"),
                {"algorithm", "d", "seed", "mixing_steps", "wall_ms", "gradient_calls",
                 "oracle_calls"});
  for (std::size_t i : order) {
    const ScalingRow& r = rows[i];
    csv.cell(r.algorithm).cell(static_cast<long>(r.d)).cell(r.seed).cell(r.mixing_steps)
        .cell(r.wall_ms).cell(r.gradient_calls).cell(r.oracle_calls).end_row();
    if (!failures[i].empty()) {
      errors.push_back({{"algorithm", r.algorithm}, {"d", r.d}, {"seed", r.seed},
                        {"error", failures[i]}});
    }
    sorted.push_back(r);
  }
  json etas = json::object();
  for (Index d : dims) etas[std::to_string(d)] = config.eta.value_or(empirical_eta(d));
  write_sidecar(config, {{"dims", dims},
                         {"eta", config.eta_theory || config.paper_faithful
                                     ? json("theoretical")
                                     : etas},
                         {"step_block", config.step_block},
                         {"max_steps", config.max_steps},
                         {"mean", 0.0},
                         {"errors", errors}});
  return sorted;
}

AutocorrResult run_autocorr(const ExperimentConfig& config) {
  config.validate();
  const Index d = config.paper_grid ? kAutocorrPaperDim : config.dim.value_or(kAutocorrDefaultDim);
  const double default_eta = d == kAutocorrPaperDim ? kAutocorrPaperEta : empirical_eta(d);
  const std::uint64_t seed = config.seeds.front();
  const long steps = config.autocorr_steps;
  const Index burn = static_cast<Index>(std::floor(kBurnInFraction * static_cast<double>(steps)));
  if (steps - burn <= config.max_lag) {
    throw std::invalid_argument("autocorr: too few steps after burn-in for max_lag");
  }

  Rng target_rng(mix_seed(seed, kTargetStream));
  GaussianTestTarget target =
      random_gaussian_target(d, config.kappa, config.smoothness, config.mean_range, target_rng);
  Rng direction_rng(mix_seed(seed, kDirectionStream));
  AutocorrResult result;
  result.direction = direction_rng.unit_vector(d);

  json resolved = {{"dim", d}, {"seed", seed}, {"steps", steps}, {"burn_in", burn}};
  auto record = [&](const std::string& algorithm, const Vector& projected) {
    const Vector kept = projected.tail(steps - burn);
    Vector rho = autocorrelation(kept, config.max_lag);
    CsvWriter csv(out_path(config, "autocorr_" + algorithm + ".csv"), {"lag", "autocorrelation"});
    for (Index k = 0; k <= config.max_lag; ++k) csv.cell(static_cast<long>(k)).cell(rho[k]).end_row();
    result.autocorrelation[algorithm] = std::move(rho);
  };

  if (config.runs("composite")) {
    CompositeSampler sampler(target.composite, config.epsilon,
                             sampler_options(config, default_eta, 1L));
    const CompositeTarget& t = sampler.shifted_target();
    Rng rng(mix_seed(seed, kCompositeStream));
    JointDistChain chain(t.f, t.g, *t.x_star, sampler.params(), rng);
    Vector projected(steps);
    for (long k = 0; k < steps; ++k) {
      chain.step(rng);
      projected[k] = result.direction.dot(chain.state());
    }
    record("composite", projected);
    resolved["composite"] = params_json(sampler.params());
  }
  if (config.runs("hitandrun")) {
    Rng rng(mix_seed(seed, kBaselineStream));
    Vector x = hit_and_run_start(target.gaussian);
    Vector projected(steps);
    for (long k = 0; k < steps; ++k) {
      x = hit_and_run_step(target.gaussian, x, rng);
      projected[k] = result.direction.dot(x);
    }
    record("hitandrun", projected);
  }
  CsvWriter(out_path(config, "autocorr_direction.csv"), column_names("u", d))
      .rows(result.direction.transpose());
  write_sidecar(config, resolved);
  return result;
}

FamilyTarget sample_family_target(const ExperimentConfig& config, std::uint64_t seed) {
  if (std::find(kSampleFamilies.begin(), kSampleFamilies.end(), config.family) ==
      kSampleFamilies.end()) {
    std::string known;
    for (const auto& f : kSampleFamilies) known += (known.empty() ? "" : ", ") + f;
    throw std::invalid_argument("unknown target family '" + config.family +
                                "'; known families: " + known);
  }
  const Index d = config.dim.value_or(kSampleDefaultDim);
  Rng target_rng(mix_seed(seed, kTargetStream));
  GaussianTestTarget base =
      random_gaussian_target(d, config.kappa, config.smoothness, config.mean_range, target_rng);
  FamilyTarget out{base.precision, base.gaussian.mean(), base.composite};
  if (config.family == "gaussian-box") {
    out.target = CompositeTarget(base.composite.f,
                                 box_potential(Vector::Constant(d, -kSampleBoxHalfWidth),
                                               Vector::Constant(d, kSampleBoxHalfWidth)));
  } else if (config.family == "gaussian-l1") {
    out.target = CompositeTarget(base.composite.f, l1_potential(d, kSampleL1Weight));
  } else if (config.family == "gaussian-unrestricted") {
    out.target = CompositeTarget(base.composite.f, zero_potential(d));
  }
  return out;
}

std::vector<SampleResult> run_sample(const ExperimentConfig& config) {
  config.validate();
  const Index d = config.dim.value_or(kSampleDefaultDim);
  std::vector<SampleResult> results;
  json per_seed = json::array();
  for (std::uint64_t seed : config.seeds) {
    FamilyTarget family = sample_family_target(config, seed);
    CompositeSampler sampler(std::move(family.target), config.epsilon,
                             sampler_options(config, empirical_eta(d), std::nullopt));
    Rng rng(mix_seed(seed, kCompositeStream));
    SampleResult r;
    r.seed = seed;
    r.samples.resize(config.n_samples, d);
    for (Index i = 0; i < config.n_samples; ++i) r.samples.row(i) = sampler.sample(rng).transpose();
    r.stats = sampler.stats();
    r.csv = out_path(config, "samples_" + config.family + "_seed" + std::to_string(seed) + ".csv");
    CsvWriter(r.csv, column_names("x", d)).rows(r.samples);
    per_seed.push_back({{"seed", seed},
                        {"file", r.csv.filename().string()},
                        {"minimizer", std::vector<double>(sampler.minimizer().begin(),
                                                          sampler.minimizer().end())},
                        {"sampler", params_json(sampler.params())},
                        {"outer", stats_json(r.stats)}});
    results.push_back(std::move(r));
  }
  write_sidecar(config, {{"family", config.family}, {"dim", d}, {"runs", per_seed}});
  return results;
}

void run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::kVerify: run_verify(config); return;
    case Experiment::kScaling: run_scaling(config); return;
    case Experiment::kAutocorr: run_autocorr(config); return;
    case Experiment::kSample: run_sample(config); return;
  }
}

}  // namespace compsamp
