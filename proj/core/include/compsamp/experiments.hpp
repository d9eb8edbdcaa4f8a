#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compsamp/baselines.hpp"
#include "compsamp/sampler.hpp"

namespace compsamp {

enum class Experiment { kVerify, kScaling, kAutocorr, kSample };

std::string to_string(Experiment experiment);
Experiment parse_experiment(const std::string& name);

inline const std::vector<std::string> kAlgorithms = {"composite", "hitandrun", "rejection"};
inline const std::vector<std::string> kSampleFamilies = {
    "gaussian-orthant", "gaussian-box", "gaussian-l1", "gaussian-unrestricted"};
inline const std::vector<Index> kDeskGrid = {10, 20, 40};
inline const std::vector<Index> kPaperGrid = {20, 35, 50, 65, 80};

struct ExperimentConfig {
  Experiment experiment = Experiment::kSample;
  std::optional<Index> dim;  // per-experiment default when absent
  std::vector<Index> dims;   // scaling grid; empty selects kDeskGrid or kPaperGrid
  double kappa = 10.0;
  double smoothness = 5.0;
  double mean_range = 0.5;
  std::optional<double> eta;
  bool eta_theory = false;
  std::optional<long> k_iters;
  double loop_constant = 10.0;
  bool paper_faithful = false;
  double epsilon = 0.1;
  std::vector<std::uint64_t> seeds = {1};
  long n_samples = 3000;
  std::vector<std::string> algorithms = kAlgorithms;
  std::string out_dir = "out";
  bool paper_grid = false;
  std::string family = "gaussian-orthant";
  int workers = 0;  // 0 selects the hardware concurrency
  long step_block = 10;
  long max_steps = 1000000;
  long autocorr_steps = 20000;
  Index max_lag = 200;
  bool record_timing = true;  // when false, wall_ms is written as 0

  // Throws std::invalid_argument on a config that breaks a documented invariant.
  void validate() const;
  bool runs(const std::string& algorithm) const;
};

// JSON round trip. Parsing also accepts a params.json sidecar, reading its "config" member.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Random dense Gaussian test problem: precision eigenvalues log-uniform on [L/kappa, L] with
// both endpoints present, Haar-random eigenbasis, mean uniform on [-mean_range, mean_range]^d,
// random orthant signs. Both views describe the same orthant-restricted Gaussian.
struct GaussianTestTarget {
  Matrix precision;
  RestrictedGaussian gaussian;
  CompositeTarget composite;
};

GaussianTestTarget random_gaussian_target(Index dim, double kappa, double L, double mean_range,
                                          Rng& rng);

// The target that run_sample draws from for one seed: f = 1/2 (x - mean)^T precision (x - mean)
// from random_gaussian_target, paired with the family's g.
struct FamilyTarget {
  Matrix precision;
  Vector mean;
  CompositeTarget target;
};

// Throws std::invalid_argument for an unknown family, listing the known ones.
FamilyTarget sample_family_target(const ExperimentConfig& config, std::uint64_t seed);

inline constexpr double kSampleL1Weight = 1.0;
inline constexpr double kSampleBoxHalfWidth = 1.0;

struct VerifyResult {
  Matrix composite;             // n x d
  Matrix rejection;             // n x d
  Matrix directions;            // 10 x d, rows 2p and 2p+1 form pair p
  std::vector<double> ks;       // one per direction
  OuterStats stats;
  std::uint64_t rejection_trials = 0;
};

struct ScalingRow {
  std::string algorithm;
  Index d = 0;
  std::uint64_t seed = 0;
  long mixing_steps = 0;  // -1 marks a run that failed to mix within max_steps
  double wall_ms = 0.0;
  long gradient_calls = 0;
  long oracle_calls = 0;
};

struct AutocorrResult {
  Vector direction;
  std::map<std::string, Vector> autocorrelation;  // keyed by algorithm
};

struct SampleResult {
  std::uint64_t seed = 0;
  Matrix samples;
  std::filesystem::path csv;
  OuterStats stats;
};

inline const std::string kScalingHeader =
    "algorithm,d,seed,mixing_steps,wall_ms,gradient_calls,oracle_calls";

// Each run writes its CSVs and a params.json sidecar under config.out_dir.
VerifyResult run_verify(const ExperimentConfig& config);
std::vector<ScalingRow> run_scaling(const ExperimentConfig& config);
AutocorrResult run_autocorr(const ExperimentConfig& config);
// One sample file per configured seed.
std::vector<SampleResult> run_sample(const ExperimentConfig& config);

// Dispatches on config.experiment.
void run_experiment(const ExperimentConfig& config);

}  // namespace compsamp
