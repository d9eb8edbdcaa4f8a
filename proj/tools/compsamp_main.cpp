// compsamp: command-line harness for the composite sampler experiments.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compsamp/experiments.hpp"

int main(int argc, char** argv) {
  using compsamp::ExperimentConfig;

  CLI::App app{"Composite logconcave sampling experiments"};
  app.set_version_flag("--version", "compsamp 0.1.0");

  std::string command;
  app.add_option("command", command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember({"verify", "scaling", "autocorr", "sample"}));

  std::string config_path;
  app.add_option("--config", config_path, "JSON config (or a params.json sidecar)")
      ->check(CLI::ExistingFile);

  long dim = 0;
  std::vector<long> dims;
  double kappa = 0.0;
  double smoothness = 0.0;
  double mean_range = -1.0;
  double eta = 0.0;
  bool eta_theory = false;
  long k_iters = 0;
  double loop_constant = 0.0;
  bool paper_faithful = false;
  double epsilon = 0.0;
  std::vector<std::uint64_t> seeds;
  long samples = -1;
  std::vector<std::string> algorithms;
  std::string out_dir;
  bool paper_grid = false;
  std::string family;
  int workers = 0;
  long step_block = 0;
  long max_steps = 0;
  long steps = 0;
  long max_lag = 0;
  bool no_timing = false;

  auto* dim_opt = app.add_option("--dim", dim, "Dimension")->check(CLI::PositiveNumber);
  auto* dims_opt = app.add_option("--dims", dims, "Scaling grid, comma separated")
                       ->delimiter(',')
                       ->check(CLI::PositiveNumber);
  auto* kappa_opt = app.add_option("--kappa", kappa, "Target condition number")
                        ->check(CLI::Range(1.0, 1e12));
  auto* smooth_opt = app.add_option("--smoothness", smoothness, "Smoothness L")
                         ->check(CLI::PositiveNumber);
  auto* mean_opt = app.add_option("--mean-range", mean_range, "Mean coordinates in [-r, r]")
                       ->check(CLI::NonNegativeNumber);
  auto* eta_opt = app.add_option("--eta", eta, "Step size eta")->check(CLI::PositiveNumber);
  auto* eta_theory_opt = app.add_flag("--eta-theory", eta_theory, "Use the theoretical eta");
  eta_opt->excludes(eta_theory_opt);
  auto* k_opt = app.add_option("--k-iters", k_iters, "Alternating iterations K")
                    ->check(CLI::PositiveNumber);
  auto* lc_opt = app.add_option("--loop-constant", loop_constant, "Constant in the formula for K")
                     ->check(CLI::PositiveNumber);
  auto* faithful_opt =
      app.add_flag("--paper-faithful", paper_faithful, "Use the unreduced constant in K");
  lc_opt->excludes(faithful_opt);
  auto* eps_opt = app.add_option("--epsilon", epsilon, "Total variation target")
                      ->check(CLI::Range(1e-12, 1.0));
  auto* seeds_opt = app.add_option("--seeds", seeds, "Seeds, comma separated")->delimiter(',');
  auto* samples_opt = app.add_option("--samples", samples, "Number of samples")
                          ->check(CLI::NonNegativeNumber);
  auto* algo_opt = app.add_option("--algo", algorithms, "Algorithms, comma separated")
                       ->delimiter(',')
                       ->check(CLI::IsMember({"composite", "hitandrun", "rejection"}));
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* grid_opt = app.add_flag("--paper-grid", paper_grid,
                                "Large sizes (scaling grid 20..80, autocorr d=500)");
  auto* family_opt = app.add_option("--family", family, "Target family for 'sample'");
  auto* workers_opt = app.add_option("--workers", workers, "Concurrent runs (0 = all cores)")
                          ->check(CLI::NonNegativeNumber);
  auto* block_opt = app.add_option("--step-block", step_block, "Mixing-time granularity")
                        ->check(CLI::PositiveNumber);
  auto* max_steps_opt = app.add_option("--max-steps", max_steps, "Mixing-time step cap")
                            ->check(CLI::PositiveNumber);
  auto* steps_opt = app.add_option("--steps", steps, "Chain length for 'autocorr'")
                        ->check(CLI::PositiveNumber);
  auto* lag_opt = app.add_option("--max-lag", max_lag, "Largest autocorrelation lag")
                      ->check(CLI::PositiveNumber);
  app.add_flag("--no-timing", no_timing, "Write wall_ms as 0 for byte-stable output");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    if (!config_path.empty()) config = compsamp::load_config(config_path);
    config.experiment = compsamp::parse_experiment(command);
    if (*dim_opt) config.dim = dim;
    if (*dims_opt) config.dims.assign(dims.begin(), dims.end());
    if (*kappa_opt) config.kappa = kappa;
    if (*smooth_opt) config.smoothness = smoothness;
    if (*mean_opt) config.mean_range = mean_range;
    if (*eta_opt) {
      config.eta = eta;
      config.eta_theory = false;
    }
    if (*eta_theory_opt) {
      config.eta_theory = true;
      config.eta.reset();
    }
    if (*k_opt) config.k_iters = k_iters;
    if (*lc_opt) {
      config.loop_constant = loop_constant;
      config.paper_faithful = false;
    }
    if (*faithful_opt) config.paper_faithful = true;
    if (*eps_opt) config.epsilon = epsilon;
    if (*seeds_opt) config.seeds = seeds;
    if (*samples_opt) config.n_samples = samples;
    if (*algo_opt) config.algorithms = algorithms;
    if (*out_opt) config.out_dir = out_dir;
    if (*grid_opt) config.paper_grid = true;
    if (*family_opt) config.family = family;
    if (*workers_opt) config.workers = workers;
    if (*block_opt) config.step_block = step_block;
    if (*max_steps_opt) config.max_steps = max_steps;
    if (*steps_opt) config.autocorr_steps = steps;
    if (*lag_opt) config.max_lag = max_lag;
    if (no_timing) config.record_timing = false;
    config.validate();

    compsamp::run_experiment(config);
    std::cout << command << ": wrote outputs to " << config.out_dir << '\n';
  } catch (const std::exception& e) {
    std::cerr << "compsamp " << command << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
