#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "compsamp/model.hpp"

namespace compsamp {

// Resolved parameters of one sampler configuration. All defaults are closed-form
// functions of (L, mu, d, epsilon); see make_sampler_params.
struct SamplerParams {
  double epsilon = 0.1;         // target total variation
  double delta = 0.1 / 18.0;    // inner budget, epsilon / 18
  double eta = 0.0;             // coupling scale between x and y
  long iterations = 0;          // K, alternating rounds per joint-distribution draw
  double loop_constant = 10.0;  // replaces 2^26 * 100 in the iteration count
  double omega_radius = 0.0;    // outer acceptance region ||x - x*|| <= omega_radius
  double inner_radius = 0.0;    // R_delta
  double sample_y_delta = 0.0;  // TV budget handed to each inner y draw
  double fallback_constant = 20.0;
  bool paper_faithful = false;
  // When false, an estimator value above the outer bound is counted in OuterStats
  // instead of raising InvariantViolation.
  bool enforce_theta_bound = true;
};

struct SamplerOptions {
  std::optional<double> eta;
  std::optional<long> iterations;
  double loop_constant = 10.0;
  // Restores the 2^26 * 100 iteration constant and checks eta L^2 R^2 <= 1/2.
  bool paper_faithful = false;
  double fallback_constant = 20.0;
  bool enforce_theta_bound = true;
};

inline constexpr double kPaperLoopConstant = 67108864.0 * 100.0;  // 2^26 * 100
inline constexpr double kOuterAcceptanceBound = 4.0;

// 4 * sqrt(d * log(log_argument) / mu). With log_argument = 288 kappa / epsilon this is the
// outer region radius; with 16 kappa / delta it is R_delta.
double concentration_radius(Index dim, double mu, double log_argument);

// 1 / (32 L kappa d log(16 kappa / delta)).
double theoretical_eta(double L, double kappa, Index dim, double delta);

// ceil(loop_constant / (eta mu) * log(d log(16 kappa) / (4 delta))), at least 1.
long theoretical_iterations(double eta, double mu, Index dim, double kappa, double delta,
                            double loop_constant);

SamplerParams make_sampler_params(const SmoothPotential& f, double epsilon,
                                  const SamplerOptions& options = {});

struct CallCounters {
  long gradient_calls = 0;
  long value_calls = 0;
  long oracle_calls = 0;
};

// ---------------------------------------------------------------------------
// Inner y-step: exact draw from exp(-f(y) - ||y - x||^2 / (2 eta)).

struct SampleYResult {
  Vector y;
  int iterations = 0;       // rejection proposals (or fallback steps) used
  bool used_fallback = false;
};

// Radius around x* inside which the rejection branch of sample_y is used:
// sqrt(kappa d log(16 kappa / delta)) * R_delta.
double sample_y_radius(const SmoothPotential& f, double delta);

// Rejection sampler with proposal N(x - eta grad f(x), eta I) and acceptance
// exp(f(x) + <grad f(x), y - x> - f(y)). Outside sample_y_radius it falls back to a
// Metropolis-adjusted Langevin chain. Throws InvariantViolation if an acceptance
// probability exceeds 1 + 1e-12 (f not convex).
SampleYResult sample_y(const SmoothPotential& f, const Vector& x, double eta, double delta,
                       const Vector& x_star, Rng& rng, CallCounters* counters = nullptr,
                       double fallback_constant = 20.0);

// ---------------------------------------------------------------------------
// Metropolized one-step HMC (MALA) used as the far-from-minimizer fallback.

using PotentialFn = std::function<double(const Vector&)>;
using PotentialGradFn = std::function<Vector(const Vector&)>;

struct MalaResult {
  Vector state;
  long steps = 0;
  long accepted = 0;
};

// log of the Metropolis-Hastings ratio for moving from `from` to `to` under the
// Langevin proposal N(from - (h^2/2) grad U(from), h^2 I).
double mala_log_acceptance(const PotentialFn& potential, const PotentialGradFn& gradient,
                           const Vector& from, const Vector& to, double step_size);

MalaResult fallback_metropolized_chain(const PotentialFn& potential,
                                       const PotentialGradFn& gradient, const Vector& x0,
                                       long steps, double step_size, Rng& rng);

// ---------------------------------------------------------------------------
// Alternating sampler on the joint density
//   exp(-f(y) - g(x) - ||y - x||^2 / (2 eta) - (eta L^2 / 2) ||x - x*||^2).
// f and g must share the minimizer x_star.

enum class TraceRecording { kFinalOnly, kIterates, kFull };

struct ChainTrace {
  Vector start;         // x_0, drawn from the warm start
  Matrix iterates;      // rows x_1..x_K (only x_K with kFinalOnly)
  Matrix y_iterates;    // rows y_1..y_K with kFull, empty otherwise
  long gradient_calls = 0;
  long oracle_calls = 0;
  long sample_y_iterations = 0;
  long fallback_calls = 0;
  std::uint64_t seed = 0;
  SamplerParams params;
  double wall_ms = 0.0;

  Vector final_state() const { return iterates.row(iterates.rows() - 1).transpose(); }
};

// Stateful form of the alternating sampler; one step is a y-update followed by an
// x-update through g's restricted Gaussian oracle.
class JointDistChain {
 public:
  // Draws x_0 from the warm start exp(-(L + eta L^2)/2 ||x - x*||^2 - g(x)).
  JointDistChain(SmoothPotential f, CompositePotential g, Vector x_star, SamplerParams params,
                 Rng& rng);

  void step(Rng& rng);
  // Replaces the current x, e.g. to start from a known distribution.
  void set_state(Vector x);

  const Vector& state() const { return x_; }
  const Vector& last_y() const { return y_; }
  const CallCounters& counters() const { return counters_; }
  long sample_y_iterations() const { return sample_y_iterations_; }
  long fallback_calls() const { return fallback_calls_; }
  const SamplerParams& params() const { return params_; }

 private:
  SmoothPotential f_;
  CompositePotential g_;
  Vector x_star_;
  SamplerParams params_;
  double anchor_lambda_;  // 1 / (eta L^2), the factor pulling x toward x*
  Vector x_;
  Vector y_;
  CallCounters counters_;
  long sample_y_iterations_ = 0;
  long fallback_calls_ = 0;
};

ChainTrace sample_joint_dist(const SmoothPotential& f, const CompositePotential& g,
                             const Vector& x_star, const SamplerParams& params, Rng& rng,
                             TraceRecording recording = TraceRecording::kIterates);

// ---------------------------------------------------------------------------
// Outer approximate rejection filter.

// log of the unbiased one-sample estimator of p(x) / p_hat(x), given y drawn from
// exp(-f(y) - ||y - x||^2 / (2 eta)). The +-g(x) terms cancel, so g is never evaluated.
double log_theta_hat(const SmoothPotential& f, const Vector& x, const Vector& x_star,
                     double eta, const Vector& y);

struct OuterStats {
  long samples = 0;
  long outer_loops = 0;
  long outside_omega = 0;
  long theta_evaluations = 0;
  long theta_bound_exceeded = 0;
  double max_log_theta = -std::numeric_limits<double>::infinity();
  long joint_iterations = 0;
  long gradient_calls = 0;
  long oracle_calls = 0;
};

// f and g share the minimizer x_star. Loops: joint-distribution draw, keep it if inside
// the outer region, then accept with probability theta_hat / 4.
Vector composite_sample_shared_min(const SmoothPotential& f, const CompositePotential& g,
                                   const Vector& x_star, const SamplerParams& params, Rng& rng,
                                   OuterStats* stats = nullptr);

// Reusable sampler for exp(-f - g): computes x* if needed, shifts the linear term
// grad f(x*) from f onto g so both share x*, and resolves parameters once.
class CompositeSampler {
 public:
  CompositeSampler(CompositeTarget target, double epsilon, const SamplerOptions& options = {});

  Vector sample(Rng& rng);

  const SamplerParams& params() const { return params_; }
  const Vector& minimizer() const { return *shifted_.x_star; }
  const CompositeTarget& shifted_target() const { return shifted_; }
  const OuterStats& stats() const { return stats_; }

 private:
  CompositeTarget shifted_;
  SamplerParams params_;
  OuterStats stats_;
};

Vector composite_sample(const CompositeTarget& target, double epsilon, Rng& rng,
                        const SamplerOptions& options = {});

}  // namespace compsamp
