#include "compsamp/sampler.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "compsamp/optimize.hpp"

namespace compsamp {
namespace {

constexpr int kMaxSampleYProposals = 1000000;
constexpr long kMaxOuterLoops = 100000;

long fallback_steps(Index dim, double delta, double fallback_constant) {
  const double d = static_cast<double>(dim);
  const double steps = std::ceil(fallback_constant * d * std::log(d / delta));
  return std::max(1L, static_cast<long>(steps));
}

struct YDraw {
  Vector y;
  int iterations;
  bool used_fallback;
};

// sample_y with f(x) and grad f(x) supplied by the caller.
YDraw draw_y(const SmoothPotential& f, const Vector& x, double fx, const Vector& grad,
             double eta, double delta, const Vector& x_star, double fallback_constant,
             Rng& rng, CallCounters& counters) {
  const Index d = x.size();
  const double sd = std::sqrt(eta);

  if ((x - x_star).norm() <= sample_y_radius(f, delta)) {
    const Vector mean = x - eta * grad;
    for (int round = 1; round <= kMaxSampleYProposals; ++round) {
      Vector y = mean + sd * rng.normal_vector(d);
      const double fy = f.value(y);
      ++counters.value_calls;
      const double log_accept = fx + grad.dot(y - x) - fy;
      if (log_accept > 1e-12 * (1.0 + std::abs(fx) + std::abs(fy))) {
        std::ostringstream msg;
        msg << "sample_y: acceptance probability exp(" << log_accept
            << ") exceeds 1; f is not convex or its gradient is wrong";
        throw InvariantViolation(msg.str());
      }
      if (std::log(rng.uniform()) <= log_accept) return {std::move(y), round, false};
    }
    throw std::runtime_error("sample_y: rejection loop exceeded its proposal cap");
  }

  // Far from the minimizer: Metropolis-adjusted Langevin on f(y) + ||y - x||^2 / (2 eta),
  // whose condition number is at most (1 + eta L) / (1 + eta mu).
  const double inv_eta = 1.0 / eta;
  const PotentialFn potential = [&](const Vector& y) {
    ++counters.value_calls;
    return f.value(y) + 0.5 * inv_eta * (y - x).squaredNorm();
  };
  const PotentialGradFn gradient = [&](const Vector& y) -> Vector {
    ++counters.gradient_calls;
    return f.gradient(y) + inv_eta * (y - x);
  };
  const double l_eff = f.smoothness() + inv_eta;
  const double step_size = 1.0 / std::sqrt(l_eff * static_cast<double>(d));
  const long steps = fallback_steps(d, delta, fallback_constant);
  MalaResult chain = fallback_metropolized_chain(potential, gradient, x - eta * grad, steps,
                                                 step_size, rng);
  return {std::move(chain.state), static_cast<int>(steps), true};
}

}  // namespace

double concentration_radius(Index dim, double mu, double log_argument) {
  return 4.0 * std::sqrt(static_cast<double>(dim) * std::log(log_argument) / mu);
}

double theoretical_eta(double L, double kappa, Index dim, double delta) {
  return 1.0 / (32.0 * L * kappa * static_cast<double>(dim) * std::log(16.0 * kappa / delta));
}

long theoretical_iterations(double eta, double mu, Index dim, double kappa, double delta,
                            double loop_constant) {
  const double log_term =
      std::log(static_cast<double>(dim) * std::log(16.0 * kappa) / (4.0 * delta));
  const double k = std::ceil(loop_constant / (eta * mu) * std::max(log_term, 1.0));
  if (!(k < 9.0e18)) throw std::overflow_error("theoretical_iterations: K overflows");
  return std::max(1L, static_cast<long>(k));
}

SamplerParams make_sampler_params(const SmoothPotential& f, double epsilon,
                                  const SamplerOptions& options) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("sampler: epsilon must lie in (0, 1]");
  }
  const Index d = f.dim();
  const double L = f.smoothness();
  const double mu = f.strong_convexity();
  const double kappa = f.condition_number();

  SamplerParams p;
  p.epsilon = epsilon;
  p.delta = epsilon / 18.0;
  p.paper_faithful = options.paper_faithful;
  p.loop_constant = options.paper_faithful ? kPaperLoopConstant : options.loop_constant;
  p.fallback_constant = options.fallback_constant;
  p.enforce_theta_bound = options.enforce_theta_bound;
  p.eta = options.eta.value_or(theoretical_eta(L, kappa, d, p.delta));
  if (!(p.eta > 0.0)) throw std::invalid_argument("sampler: eta must be positive");
  if (!(p.eta * L < 1.0)) {
    throw std::invalid_argument("sampler: need eta * L < 1 for the y-step rejection sampler");
  }
  if (!(p.loop_constant > 0.0)) throw std::invalid_argument("sampler: loop constant must be > 0");
  p.omega_radius = concentration_radius(d, mu, 288.0 * kappa / epsilon);
  p.inner_radius = concentration_radius(d, mu, 16.0 * kappa / p.delta);
  if (options.iterations) {
    if (*options.iterations < 1) throw std::invalid_argument("sampler: K must be >= 1");
    p.iterations = *options.iterations;
  } else {
    p.iterations = theoretical_iterations(p.eta, mu, d, kappa, p.delta, p.loop_constant);
  }
  const double dd = static_cast<double>(d);
  p.sample_y_delta = p.delta / (2.0 * static_cast<double>(p.iterations) * dd *
                                std::max(std::log(dd * kappa / p.delta), 1.0));
  if (p.paper_faithful &&
      p.eta * L * L * p.inner_radius * p.inner_radius > 0.5 * (1.0 + 1e-12)) {
    throw std::invalid_argument("sampler: paper-faithful mode requires eta L^2 R^2 <= 1/2");
  }
  return p;
}

double sample_y_radius(const SmoothPotential& f, double delta) {
  const double kappa = f.condition_number();
  const double d = static_cast<double>(f.dim());
  const double log_term = std::log(16.0 * kappa / delta);
  return std::sqrt(kappa * d * log_term) *
         concentration_radius(f.dim(), f.strong_convexity(), 16.0 * kappa / delta);
}

SampleYResult sample_y(const SmoothPotential& f, const Vector& x, double eta, double delta,
                       const Vector& x_star, Rng& rng, CallCounters* counters,
                       double fallback_constant) {
  require_dim(f.dim(), x.size(), "sample_y");
  require_dim(f.dim(), x_star.size(), "sample_y (x_star)");
  if (!(eta > 0.0) || !(eta * f.smoothness() < 1.0)) {
    throw std::invalid_argument("sample_y: need eta > 0 and eta * L < 1");
  }
  CallCounters local;
  CallCounters& c = counters ? *counters : local;
  const Vector grad = f.gradient(x);
  const double fx = f.value(x);
  ++c.gradient_calls;
  ++c.value_calls;
  YDraw draw = draw_y(f, x, fx, grad, eta, delta, x_star, fallback_constant, rng, c);
  return {std::move(draw.y), draw.iterations, draw.used_fallback};
}

double mala_log_acceptance(const PotentialFn& potential, const PotentialGradFn& gradient,
                           const Vector& from, const Vector& to, double step_size) {
  const double h2 = step_size * step_size;
  const Vector forward = to - from + 0.5 * h2 * gradient(from);
  const Vector backward = from - to + 0.5 * h2 * gradient(to);
  return potential(from) - potential(to) +
         (forward.squaredNorm() - backward.squaredNorm()) / (2.0 * h2);
}

MalaResult fallback_metropolized_chain(const PotentialFn& potential,
                                       const PotentialGradFn& gradient, const Vector& x0,
                                       long steps, double step_size, Rng& rng) {
  if (steps < 1) throw std::invalid_argument("fallback chain: steps must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("fallback chain: step size must be > 0");
  const double h2 = step_size * step_size;
  MalaResult out{x0, steps, 0};
  Vector& y = out.state;
  double u_y = potential(y);
  Vector grad_y = gradient(y);
  for (long s = 0; s < steps; ++s) {
    const Vector forward_noise = step_size * rng.normal_vector(y.size());
    Vector proposal = y - 0.5 * h2 * grad_y + forward_noise;
    const double u_p = potential(proposal);
    Vector grad_p = gradient(proposal);
    const Vector backward = y - proposal + 0.5 * h2 * grad_p;
    const double log_ratio =
        u_y - u_p + (forward_noise.squaredNorm() - backward.squaredNorm()) / (2.0 * h2);
    if (std::log(rng.uniform()) <= log_ratio) {
      y = std::move(proposal);
      u_y = u_p;
      grad_y = std::move(grad_p);
      ++out.accepted;
    }
  }
  return out;
}

JointDistChain::JointDistChain(SmoothPotential f, CompositePotential g, Vector x_star,
                               SamplerParams params, Rng& rng)
    : f_(std::move(f)),
      g_(std::move(g)),
      x_star_(std::move(x_star)),
      params_(params),
      anchor_lambda_(0.0) {
  require_dim(f_.dim(), g_.dim(), "JointDistChain (g)");
  require_dim(f_.dim(), x_star_.size(), "JointDistChain (x_star)");
  const double L = f_.smoothness();
  const double eta = params_.eta;
  anchor_lambda_ = 1.0 / (eta * L * L);
  x_ = g_.sample(GaussianFactor(1.0 / (L + eta * L * L), x_star_), rng);
  ++counters_.oracle_calls;
  y_ = x_;
}

void JointDistChain::set_state(Vector x) {
  require_dim(f_.dim(), x.size(), "JointDistChain::set_state");
  x_ = std::move(x);
}

void JointDistChain::step(Rng& rng) {
  const Vector grad = f_.gradient(x_);
  const double fx = f_.value(x_);
  ++counters_.gradient_calls;
  ++counters_.value_calls;
  YDraw draw = draw_y(f_, x_, fx, grad, params_.eta, params_.sample_y_delta, x_star_,
                      params_.fallback_constant, rng, counters_);
  sample_y_iterations_ += draw.iterations;
  if (draw.used_fallback) ++fallback_calls_;
  y_ = std::move(draw.y);
  const GaussianFactor factor =
      fold_factors(GaussianFactor(params_.eta, y_), GaussianFactor(anchor_lambda_, x_star_));
  x_ = g_.sample(factor, rng);
  ++counters_.oracle_calls;
}

ChainTrace sample_joint_dist(const SmoothPotential& f, const CompositePotential& g,
                             const Vector& x_star, const SamplerParams& params, Rng& rng,
                             TraceRecording recording) {
  const auto started = std::chrono::steady_clock::now();
  const Index d = f.dim();
  const long K = params.iterations;
  if (K < 1) throw std::invalid_argument("sample_joint_dist: K must be >= 1");

  ChainTrace trace;
  trace.seed = rng.seed();
  trace.params = params;
  JointDistChain chain(f, g, x_star, params, rng);
  trace.start = chain.state();

  const bool keep_all = recording != TraceRecording::kFinalOnly;
  trace.iterates.resize(keep_all ? K : 1, d);
  if (recording == TraceRecording::kFull) trace.y_iterates.resize(K, d);
  for (long k = 0; k < K; ++k) {
    chain.step(rng);
    if (keep_all) trace.iterates.row(k) = chain.state().transpose();
    if (recording == TraceRecording::kFull) trace.y_iterates.row(k) = chain.last_y().transpose();
  }
  if (!keep_all) trace.iterates.row(0) = chain.state().transpose();

  trace.gradient_calls = chain.counters().gradient_calls;
  trace.oracle_calls = chain.counters().oracle_calls;
  trace.sample_y_iterations = chain.sample_y_iterations();
  trace.fallback_calls = chain.fallback_calls();
  trace.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - started)
                      .count();
  return trace;
}

double log_theta_hat(const SmoothPotential& f, const Vector& x, const Vector& x_star,
                     double eta, const Vector& y) {
  const double L = f.smoothness();
  const double d = static_cast<double>(f.dim());
  const Vector grad = f.gradient(x);
  const Vector step = y - x;
  // f(y) - f(x) - <grad, y - x> - (L/2)||y - x||^2 <= 0 by smoothness.
  const double smooth_gap = f.value(y) - f.value(x) - grad.dot(step) - 0.5 * L * step.squaredNorm();
  return 0.5 * d * std::log1p(eta * L) + smooth_gap -
         eta * grad.squaredNorm() / (2.0 * (1.0 + eta * L)) +
         0.5 * eta * L * L * (x - x_star).squaredNorm();
}

Vector composite_sample_shared_min(const SmoothPotential& f, const CompositePotential& g,
                                   const Vector& x_star, const SamplerParams& params, Rng& rng,
                                   OuterStats* stats) {
  OuterStats local;
  OuterStats& s = stats ? *stats : local;
  const double log_bound = std::log(kOuterAcceptanceBound);

  for (long loop = 0; loop < kMaxOuterLoops; ++loop) {
    ++s.outer_loops;
    ChainTrace trace = sample_joint_dist(f, g, x_star, params, rng, TraceRecording::kFinalOnly);
    s.joint_iterations += params.iterations;
    s.gradient_calls += trace.gradient_calls;
    s.oracle_calls += trace.oracle_calls;
    Vector x = trace.final_state();
    if ((x - x_star).norm() > params.omega_radius) {
      ++s.outside_omega;
      continue;
    }

    CallCounters counters;
    const SampleYResult y = sample_y(f, x, params.eta, params.delta, x_star, rng, &counters,
                                     params.fallback_constant);
    s.gradient_calls += counters.gradient_calls + 1;
    const double log_theta = log_theta_hat(f, x, x_star, params.eta, y.y);
    ++s.theta_evaluations;
    s.max_log_theta = std::max(s.max_log_theta, log_theta);
    if (log_theta > log_bound + 1e-12) {
      ++s.theta_bound_exceeded;
      if (params.enforce_theta_bound) {
        std::ostringstream msg;
        msg << "outer filter: theta_hat = exp(" << log_theta << ") exceeds "
            << kOuterAcceptanceBound << " inside the acceptance region; eta or L is mis-set";
        throw InvariantViolation(msg.str());
      }
    }
    if (std::log(rng.uniform()) <= log_theta - log_bound) {
      ++s.samples;
      return x;
    }
  }
  throw std::runtime_error("composite sampler: outer loop limit reached without acceptance");
}

namespace {

CompositeTarget shared_minimizer_form(CompositeTarget target) {
  const Vector& x_star = ensure_minimizer(target);
  const Vector c = target.f.gradient(x_star);
  if (c.isZero(0.0)) return target;
  return shift_linear(target, c);
}

}  // namespace

CompositeSampler::CompositeSampler(CompositeTarget target, double epsilon,
                                   const SamplerOptions& options)
    : shifted_(shared_minimizer_form(std::move(target))),
      params_(make_sampler_params(shifted_.f, epsilon, options)) {}

Vector CompositeSampler::sample(Rng& rng) {
  return composite_sample_shared_min(shifted_.f, shifted_.g, *shifted_.x_star, params_, rng,
                                     &stats_);
}

Vector composite_sample(const CompositeTarget& target, double epsilon, Rng& rng,
                        const SamplerOptions& options) {
  CompositeSampler sampler(target, epsilon, options);
  return sampler.sample(rng);
}

}  // namespace compsamp
