#include "compsamp/truncated_normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

namespace compsamp {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxTailRounds = 100000;
// Intervals with (b - a) * max(1, |a|, |b|) below this use uniform-proposal rejection.
constexpr double kNarrowScale = 1e-3;

std::string describe(const TruncSpec& s) {
  std::ostringstream out;
  out.precision(17);
  out << "N(" << s.mean << ", " << s.sd << "^2) on [" << s.lo << ", " << s.hi << "]";
  return out.str();
}

// Standard normal restricted to [a, b] with a >= kTailCrossover. The proposal is
// a + Exp(alpha) truncated to [0, b - a], sampled exactly by inversion.
double standard_tail(double a, double b, Rng& rng, int* rounds) {
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  const double width = b - a;
  const double mass = std::isinf(width) ? 1.0 : -std::expm1(-alpha * width);
  for (int round = 1; round <= kMaxTailRounds; ++round) {
    const double z = a - std::log1p(-rng.uniform() * mass) / alpha;
    const double gap = z - alpha;
    if (rng.uniform() <= std::exp(-0.5 * gap * gap)) {
      if (rounds) *rounds = round;
      return std::min(z, b);
    }
  }
  throw std::runtime_error("truncated normal tail sampler did not accept");
}

// Uniform proposal on [a, b] accepted with probability exp(-(z^2 - m^2) / 2), m being
// the point of [a, b] closest to zero. Exact for any finite interval; used when the
// interval is so short that CDF differences lose all precision.
double standard_narrow(double a, double b, Rng& rng, int* rounds) {
  const double m = a > 0.0 ? a : (b < 0.0 ? b : 0.0);
  for (int round = 1; round <= kMaxTailRounds; ++round) {
    const double z = a + rng.uniform() * (b - a);
    if (rng.uniform() <= std::exp(-0.5 * (z - m) * (z + m))) {
      if (rounds) *rounds = round;
      return std::clamp(z, a, b);
    }
  }
  throw std::runtime_error("truncated normal narrow-interval sampler did not accept");
}

// Inverse-CDF draw of a standard normal on [a, b], working in whichever tail keeps
// the probabilities away from 1.
double standard_central(double a, double b, Rng& rng) {
  const double u = rng.uniform();
  if (a >= 0.0) {
    const double qa = normal_cdf(-a);
    const double qb = normal_cdf(-b);
    const double q = qa - u * (qa - qb);
    if (!(qa > qb)) return std::nan("");
    return -normal_quantile(q);
  }
  if (b <= 0.0) {
    const double pa = normal_cdf(a);
    const double pb = normal_cdf(b);
    if (!(pb > pa)) return std::nan("");
    return normal_quantile(pa + u * (pb - pa));
  }
  const double pa = normal_cdf(a);
  const double mass = normal_cdf(b) - pa;
  const double p = pa + u * mass;
  if (p > 0.5) {
    // 1 - p computed from the upper end to keep precision when b is large.
    const double q = normal_cdf(-a) - u * mass;
    return -normal_quantile(q);
  }
  return normal_quantile(p);
}

}  // namespace

void TruncSpec::validate() const {
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw std::invalid_argument("TruncSpec: sd must be finite and positive");
  }
  if (!std::isfinite(mean)) throw std::invalid_argument("TruncSpec: mean must be finite");
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw std::invalid_argument("TruncSpec: need lo < hi, got " + describe(*this));
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_quantile(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_normal_cdf(double z) {
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z * kInvSqrt2));
  if (z > -35.0) return std::log(0.5 * std::erfc(-z * kInvSqrt2));
  if (std::isinf(z)) return -kInf;
  // Asymptotic (Mills ratio) series; the next term is below 1e-12 relative here.
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

double log_normal_interval(double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("log_normal_interval: need a <= b");
  if (a >= 0.0) {
    const double upper = log_normal_cdf(-a);
    return upper + std::log1p(-std::exp(log_normal_cdf(-b) - upper));
  }
  if (b <= 0.0) {
    const double upper = log_normal_cdf(b);
    return upper + std::log1p(-std::exp(log_normal_cdf(a) - upper));
  }
  return std::log1p(-normal_cdf(a) - normal_cdf(-b));
}

double sample_trunc_normal_1d(const TruncSpec& spec, Rng& rng, int* rejection_rounds) {
  spec.validate();
  const double a = (spec.lo - spec.mean) / spec.sd;
  const double b = (spec.hi - spec.mean) / spec.sd;
  if (rejection_rounds) *rejection_rounds = 1;
  if (std::isinf(a) && std::isinf(b)) return spec.mean + spec.sd * rng.normal();

  double z;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (a < b && (b - a) * scale < kNarrowScale) {
    z = standard_narrow(a, b, rng, rejection_rounds);
  } else if (a >= kTailCrossover || b <= -kTailCrossover) {
    if (!(a < b) || !std::isfinite(log_normal_interval(a, b))) {
      throw TruncationUnderflow("truncated normal interval has no representable mass: " +
                                describe(spec));
    }
    z = a >= kTailCrossover ? standard_tail(a, b, rng, rejection_rounds)
                            : -standard_tail(-b, -a, rng, rejection_rounds);
  } else {
    z = a < b ? standard_central(a, b, rng) : std::nan("");
    if (std::isnan(z)) {
      throw TruncationUnderflow("truncated normal CDF mass underflows: " + describe(spec));
    }
  }
  // Rounding in the quantile may step a hair outside; support membership is exact.
  return std::clamp(spec.mean + spec.sd * z, spec.lo, spec.hi);
}

}  // namespace compsamp
