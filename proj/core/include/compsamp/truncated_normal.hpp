#pragma once

#include <stdexcept>

#include "compsamp/rng.hpp"

namespace compsamp {

// N(mean, sd^2) conditioned on [lo, hi]. lo may be -inf and hi may be +inf.
struct TruncSpec {
  double mean;
  double sd;
  double lo;
  double hi;

  void validate() const;
};

// The conditioned interval carries no representable probability mass.
class TruncationUnderflow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Standardized intervals starting at least this many sd from the mean use the
// exponential-proposal tail sampler instead of the inverse CDF.
inline constexpr double kTailCrossover = 4.0;

double normal_cdf(double z);
// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);
// log Phi(z), accurate far into the lower tail.
double log_normal_cdf(double z);
// log(Phi(b) - Phi(a)) for a <= b, without cancellation in either tail.
double log_normal_interval(double a, double b);

// Exact draw from the truncated normal. Central intervals use the inverse CDF;
// intervals beyond kTailCrossover sd use Robert's shifted-exponential rejection, and
// very short intervals use a uniform proposal. If rejection_rounds is non-null it receives the number of proposals used (1 for the
// inverse-CDF branch). Throws TruncationUnderflow when the interval mass underflows.
double sample_trunc_normal_1d(const TruncSpec& spec, Rng& rng, int* rejection_rounds = nullptr);

}  // namespace compsamp
