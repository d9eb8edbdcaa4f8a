#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace compsamp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// SplitMix64 finalizer; used to derive independent per-chain seeds from one base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Seeded random stream. Each chain owns one; streams are never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on the open interval (0, 1), so log(uniform()) is always finite.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  Vector normal_vector(Index n) {
    Vector z(n);
    for (Index i = 0; i < n; ++i) z[i] = normal_(engine_);
    return z;
  }

  // Rate-parameterized exponential.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Uniformly distributed unit vector in R^n.
  Vector unit_vector(Index n);

  bool coin() { return (engine_() >> 63) != 0; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace compsamp
