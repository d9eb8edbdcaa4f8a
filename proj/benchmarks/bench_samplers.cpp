#include <cmath>
#include <limits>

#include <benchmark/benchmark.h>

#include "compsamp/baselines.hpp"
#include "compsamp/experiments.hpp"
#include "compsamp/sampler.hpp"
#include "compsamp/truncated_normal.hpp"

namespace {

using namespace compsamp;

void BM_TruncNormalCentral(benchmark::State& state) {
  Rng rng(1);
  const TruncSpec spec{0.0, 1.0, -0.5, 1.5};
  for (auto _ : state) benchmark::DoNotOptimize(sample_trunc_normal_1d(spec, rng));
}
BENCHMARK(BM_TruncNormalCentral);

void BM_TruncNormalTail(benchmark::State& state) {
  Rng rng(2);
  const TruncSpec spec{0.0, 1.0, static_cast<double>(state.range(0)),
                       std::numeric_limits<double>::infinity()};
  for (auto _ : state) benchmark::DoNotOptimize(sample_trunc_normal_1d(spec, rng));
}
BENCHMARK(BM_TruncNormalTail)->Arg(5)->Arg(8)->Arg(30);

void BM_OrthantOracle(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(3);
  const OrthantSpec orthant = OrthantSpec::positive(d);
  const Vector v = rng.normal_vector(d);
  for (auto _ : state) benchmark::DoNotOptimize(rgo_orthant(0.1, v, orthant, rng));
}
BENCHMARK(BM_OrthantOracle)->Arg(10)->Arg(100);

void BM_SampleY(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(4);
  GaussianTestTarget t = random_gaussian_target(d, 10.0, 5.0, 0.0, rng);
  const SamplerParams p = make_sampler_params(t.composite.f, 0.1);
  const Vector x_star = Vector::Zero(d);
  const Vector x = 0.1 * rng.normal_vector(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_y(t.composite.f, x, p.eta, p.delta, x_star, rng));
  }
}
BENCHMARK(BM_SampleY)->Arg(10)->Arg(50);

void BM_JointChainStep(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(5);
  GaussianTestTarget t = random_gaussian_target(d, 10.0, 5.0, 0.0, rng);
  SamplerOptions options;
  options.eta = 0.3 / static_cast<double>(d);
  options.iterations = 1;
  const SamplerParams p = make_sampler_params(t.composite.f, 0.1, options);
  JointDistChain chain(t.composite.f, t.composite.g, Vector::Zero(d), p, rng);
  for (auto _ : state) chain.step(rng);
}
BENCHMARK(BM_JointChainStep)->Arg(10)->Arg(40)->Arg(100);

void BM_HitAndRunStep(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(6);
  GaussianTestTarget t = random_gaussian_target(d, 10.0, 5.0, 0.0, rng);
  Vector x = hit_and_run_start(t.gaussian);
  for (auto _ : state) x = hit_and_run_step(t.gaussian, x, rng);
}
BENCHMARK(BM_HitAndRunStep)->Arg(10)->Arg(40)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
