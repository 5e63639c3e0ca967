#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "fairddp/disparity.hpp"
#include "fairddp/fairclf.hpp"
#include "fairddp/harness.hpp"
#include "fairddp/lpreg.hpp"
#include "fairddp/rng.hpp"
#include "fairddp/synth.hpp"
#include "fairddp/types.hpp"

using namespace fairddp;

namespace {

SyntheticParams default_params() { return SyntheticParams{}; }

// Kernel regression is the dominant cost of a trial: n_q queries against
// n_a training points.
static void BM_LpregEvaluate(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Dataset data = sample_synthetic(default_params(), 2 * n, 42);
  const GroupPair groups = split_by_group(data);
  const double h = default_bandwidth(1.0, groups.g1.n_a, 1.0, 2);
  const LocalPolyEstimator est(groups.g1, h, 0);

  std::vector<double> out;
  for (auto _ : state) {
    est.evaluate_rows(groups.g1.xs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(groups.g1.n_a * groups.g1.n_a));
}

static void BM_DisparityCurve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  SplitMix64 gen(7);
  std::vector<double> eta1(n), eta0(n);
  for (double& v : eta1) v = gen.next_u01();
  for (double& v : eta0) v = gen.next_u01();

  for (auto _ : state) {
    DisparityCurve curve(eta1, eta0, 0.05, 0.05);
    benchmark::DoNotOptimize(curve.infimum_below(0.1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(2 * n));
}

static void BM_SolveTStar(benchmark::State& state) {
  const SyntheticParams p = default_params();
  for (auto _ : state) {
    const OracleSolution sol = solve_t_star(p, 0.1);
    benchmark::DoNotOptimize(sol.t_star);
  }
}

static void BM_SampleSynthetic(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const SyntheticParams p = default_params();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const Dataset d = sample_synthetic(p, n, seed++);
    benchmark::DoNotOptimize(d.size());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

// Full pipeline at a fixed bandwidth pair (no grid search).
static void BM_FitFixedBandwidth(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const SyntheticParams p = default_params();
  const Dataset train = sample_synthetic(p, n, 99);
  const GroupPair groups = split_by_group(train);

  HyperParams hp;
  hp.delta = 0.0;
  hp.beta = 1.0;
  hp.degree = 0;
  hp.delta_n = delta_n_schedule(n);
  hp.r_n = r_n_schedule(n);
  hp.l1 = offset_schedule(0.25, groups.g1.n_a, 1.0, 2);
  hp.l0 = offset_schedule(0.25, groups.g0.n_a, 1.0, 2);

  for (auto _ : state) {
    const FittedFairBayes model = fit(train, hp, 1.0, 1.0);
    benchmark::DoNotOptimize(model.step2());
  }
}

}  // namespace

BENCHMARK(BM_LpregEvaluate)->Arg(200)->Arg(800)->Arg(3200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DisparityCurve)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SolveTStar)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleSynthetic)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FitFixedBandwidth)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
