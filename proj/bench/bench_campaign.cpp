// Serial reference vs OpenMP campaign kernels. On a single core the parallel
// path should match the serial one up to scheduling overhead.

#include <benchmark/benchmark.h>

#include "tmm/funcalc.hpp"
#include "tmm/inequality.hpp"
#include "tmm/random.hpp"
#include "tmm/xi.hpp"

using namespace tmm;

namespace {

CampaignSpec spec(std::size_t trials, int n_max, int workers) {
  CampaignSpec s;
  s.trials = trials;
  s.n_min = 1;
  s.n_max = n_max;
  s.interval = {-1.0, 1.0};
  s.workers = workers;
  return s;
}

void BM_TraceMinmaxSerial(benchmark::State& state) {
  const ScalarFunction f = fn::neg_log_one_minus(0.6);
  const auto s = spec(static_cast<std::size_t>(state.range(0)), 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign_serial(InequalityKind::TraceMinmax, &f, s).stats.min);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TraceMinmaxParallel(benchmark::State& state) {
  const ScalarFunction f = fn::neg_log_one_minus(0.6);
  const auto s = spec(static_cast<std::size_t>(state.range(0)), 8, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign(InequalityKind::TraceMinmax, &f, s).stats.min);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetLinearParallel(benchmark::State& state) {
  const auto s = spec(static_cast<std::size_t>(state.range(0)), 8, 0);
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign(InequalityKind::DetLinear, nullptr, s).stats.min);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Frechet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const HermitianMatrix x = random_hermitian(n, rng);
  const HermitianMatrix h = random_hermitian(n, rng);
  const ScalarFunction f = fn::exp();
  for (auto _ : state) benchmark::DoNotOptimize(frechet(f, x, h).trace());
}

void BM_XiDerivative(benchmark::State& state) {
  static const XiEvaluator e;
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(e.derivative(3.0, k).value);
}

}  // namespace

BENCHMARK(BM_TraceMinmaxSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceMinmaxParallel)->Args({1000, 1})->Args({1000, 2})->Args({1000, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetLinearParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Frechet)->Arg(2)->Arg(8)->Arg(32);
BENCHMARK(BM_XiDerivative)->Arg(0)->Arg(12);

BENCHMARK_MAIN();
