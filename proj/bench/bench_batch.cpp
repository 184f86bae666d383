// Serial reference vs OpenMP kernels on a seed sweep of the replay fixture.

#include <benchmark/benchmark.h>

#include "etmas/batch.hpp"
#include "etmas/fixtures.hpp"

namespace {

std::vector<etmas::Scenario> sweep(std::size_t count) {
  return etmas::seed_sweep(etmas::load_fixture("sec5a_replay").scenario, 0, count);
}

void BM_BatchSerial(benchmark::State& state) {
  const auto scenarios = sweep(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(etmas::run_batch_serial(scenarios));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto scenarios = sweep(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(etmas::run_batch_parallel(scenarios));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DisagreementSerial(benchmark::State& state) {
  const auto tr = etmas::simulate(etmas::load_fixture("example1_cut").scenario);
  for (auto _ : state) benchmark::DoNotOptimize(etmas::disagreement_series_serial(tr));
}

void BM_DisagreementParallel(benchmark::State& state) {
  const auto tr = etmas::simulate(etmas::load_fixture("example1_cut").scenario);
  for (auto _ : state) benchmark::DoNotOptimize(etmas::disagreement_series_parallel(tr));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DisagreementSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DisagreementParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
