#include <benchmark/benchmark.h>

#include "netbound/channels.hpp"
#include "netbound/emax.hpp"
#include "netbound/sweep.hpp"

using namespace netbound;

namespace {

const sweep::SweepSpec kSpec{{1, 2, 5, 10}, 101};

void BM_SweepSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep::run_sweep_serial(kSpec));
}

void BM_SweepParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep::run_sweep(kSpec));
}

emax::StateObjective ad_dmax() {
  const auto pi = channels::choi(channels::make_channel(channels::ChannelKind::AmplitudeDamping, 0.35)).matrix();
  return [pi](const HermitianMatrix& s) { return dmax(pi, s); };
}

void BM_ReducedSerial(benchmark::State& state) {
  const auto f = ad_dmax();
  for (auto _ : state)
    benchmark::DoNotOptimize(emax::minimize_phase_covariant_serial(f, emax::ReducedVariant::Lower));
}

void BM_ReducedParallel(benchmark::State& state) {
  const auto f = ad_dmax();
  for (auto _ : state)
    benchmark::DoNotOptimize(emax::minimize_phase_covariant(f, emax::ReducedVariant::Lower));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReducedSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReducedParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
