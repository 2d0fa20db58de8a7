#include <benchmark/benchmark.h>

#include "qreading/reading.hpp"

namespace {

using namespace qreading;

void BM_ChiEpr(benchmark::State& state) {
  const PureLossCell cell(0.2, 0.9);
  const Transmitter t = Transmitter::epr(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(transmitter_chi(cell, t));
}
BENCHMARK(BM_ChiEpr)->Arg(1)->Arg(2);

void BM_ChiNoon(benchmark::State& state) {
  const PureLossCell cell(0.2, 0.9);
  const Transmitter t = Transmitter::noon(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transmitter_chi(cell, t));
}
BENCHMARK(BM_ChiNoon)->Arg(1)->Arg(5);

void BM_ChiSqueezedCoherent(benchmark::State& state) {
  const PureLossCell cell(0.0, 0.5);
  const Transmitter t = Transmitter::squeezed_coherent(1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(transmitter_chi(cell, t));
}
BENCHMARK(BM_ChiSqueezedCoherent);

void BM_ClosedFormCapacity(benchmark::State& state) {
  const PureLossCell cell(0.2, 0.9);
  double n = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classical_reading_capacity(cell, n));
    n = n < 50.0 ? n + 0.5 : 1.0;
  }
}
BENCHMARK(BM_ClosedFormCapacity);

}  // namespace
