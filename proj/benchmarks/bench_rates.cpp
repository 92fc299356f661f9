#include <string>

#include <benchmark/benchmark.h>

#include "okd/montecarlo.hpp"
#include "okd/optimize.hpp"
#include "okd/rates.hpp"

namespace {

void BM_HbeDirectDetection(benchmark::State& state) {
  const double de = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(okd::h_b_given_e_dd(0.3, de).value);
  }
}
BENCHMARK(BM_HbeDirectDetection)->Arg(5)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_HbeHelstrom(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(okd::h_b_given_e_helstrom(0.3, 1.0).value);
  }
}
BENCHMARK(BM_HbeHelstrom)->Unit(benchmark::kMicrosecond);

void BM_HolevoChi(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(okd::holevo_chi(0.3, 0.95).value);
  }
}
BENCHMARK(BM_HolevoChi)->Unit(benchmark::kMicrosecond);

void BM_OptimalRate(benchmark::State& state) {
  const auto scenario = static_cast<okd::Scenario>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(okd::optimal_rate(scenario, 100.0).key_rate);
  }
  state.SetLabel(std::string(okd::to_string(scenario)));
}
BENCHMARK(BM_OptimalRate)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Accumulate(benchmark::State& state) {
  okd::SimConfig cfg;
  cfg.rounds = static_cast<std::uint64_t>(state.range(0));
  cfg.depths.delta_b = 0.4;
  cfg.depths.delta_e = 1.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(okd::accumulate(cfg, 1).total());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Accumulate)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
