#include <benchmark/benchmark.h>

#include <cmath>

#include "qli/keyrate.hpp"
#include "qli/monte_carlo.hpp"
#include "qli/optimize.hpp"
#include "qli/scenario.hpp"
#include "qli/timing.hpp"

using namespace qli;

static void BM_SpreadAndWindow(benchmark::State& state) {
  const FramePlan plan;
  const NoiseProfile pattern = carve_pattern(plan);
  double w = 0.0;
  for (auto _ : state) {
    w = std::fmod(w + 0.37, 45.0);
    benchmark::DoNotOptimize(in_window_fraction(spread_profile(pattern, w), plan));
  }
}
BENCHMARK(BM_SpreadAndWindow);

static void BM_KeyRate(benchmark::State& state) {
  KeyRateInput in;
  in.classes = detected_gain_qber(in.decoy, SystemSpec{}, DetectorSpec{}, 0.19, 6e-6);
  for (auto _ : state) benchmark::DoNotOptimize(skr(in));
}
BENCHMARK(BM_KeyRate);

static void BM_RunScenarioAnalytic(benchmark::State& state) {
  Scenario s;
  for (int ch : {35, 36, 37, 38, 40, 41, 42, 43}) {
    s.channels.classical.push_back({ItuChannel(ch), Power::from_dbm(9.0)});
  }
  s.path.fiber.length_km = 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(s, 1));
}
BENCHMARK(BM_RunScenarioAnalytic);

static void BM_MonteCarlo(benchmark::State& state) {
  MonteCarloInput in;
  in.eta_ch = std::pow(10.0, -0.7);
  const auto pulses = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_pulses(in, pulses, 1, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

static void BM_OptimizeCoarse(benchmark::State& state) {
  const ChannelParams ch{std::pow(10.0, -0.7), 6e-6, SystemSpec{}, DetectorSpec{}};
  IntensityBounds b;
  b.points_per_axis = 10;
  b.refinements = 0;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_intensities(ch, b, 1));
}
BENCHMARK(BM_OptimizeCoarse)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
