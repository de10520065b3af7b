// Serial vs OpenMP controller sweep on the bundled scenarios.

#include <benchmark/benchmark.h>

#include "gic/cli_io.hpp"
#include "gic/sweep.hpp"

using namespace gic;

namespace {

std::vector<Scenario> sweep_runs(double duration) {
  std::vector<Scenario> runs;
  for (const char* name : {"regulation", "tracking"}) {
    for (ControllerKind k : {ControllerKind::Gic1, ControllerKind::Intuitive, ControllerKind::Benchmark,
                             ControllerKind::Pd}) {
      Scenario s = load_scenario(resolve_scenario_path(name));
      s.controller = k;
      s.duration = duration;
      runs.push_back(s);
    }
  }
  return runs;
}

void BM_Sweep(benchmark::State& state, Execution execution) {
  const auto runs = sweep_runs(static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) {
    auto results = run_sweep(runs, execution);
    benchmark::DoNotOptimize(results);
  }
  state.counters["runs"] = static_cast<double>(runs.size());
  state.counters["threads"] = execution == Execution::Parallel ? sweep_threads() : 1;
}

void BM_ClosedLoopRate(benchmark::State& state) {
  const Scenario s = load_scenario(resolve_scenario_path("tracking"));
  for (auto _ : state) benchmark::DoNotOptimize(closed_loop_rate(s, 0, 0.1, s.initial));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sweep, serial, Execution::Serial)->Arg(250)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Sweep, parallel, Execution::Parallel)->Arg(250)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClosedLoopRate)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
