#include "gic/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gic {
namespace {

SweepResult run_one(const Scenario& scenario, const RunOptions& options) {
  SweepResult r;
  try {
    r.trace = run_scenario(scenario, options);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<SweepResult> run_sweep(const std::vector<Scenario>& scenarios, Execution execution,
                                   const RunOptions& options) {
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
  std::vector<SweepResult> out(scenarios.size());
  if (execution == Execution::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = run_one(scenarios[i], options);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = run_one(scenarios[i], options);
  return out;
}

int sweep_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gic
