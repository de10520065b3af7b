#pragma once

#include <string>
#include <vector>

#include "gic/simulation.hpp"

namespace gic {

enum class Execution { Serial, Parallel };

/// Outcome of one run in a sweep; `error` is set instead of `trace` when the run aborted.
struct SweepResult {
  Trace trace;
  std::string error;
  [[nodiscard]] bool ok() const { return error.empty(); }
};

/// Runs independent scenarios. Results keep the input order; the parallel path
/// (OpenMP) produces bit-identical traces to the serial one.
std::vector<SweepResult> run_sweep(const std::vector<Scenario>& scenarios,
                                   Execution execution = Execution::Parallel,
                                   const RunOptions& options = {});

/// Threads the parallel path would use (1 without OpenMP).
int sweep_threads();

}  // namespace gic
