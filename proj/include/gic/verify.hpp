#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gic/simulation.hpp"

namespace gic {

struct CheckResult {
  std::string name;
  double value = 0.0;      // worst observed residual
  double tolerance = 0.0;  // passes when value < tolerance
  std::string detail;
  [[nodiscard]] bool passed() const { return value < tolerance; }
};

struct VerifyOptions {
  int samples = 200;
  std::uint32_t seed = 7;
  bool simulate = true;     // include the closed-loop Lyapunov checks
  double sim_duration = 1.0;  // s per closed-loop check
};

/// Invariant and identity suite over random samples on `model`.
std::vector<CheckResult> run_verify_suite(const RobotModel& model, const VerifyOptions& options = {});

}  // namespace gic
