// gic: run, compare and verify the geometric impedance controllers.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gic/cli_io.hpp"
#include "gic/sweep.hpp"
#include "gic/verify.hpp"

namespace fs = std::filesystem;
using namespace gic;

namespace {

void add_overrides(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scenario", cfg.scenario, "Scenario file or bundled name (regulation, tracking)");
  cmd->add_option("--dt", cfg.dt, "Integration step [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--duration", cfg.duration, "Simulated time [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--kp", cfg.kp, "Translational stiffness")->check(CLI::PositiveNumber);
  cmd->add_option("--ko", cfg.ko, "Rotational stiffness")->check(CLI::PositiveNumber);
  cmd->add_option("--kd", cfg.kd, "Damping")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda-g", cfg.lambda_g, "Reference-velocity gain of gic2")
      ->check(CLI::NonNegativeNumber);
}

const CLI::Validator kControllerNames =
    CLI::IsMember({"gic1", "gic2", "intuitive", "benchmark", "pd"});

Scenario prepare(const RunConfig& cfg, const std::string& controller) {
  Scenario s = load_scenario(resolve_scenario_path(cfg.scenario));
  if (!controller.empty()) s.controller = parse_controller(controller);
  apply_overrides(s, cfg);
  return s;
}

std::string default_csv(const Scenario& s) {
  return s.name + "_" + std::string(controller_name(s.controller)) + ".csv";
}

int cmd_run(const RunConfig& cfg) {
  const Scenario s = prepare(cfg, cfg.controllers.empty() ? "" : cfg.controllers.front());
  const Trace trace = run_scenario(s);
  const fs::path out = cfg.out ? *cfg.out : fs::path(default_csv(s));
  write_trace_csv(trace, out);
  std::cout << summary_table({trace});
  std::cout << "wrote " << trace.records.size() << " records to " << out.string() << '\n';
  return 0;
}

int cmd_compare(RunConfig cfg) {
  if (cfg.controllers.empty()) cfg.controllers = {"gic1", "benchmark"};
  std::vector<Scenario> runs;
  for (const auto& c : cfg.controllers) runs.push_back(prepare(cfg, c));
  const auto results = run_sweep(runs, Execution::Parallel);

  int status = 0;
  std::vector<Trace> traces;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      std::cerr << cfg.controllers[i] << ": " << results[i].error << '\n';
      status = 1;
      continue;
    }
    traces.push_back(results[i].trace);
    if (cfg.out) {
      fs::create_directories(*cfg.out);
      write_trace_csv(results[i].trace, *cfg.out / default_csv(runs[i]));
    }
  }
  if (!traces.empty()) std::cout << summary_table(traces);
  return status;
}

int cmd_verify(const std::string& model_name, const VerifyOptions& opts) {
  const RobotModel model = load_robot_model(resolve_model_path(model_name, fs::current_path()));
  int failed = 0;
  for (const auto& r : run_verify_suite(model, opts)) {
    std::printf("%s  %-34s %.3e (< %.0e)%s%s\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                r.value, r.tolerance, r.detail.empty() ? "" : "  ", r.detail.c_str());
    failed += r.passed() ? 0 : 1;
  }
  if (failed > 0) std::printf("%d check(s) failed\n", failed);
  return failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric impedance control on SE(3): simulate, compare and verify"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write its trace as CSV");
  add_overrides(run, run_cfg);
  std::string controller;
  run->add_option("--controller", controller, "Controller name")->check(kControllerNames);
  run->add_option("--out", run_cfg.out, "CSV output path");

  RunConfig cmp_cfg;
  auto* compare = app.add_subcommand("compare", "Run several controllers and print RMS metrics");
  add_overrides(compare, cmp_cfg);
  compare->add_option("--controller", cmp_cfg.controllers, "Controller name (repeatable)")
      ->check(kControllerNames)
      ->take_all();
  compare->add_option("--out", cmp_cfg.out, "Directory for per-controller CSV traces");

  std::string model = "ur5e_approx.json";
  VerifyOptions vopts;
  bool no_sim = false;
  auto* verify = app.add_subcommand("verify", "Run the invariant and identity suite");
  verify->add_option("--model", model, "Robot model file");
  verify->add_option("--samples", vopts.samples, "Random samples per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vopts.seed, "Sampler seed");
  verify->add_flag("--no-sim", no_sim, "Skip the closed-loop checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      if (!controller.empty()) run_cfg.controllers = {controller};
      return cmd_run(run_cfg);
    }
    if (compare->parsed()) return cmd_compare(cmp_cfg);
    vopts.simulate = !no_sim;
    return cmd_verify(model, vopts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
