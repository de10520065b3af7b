#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gic/controllers.hpp"

namespace gic {

// ---------------------------------------------------------------------------
// Desired trajectories

struct Waypoint {
  double t_start = 0.0;  // s
  Pose gd;
};

/// Piecewise-constant set points; desired velocity and acceleration are zero.
struct RegulationWaypoints {
  std::vector<Waypoint> waypoints;  // t_start strictly increasing, first at 0
};

/// p(t) = offset + cos_amp cos(omega t) + sin_amp sin(omega t).
struct SinusoidAxis {
  double offset = 0.0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
  double omega = 0.0;  // rad/s
};

/// Position follows a per-axis sinusoid, orientation is held at R0.
struct SinusoidTrack {
  std::array<SinusoidAxis, 3> axes;
  Mat3 R0 = Mat3::Identity();
};

using Trajectory = std::variant<RegulationWaypoints, SinusoidTrack>;

void validate(const Trajectory& trajectory);

/// Index of the continuous piece containing t (waypoint segment; 0 for sinusoids).
int trajectory_piece(const Trajectory& trajectory, double t);
/// Start times of pieces after the first.
std::vector<double> trajectory_breakpoints(const Trajectory& trajectory);

/// gd(t) with body-frame Vd_b = gd^-1 gd_dot and its derivative.
/// Throws std::out_of_range for negative or non-finite t.
DesiredState desired_state_at(const Trajectory& trajectory, double t);
/// Evaluates piece `piece` at t, also outside its nominal interval.
DesiredState desired_state_in_piece(const Trajectory& trajectory, int piece, double t);

// ---------------------------------------------------------------------------
// Scenarios

struct Scenario {
  std::string name;
  RobotModel robot;
  ControllerKind controller = ControllerKind::Gic1;
  Gains gains;
  double duration = 0.0;  // s
  double dt = 1e-3;       // s
  JointState initial;
  Trajectory trajectory;
  Wrench external_wrench = Wrench::Zero();  // body frame, mapped through J_b^T

  void validate() const;
  [[nodiscard]] bool is_tracking() const {
    return std::holds_alternative<SinusoidTrack>(trajectory);
  }
};

/// Multi-point regulation: five 3 s set points alternating two orientations.
Scenario regulation_scenario(RobotModel robot, ControllerKind controller = ControllerKind::Gic1);
/// Sinusoidal tracking at constant orientation over 8 s.
Scenario tracking_scenario(RobotModel robot, ControllerKind controller = ControllerKind::Gic1,
                           double lambda_g = 0.0);

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t step, const std::string& what);
  std::size_t step;
};

// ---------------------------------------------------------------------------
// Integration

/// Closed-loop state derivative: joint accelerations and the applied torque.
struct ClosedLoopRate {
  VecX qdd;
  VecX tau;
  ControlOutput control;
};
ClosedLoopRate closed_loop_rate(const Scenario& scenario, int piece, double t,
                                const JointState& state);

/// Time derivative of (q, qdot).
struct StateRate {
  VecX qdot;
  VecX qdd;
};

/// Classical RK4 step of (q, qdot) for rate(t, x) -> StateRate.
template <class Rate>
JointState rk4(const Rate& rate, const JointState& x, double t, double dt) {
  const auto advance = [&](const StateRate& k, double h) {
    return JointState{x.q + h * k.qdot, x.qdot + h * k.qdd};
  };
  const StateRate k1 = rate(t, x);
  const StateRate k2 = rate(t + 0.5 * dt, advance(k1, 0.5 * dt));
  const StateRate k3 = rate(t + 0.5 * dt, advance(k2, 0.5 * dt));
  const StateRate k4 = rate(t + dt, advance(k3, dt));
  return {x.q + (dt / 6.0) * (k1.qdot + 2.0 * k2.qdot + 2.0 * k3.qdot + k4.qdot),
          x.qdot + (dt / 6.0) * (k1.qdd + 2.0 * k2.qdd + 2.0 * k3.qdd + k4.qdd)};
}

/// One classical RK4 step of (q, qdot); every stage re-evaluates the controller
/// against trajectory piece `piece`.
JointState rk4_step(const Scenario& scenario, int piece, const JointState& state, double t,
                    double dt);
/// Same, with the piece taken at t.
JointState rk4_step(const Scenario& scenario, const JointState& state, double t, double dt);

// ---------------------------------------------------------------------------
// Traces and monitors

/// Energy-like monitors at one state:
/// V = 1/2 e_V^T Mt e_V + P and W = 1/2 ebar^T Mt ebar + P with ebar = e_V + lambda_g f_g.
struct LyapunovMonitors {
  double Psi = 0.0;
  double Phi = 0.0;
  double P = 0.0;
  double K = 0.0;
  double V = 0.0;
  double W = 0.0;
  double decay_V = 0.0;  // e_V^T Kd e_V
  double decay_W = 0.0;  // ebar^T Kd ebar + lambda_g |f_g|^2
  Vec6 e_g = Vec6::Zero();
  Twist e_V = Twist::Zero();
  Wrench f_g = Wrench::Zero();
  Pose g;
  DesiredState des;
};
LyapunovMonitors lyapunov_monitors(const Scenario& scenario, int piece, double t,
                                   const JointState& state);

struct TraceRecord {
  double t = 0.0;
  int piece = 0;
  VecX q;
  VecX qdot;
  Vec3 p = Vec3::Zero();
  Eigen::Vector4d quat_wxyz = Eigen::Vector4d(1, 0, 0, 0);
  Vec3 p_d = Vec3::Zero();
  double Psi = 0.0;
  double Phi = 0.0;
  double P = 0.0;
  double K = 0.0;
  double V = 0.0;
  double W = 0.0;
  double decay_V = 0.0;
  double decay_W = 0.0;
  Vec6 e_g = Vec6::Zero();
  Twist e_V = Twist::Zero();
  Wrench f_g = Wrench::Zero();
  VecX tau;
  /// dV/dt and dW/dt by finite differences along the closed-loop flow, when probed.
  std::optional<double> V_rate;
  std::optional<double> W_rate;
};

struct TraceSummary {
  Vec3 rms_position = Vec3::Zero();  // RMS of p - pd per axis
  double rms_psi = 0.0;
  double rms_phi = 0.0;
};

struct Trace {
  std::string scenario;
  ControllerKind controller = ControllerKind::Gic1;
  bool tracking = false;
  int dof = 0;
  Gains gains;
  double dt = 0.0;
  std::vector<TraceRecord> records;
  TraceSummary summary;
};

struct RunOptions {
  /// Record V_rate / W_rate at every step (five extra closed-loop evaluations each).
  bool probe_rates = false;
  /// Step of the five-point rate stencil, s.
  double probe_step = 2e-5;
};

Trace run_scenario(const Scenario& scenario, const RunOptions& options = {});

double rms(std::span<const double> series);
TraceSummary summarize(const Trace& trace);

struct LyapunovResiduals {
  double max_V = 0.0;  // max |dV/dt + e_V^T Kd e_V|
  double max_W = 0.0;  // max |dW/dt + ebar^T Kd ebar + lambda_g |f_g|^2|
  std::size_t worst_V_step = 0;
  std::size_t worst_W_step = 0;
  std::size_t samples = 0;
};
/// Requires a trace recorded with probe_rates.
LyapunovResiduals lyapunov_residuals(const Trace& trace);

/// Largest V(t_{k+1}) - V(t_k) over consecutive records of one piece (and the same for W).
struct MonotonicityReport {
  double max_V_increase = 0.0;
  double max_W_increase = 0.0;
};
MonotonicityReport monotonicity(const Trace& trace);

}  // namespace gic
