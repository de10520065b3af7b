#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gic/dynamics.hpp"
#include "gic/geometry_errors.hpp"

namespace gic {

enum class ControllerKind { Gic1, Gic2, Intuitive, Benchmark, Pd };

/// Accepts "gic1" | "gic2" | "intuitive" | "benchmark" | "pd".
ControllerKind parse_controller(std::string_view name);
std::string_view controller_name(ControllerKind kind);

struct ControlDiagnostics {
  double Psi = 0.0;
  double P = 0.0;
  std::optional<double> K;  // 1/2 e_V^T Mt e_V, when the body-frame Mt was formed
  Vec6 e_g = Vec6::Zero();
  Twist e_V = Twist::Zero();
  Wrench f_g = Wrench::Zero();
};

/// tau = J^T wrench, with J the Jacobian of `frame`.
struct ControlOutput {
  VecX tau;
  Wrench wrench = Wrench::Zero();
  Frame frame = Frame::Body;
  ControlDiagnostics diagnostics;
};

/// Desired motion in spatial coordinates for the benchmark law:
/// Vd_s = [pd_dot; wd_s], Vd_s_dot = [pd_ddot; wd_s_dot].
struct DesiredSpatialState {
  Pose gd;
  Twist Vd_s = Twist::Zero();
  Twist Vd_s_dot = Twist::Zero();
};
DesiredSpatialState to_spatial(const DesiredState& des);

/// T = Mt Vd*_dot + Ct Vd* + Gt - f_g - Kd e_V.
ControlOutput gic1(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains);
ControlOutput gic1(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains, const JointDynamics& joint);

/// T = Mt Vbar_dot + Ct Vbar - f_g - Kd ebar_V + Gt with Vbar = Vd* - lambda_g f_g,
/// Vbar_dot = Vd*_dot - lambda_g B_K e_V, ebar_V = e_V + lambda_g f_g.
ControlOutput gic2(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains);
ControlOutput gic2(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains, const JointDynamics& joint);

/// gic1 with the spring Kg e_g in place of f_g.
ControlOutput intuitive_impedance(const RobotModel& model, const JointState& state,
                                  const DesiredState& des, const Gains& gains);
ControlOutput intuitive_impedance(const RobotModel& model, const JointState& state,
                                  const DesiredState& des, const Gains& gains,
                                  const JointDynamics& joint);

/// Conventional impedance law in base coordinates, with V^s = [p_dot; omega_s] = J_w qdot:
/// T^s = Mt^s Vd_dot + Ct^s V^s + Gt^s - Kg e_g^s - Kd e_V^s, tau = J_w^T T^s.
ControlOutput benchmark_spatial(const RobotModel& model, const JointState& state,
                                const DesiredSpatialState& des, const Gains& gains);
ControlOutput benchmark_spatial(const RobotModel& model, const JointState& state,
                                const DesiredSpatialState& des, const Gains& gains,
                                const JointDynamics& joint);

/// Model-free T = -Kg e_g - Kd e_V; never inverts the Jacobian, so it is the
/// fallback near singular configurations.
Wrench pd_wrench(const Pose& g, const Pose& gd, const Twist& Vb, const DesiredState& des,
                 const Gains& gains);
ControlOutput pd_fallback(const RobotModel& model, const JointState& state,
                          const DesiredState& des, const Gains& gains);

/// Dispatch by kind; the benchmark receives to_spatial(des).
ControlOutput compute_control(ControllerKind kind, const RobotModel& model,
                              const JointState& state, const DesiredState& des,
                              const Gains& gains, const JointDynamics& joint);
ControlOutput compute_control(ControllerKind kind, const RobotModel& model,
                              const JointState& state, const DesiredState& des,
                              const Gains& gains);

}  // namespace gic
