#include "gic/controllers.hpp"

#include <stdexcept>

namespace gic {
namespace {

// Quantities shared by the body-frame laws.
struct BodyTerms {
  Pose g;
  Twist Vb;
  Twist V_star;
  Twist V_star_dot;
  Vec6 e_g;
  Twist e_V;
  Wrench f_g;
  TaskSpaceDynamics tsd;
};

BodyTerms body_terms(const RobotModel& model, const JointState& state, const DesiredState& des,
                     const Gains& gains, const JointDynamics& joint) {
  BodyTerms t;
  t.tsd = task_space_dynamics(model, state, joint, Frame::Body);
  t.g = forward_kinematics(model, state.q);
  t.Vb = t.tsd.J * state.qdot;
  t.V_star = desired_velocity_star(t.g, des);
  t.V_star_dot = desired_accel_star(t.g, t.Vb, des);
  t.e_g = position_error(t.g, des.gd);
  t.e_V = t.Vb - t.V_star;
  t.f_g = elastic_force(t.g, des.gd, gains);
  return t;
}

ControlOutput finish(const BodyTerms& t, const DesiredState& des, const Gains& gains,
                     const Wrench& wrench) {
  ControlOutput out;
  out.wrench = wrench;
  out.frame = Frame::Body;
  out.tau = t.tsd.J.transpose() * wrench;
  out.diagnostics.Psi = error_function(t.g, des.gd);
  out.diagnostics.P = potential(t.g, des.gd, gains);
  out.diagnostics.K = 0.5 * t.e_V.dot(t.tsd.Mt * t.e_V);
  out.diagnostics.e_g = t.e_g;
  out.diagnostics.e_V = t.e_V;
  out.diagnostics.f_g = t.f_g;
  return out;
}

}  // namespace

ControllerKind parse_controller(std::string_view name) {
  if (name == "gic1") return ControllerKind::Gic1;
  if (name == "gic2") return ControllerKind::Gic2;
  if (name == "intuitive") return ControllerKind::Intuitive;
  if (name == "benchmark") return ControllerKind::Benchmark;
  if (name == "pd") return ControllerKind::Pd;
  throw std::invalid_argument("unknown controller '" + std::string(name) +
                              "' (expected gic1, gic2, intuitive, benchmark or pd)");
}

std::string_view controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Gic1: return "gic1";
    case ControllerKind::Gic2: return "gic2";
    case ControllerKind::Intuitive: return "intuitive";
    case ControllerKind::Benchmark: return "benchmark";
    case ControllerKind::Pd: return "pd";
  }
  return "unknown";
}

DesiredSpatialState to_spatial(const DesiredState& des) {
  const Mat3& Rd = des.gd.R;
  const Vec3 vd = linear(des.Vd_b);
  const Vec3 wd = angular(des.Vd_b);
  DesiredSpatialState s;
  s.gd = des.gd;
  s.Vd_s = make_twist(Rd * vd, Rd * wd);
  s.Vd_s_dot = make_twist(Rd * (wd.cross(vd) + linear(des.Vd_b_dot)),
                          Rd * angular(des.Vd_b_dot));
  return s;
}

ControlOutput gic1(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains, const JointDynamics& joint) {
  const BodyTerms t = body_terms(model, state, des, gains, joint);
  const Wrench w = t.tsd.Mt * t.V_star_dot + t.tsd.Ct * t.V_star + t.tsd.Gt - t.f_g -
                   gains.Kd * t.e_V;
  return finish(t, des, gains, w);
}

ControlOutput gic1(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains) {
  return gic1(model, state, des, gains, joint_dynamics(model, state));
}

ControlOutput gic2(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains, const JointDynamics& joint) {
  const BodyTerms t = body_terms(model, state, des, gains, joint);
  const double lambda = gains.lambda_g;
  const Twist V_ref = t.V_star - lambda * t.f_g;
  const Twist V_ref_dot =
      t.V_star_dot - lambda * stiffness_jacobian(t.g, des.gd, gains) * t.e_V;
  const Twist e_ref = t.e_V + lambda * t.f_g;
  const Wrench w = t.tsd.Mt * V_ref_dot + t.tsd.Ct * V_ref - t.f_g - gains.Kd * e_ref + t.tsd.Gt;
  return finish(t, des, gains, w);
}

ControlOutput gic2(const RobotModel& model, const JointState& state, const DesiredState& des,
                   const Gains& gains) {
  return gic2(model, state, des, gains, joint_dynamics(model, state));
}

ControlOutput intuitive_impedance(const RobotModel& model, const JointState& state,
                                  const DesiredState& des, const Gains& gains,
                                  const JointDynamics& joint) {
  const BodyTerms t = body_terms(model, state, des, gains, joint);
  const Wrench w = t.tsd.Mt * t.V_star_dot + t.tsd.Ct * t.V_star + t.tsd.Gt -
                   gains.Kg() * t.e_g - gains.Kd * t.e_V;
  return finish(t, des, gains, w);
}

ControlOutput intuitive_impedance(const RobotModel& model, const JointState& state,
                                  const DesiredState& des, const Gains& gains) {
  return intuitive_impedance(model, state, des, gains, joint_dynamics(model, state));
}

ControlOutput benchmark_spatial(const RobotModel& model, const JointState& state,
                                const DesiredSpatialState& des, const Gains& gains,
                                const JointDynamics& joint) {
  const TaskSpaceDynamics tsd = task_space_dynamics(model, state, joint, Frame::World);
  const Pose g = forward_kinematics(model, state.q);
  const Twist Vs = tsd.J * state.qdot;
  const auto [eg_s, eV_s] = spatial_errors(g, des.gd, Vs, des.Vd_s);
  const Wrench w =
      tsd.Mt * des.Vd_s_dot + tsd.Ct * Vs + tsd.Gt - gains.Kg() * eg_s - gains.Kd * eV_s;

  ControlOutput out;
  out.wrench = w;
  out.frame = Frame::World;
  out.tau = tsd.J.transpose() * w;
  // Body-frame metrics keep diagnostics comparable across controllers.
  DesiredState body_des;
  body_des.gd = des.gd;
  body_des.Vd_b = make_twist(des.gd.R.transpose() * linear(des.Vd_s),
                             des.gd.R.transpose() * angular(des.Vd_s));
  const Twist Vb = make_twist(g.R.transpose() * linear(Vs), g.R.transpose() * angular(Vs));
  out.diagnostics.Psi = error_function(g, des.gd);
  out.diagnostics.P = potential(g, des.gd, gains);
  out.diagnostics.e_g = position_error(g, des.gd);
  out.diagnostics.e_V = velocity_error(g, Vb, body_des);
  out.diagnostics.f_g = elastic_force(g, des.gd, gains);
  return out;
}

ControlOutput benchmark_spatial(const RobotModel& model, const JointState& state,
                                const DesiredSpatialState& des, const Gains& gains) {
  return benchmark_spatial(model, state, des, gains, joint_dynamics(model, state));
}

Wrench pd_wrench(const Pose& g, const Pose& gd, const Twist& Vb, const DesiredState& des,
                 const Gains& gains) {
  DesiredState at = des;
  at.gd = gd;
  return -gains.Kg() * position_error(g, gd) - gains.Kd * velocity_error(g, Vb, at);
}

ControlOutput pd_fallback(const RobotModel& model, const JointState& state,
                          const DesiredState& des, const Gains& gains) {
  const Pose g = forward_kinematics(model, state.q);
  const Mat6X Jb = body_jacobian(model, state.q);
  const Twist Vb = Jb * state.qdot;
  ControlOutput out;
  out.wrench = pd_wrench(g, des.gd, Vb, des, gains);
  out.frame = Frame::Body;
  out.tau = Jb.transpose() * out.wrench;
  out.diagnostics.Psi = error_function(g, des.gd);
  out.diagnostics.P = potential(g, des.gd, gains);
  out.diagnostics.e_g = position_error(g, des.gd);
  out.diagnostics.e_V = velocity_error(g, Vb, des);
  out.diagnostics.f_g = elastic_force(g, des.gd, gains);
  return out;
}

ControlOutput compute_control(ControllerKind kind, const RobotModel& model,
                              const JointState& state, const DesiredState& des,
                              const Gains& gains, const JointDynamics& joint) {
  switch (kind) {
    case ControllerKind::Gic1: return gic1(model, state, des, gains, joint);
    case ControllerKind::Gic2: return gic2(model, state, des, gains, joint);
    case ControllerKind::Intuitive: return intuitive_impedance(model, state, des, gains, joint);
    case ControllerKind::Benchmark:
      return benchmark_spatial(model, state, to_spatial(des), gains, joint);
    case ControllerKind::Pd: return pd_fallback(model, state, des, gains);
  }
  throw std::logic_error("unhandled controller kind");
}

ControlOutput compute_control(ControllerKind kind, const RobotModel& model,
                              const JointState& state, const DesiredState& des,
                              const Gains& gains) {
  return compute_control(kind, model, state, des, gains, joint_dynamics(model, state));
}

}  // namespace gic
