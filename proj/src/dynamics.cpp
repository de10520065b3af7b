#include "gic/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gic {
namespace {

Mat6 spatial_inertia(const LinkInertia& link) {
  Mat6 G = Mat6::Zero();
  G.topLeftCorner<3, 3>() = link.mass * Mat3::Identity();
  G.bottomRightCorner<3, 3>() = link.inertia;
  return G;
}

MatX mass_from_frames(const RobotModel& model, const std::vector<LinkFrame>& frames) {
  const int n = model.dof();
  MatX M = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Mat6X& J = frames[i].jacobian;
    M.noalias() += J.transpose() * spatial_inertia(model.links[i]) * J;
  }
  for (int i = 0; i < static_cast<int>(model.armature.size()); ++i) M(i, i) += model.armature[i];
  return M;
}

std::vector<MatX> analytic_partials(const RobotModel& model,
                                    const std::vector<LinkFrame>& frames) {
  const int n = model.dof();
  std::vector<MatX> dM(n, MatX::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    const Mat6X& J = frames[i].jacobian;
    const Mat6 G = spatial_inertia(model.links[i]);
    const Mat6X GJ = G * J;
    // Column j of J depends on q_k only for j < k <= i: d c_j / d q_k = ad(c_j) c_k.
    for (int k = 1; k <= i; ++k) {
      Mat6X dJ = Mat6X::Zero(6, n);
      for (int j = 0; j < k; ++j) dJ.col(j) = ad(J.col(j)) * J.col(k);
      const MatX half = dJ.transpose() * GJ;
      dM[k] += half + half.transpose();
    }
  }
  return dM;
}

std::vector<MatX> finite_difference_partials(const RobotModel& model, const VecX& q) {
  const int n = model.dof();
  std::vector<MatX> dM(n);
  for (int k = 0; k < n; ++k) {
    const double h = 1e-6 * (1.0 + std::abs(q(k)));
    VecX qp = q, qm = q;
    qp(k) += h;
    qm(k) -= h;
    dM[k] = (mass_matrix(model, qp) - mass_matrix(model, qm)) / (2.0 * h);
  }
  return dM;
}

MatX christoffel(const std::vector<MatX>& dM, const VecX& qdot) {
  const int n = static_cast<int>(qdot.size());
  MatX C = MatX::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      double c = 0.0;
      for (int t = 0; t < n; ++t) c += (dM[t](r, s) + dM[s](t, r) - dM[r](t, s)) * qdot(t);
      C(r, s) = 0.5 * c;
    }
  }
  return C;
}

VecX gravity_from_frames(const RobotModel& model, const std::vector<LinkFrame>& frames) {
  VecX G = VecX::Zero(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    // d p_com / dq = R J_linear, since pdot = R v^b.
    const MatX dp = frames[i].pose.R * frames[i].jacobian.topRows<3>();
    G -= model.links[i].mass * dp.transpose() * model.gravity;
  }
  return G;
}

}  // namespace

NearSingularJacobian::NearSingularJacobian(double cond, double threshold)
    : std::runtime_error("Jacobian is near singular (condition number " + std::to_string(cond) +
                         " exceeds " + std::to_string(threshold) + ")"),
      condition(cond) {}

MatX mass_matrix(const RobotModel& model, const VecX& q) {
  return mass_from_frames(model, link_frames(model, q));
}

std::vector<MatX> mass_matrix_partials(const RobotModel& model, const VecX& q,
                                       MassDerivative method) {
  if (method == MassDerivative::FiniteDifference) return finite_difference_partials(model, q);
  return analytic_partials(model, link_frames(model, q));
}

MatX coriolis_matrix(const RobotModel& model, const VecX& q, const VecX& qdot,
                     MassDerivative method) {
  check_dimension(model, qdot, "qdot");
  return christoffel(mass_matrix_partials(model, q, method), qdot);
}

VecX gravity_vector(const RobotModel& model, const VecX& q) {
  return gravity_from_frames(model, link_frames(model, q));
}

double potential_energy(const RobotModel& model, const VecX& q) {
  const auto frames = link_frames(model, q);
  double U = 0.0;
  for (int i = 0; i < model.dof(); ++i) {
    U -= model.links[i].mass * model.gravity.dot(frames[i].pose.p);
  }
  return U;
}

JointDynamics joint_dynamics(const RobotModel& model, const JointState& state,
                             MassDerivative method) {
  check_dimension(model, state.qdot, "qdot");
  const auto frames = link_frames(model, state.q);
  const auto dM = method == MassDerivative::Analytic
                      ? analytic_partials(model, frames)
                      : finite_difference_partials(model, state.q);
  return {mass_from_frames(model, frames), christoffel(dM, state.qdot),
          gravity_from_frames(model, frames)};
}

double condition_number(const Mat6X& J) {
  Eigen::JacobiSVD<MatX> svd(J);
  const VecX& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

TaskSpaceDynamics task_space_dynamics(const RobotModel& model, const JointState& state,
                                      Frame frame, double condition_limit) {
  return task_space_dynamics(model, state, joint_dynamics(model, state), frame,
                             condition_limit);
}

TaskSpaceDynamics task_space_dynamics(const RobotModel& model, const JointState& state,
                                      const JointDynamics& joint, Frame frame,
                                      double condition_limit) {
  TaskSpaceDynamics out;
  out.frame = frame;
  if (frame == Frame::Body) {
    out.J = body_jacobian(model, state.q);
    out.Jdot = body_jacobian_dot(model, state.q, state.qdot);
  } else if (frame == Frame::Spatial) {
    out.J = spatial_jacobian(model, state.q);
    out.Jdot = spatial_jacobian_dot(model, state.q, state.qdot);
  } else {
    out.J = world_jacobian(model, state.q);
    out.Jdot = world_jacobian_dot(model, state.q, state.qdot);
  }
  const double cond = condition_number(out.J);
  if (!(cond <= condition_limit)) throw NearSingularJacobian(cond, condition_limit);

  MatX Jinv;  // n x 6
  if (model.dof() == 6) {
    Jinv = out.J.partialPivLu().inverse();
  } else {
    Jinv = out.J.completeOrthogonalDecomposition().pseudoInverse();
  }
  const MatX JinvT = Jinv.transpose();
  out.Mt = JinvT * joint.M * Jinv;
  out.Ct = JinvT * (joint.C - joint.M * Jinv * out.Jdot) * Jinv;
  out.Gt = JinvT * joint.G;
  return out;
}

VecX forward_dynamics(const JointDynamics& joint, const JointState& state, const VecX& torque,
                      const VecX& external_torque) {
  return joint.M.ldlt().solve(torque + external_torque - joint.C * state.qdot - joint.G);
}

VecX forward_dynamics(const RobotModel& model, const JointState& state, const VecX& torque,
                      const VecX& external_torque) {
  check_dimension(model, torque, "torque");
  check_dimension(model, external_torque, "external torque");
  return forward_dynamics(joint_dynamics(model, state), state, torque, external_torque);
}

}  // namespace gic
