#pragma once

#include <stdexcept>
#include <vector>

#include "gic/kinematics.hpp"

namespace gic {

struct JointState {
  VecX q;
  VecX qdot;
};

/// Raised when the task-space transform would invert an ill-conditioned Jacobian.
class NearSingularJacobian : public std::runtime_error {
 public:
  NearSingularJacobian(double condition, double threshold);
  double condition;
};

/// Body: J_b. Spatial: J_s = Ad(g) J_b. World: J_w, velocities [p_dot; omega_s].
enum class Frame { Body, Spatial, World };

/// How dM/dq enters the Christoffel sums.
enum class MassDerivative { Analytic, FiniteDifference };

inline constexpr double kJacobianConditionLimit = 1e8;

MatX mass_matrix(const RobotModel& model, const VecX& q);

/// dM/dq_k for k = 0..n-1.
std::vector<MatX> mass_matrix_partials(const RobotModel& model, const VecX& q,
                                       MassDerivative method = MassDerivative::Analytic);

/// C_rs = 1/2 sum_t (dM_rs/dq_t + dM_tr/dq_s - dM_ts/dq_r) qdot_t.
MatX coriolis_matrix(const RobotModel& model, const VecX& q, const VecX& qdot,
                     MassDerivative method = MassDerivative::Analytic);

/// Gradient of the gravitational potential, entering as M qdd + C qd + G = T.
VecX gravity_vector(const RobotModel& model, const VecX& q);

/// Potential energy sum_i -m_i gravity^T p_com_i.
double potential_energy(const RobotModel& model, const VecX& q);

/// M, C and G evaluated together (shares the link Jacobians).
struct JointDynamics {
  MatX M;
  MatX C;
  VecX G;
};
JointDynamics joint_dynamics(const RobotModel& model, const JointState& state,
                             MassDerivative method = MassDerivative::Analytic);

/// Operational-space dynamics  Mt dV + Ct V + Gt = Tt  in the chosen frame:
/// Mt = J^-T M J^-1, Ct = J^-T (C - M J^-1 Jdot) J^-1, Gt = J^-T G.
/// For n != 6 the Moore-Penrose pseudo-inverse stands in for J^-1.
struct TaskSpaceDynamics {
  Mat6 Mt;
  Mat6 Ct;
  Vec6 Gt;
  Frame frame = Frame::Body;
  Mat6X J;     // Jacobian used for the transform
  Mat6X Jdot;
};

TaskSpaceDynamics task_space_dynamics(const RobotModel& model, const JointState& state,
                                      Frame frame,
                                      double condition_limit = kJacobianConditionLimit);
TaskSpaceDynamics task_space_dynamics(const RobotModel& model, const JointState& state,
                                      const JointDynamics& joint, Frame frame,
                                      double condition_limit = kJacobianConditionLimit);

/// Ratio of extreme non-zero singular values.
double condition_number(const Mat6X& J);

/// qdd = M^-1 (T + Te - C qdot - G).
VecX forward_dynamics(const RobotModel& model, const JointState& state, const VecX& torque,
                      const VecX& external_torque);
VecX forward_dynamics(const JointDynamics& joint, const JointState& state, const VecX& torque,
                      const VecX& external_torque);

}  // namespace gic
