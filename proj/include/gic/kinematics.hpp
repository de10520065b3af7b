#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gic/se3.hpp"

namespace gic {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Mat6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rigid-body inertia of one link, expressed at its centre of mass.
struct LinkInertia {
  double mass = 0.0;  // kg
  Pose com_pose;      // COM frame at q = 0, relative to the base
  Mat3 inertia = Mat3::Zero();  // kg m^2, about the COM in the COM frame
};

struct JointLimit {
  double min = 0.0;
  double max = 0.0;
};

/// Serial chain of revolute joints in product-of-exponentials form:
/// g(q) = exp(xi_1 q_1) ... exp(xi_n q_n) g0.
struct RobotModel {
  std::string name;
  std::vector<Twist> joint_twists;  // spatial frame, unit revolute twists
  Pose home;                        // end-effector pose g0 at q = 0
  std::vector<LinkInertia> links;   // link i moves with joints 1..i
  Vec3 gravity{0.0, 0.0, -9.81};
  std::optional<std::vector<JointLimit>> joint_limits;
  /// Reflected actuator inertia added to the diagonal of M(q). Empty means zero.
  std::vector<double> armature;

  [[nodiscard]] int dof() const { return static_cast<int>(joint_twists.size()); }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

/// Unit twist of a revolute joint about `axis` through `point`.
Twist revolute_twist(const Vec3& axis, const Vec3& point);

Pose forward_kinematics(const RobotModel& model, const VecX& q);

/// Columns of the spatial Jacobian: xi'_i = Ad(exp(xi_1 q_1)...exp(xi_{i-1} q_{i-1})) xi_i.
Mat6X spatial_jacobian(const RobotModel& model, const VecX& q);
Mat6X body_jacobian(const RobotModel& model, const VecX& q);

/// d/dt J_b along qdot. Column j is ad(J_j) * sum_{k>j} J_k qdot_k.
Mat6X body_jacobian_dot(const RobotModel& model, const VecX& q, const VecX& qdot);
/// d/dt J_s along qdot, from J_s = Ad(g) J_b.
Mat6X spatial_jacobian_dot(const RobotModel& model, const VecX& q, const VecX& qdot);

/// Jacobian of [p_dot; omega_s]: end-effector point velocity and angular velocity,
/// both in base coordinates. J_w = diag(R, R) J_b.
Mat6X world_jacobian(const RobotModel& model, const VecX& q);
Mat6X world_jacobian_dot(const RobotModel& model, const VecX& q, const VecX& qdot);

Twist body_velocity(const RobotModel& model, const VecX& q, const VecX& qdot);
Twist spatial_velocity(const RobotModel& model, const VecX& q, const VecX& qdot);

/// Pose of link i's COM frame and its body Jacobian (zero beyond column i).
struct LinkFrame {
  Pose pose;
  Mat6X jacobian;
};
std::vector<LinkFrame> link_frames(const RobotModel& model, const VecX& q);

void check_dimension(const RobotModel& model, const VecX& v, const char* what);

}  // namespace gic
