#include "gic/kinematics.hpp"

#include <cmath>

namespace gic {
namespace {

// Prefix products P_i = exp(xi_1 q_1) ... exp(xi_i q_i), with P_0 = I.
std::vector<Pose> prefix_products(const RobotModel& model, const VecX& q) {
  std::vector<Pose> prefix(model.dof() + 1);
  for (int i = 0; i < model.dof(); ++i) {
    prefix[i + 1] = compose(prefix[i], exp_se3(model.joint_twists[i] * q(i)));
  }
  return prefix;
}

Mat6X spatial_columns(const RobotModel& model, const std::vector<Pose>& prefix) {
  Mat6X Js(6, model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    Js.col(i) = adjoint(prefix[i]) * model.joint_twists[i];
  }
  return Js;
}

bool is_spd(const Mat3& m) {
  if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.norm())) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m);
  return eig.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

void check_dimension(const RobotModel& model, const VecX& v, const char* what) {
  if (v.size() != model.dof()) {
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(v.size()) +
                            ", model '" + model.name + "' has " +
                            std::to_string(model.dof()) + " joints");
  }
}

void RobotModel::validate() const {
  const auto fail = [this](const std::string& msg) {
    throw std::invalid_argument("robot model '" + name + "': " + msg);
  };
  if (joint_twists.empty()) fail("at least one joint is required");
  if (links.size() != joint_twists.size()) {
    fail("expected one link per joint (" + std::to_string(joint_twists.size()) + "), got " +
         std::to_string(links.size()));
  }
  for (std::size_t i = 0; i < joint_twists.size(); ++i) {
    const Twist& xi = joint_twists[i];
    const std::string tag = "joints[" + std::to_string(i) + "]";
    if (!xi.allFinite()) fail(tag + " twist is not finite");
    if (std::abs(angular(xi).norm() - 1.0) > 1e-9) fail(tag + " is not revolute (|w| != 1)");
    if (std::abs(linear(xi).dot(angular(xi))) > 1e-9) fail(tag + " has nonzero pitch");
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string tag = "links[" + std::to_string(i) + "]";
    if (!(links[i].mass > 0.0) || !std::isfinite(links[i].mass)) fail(tag + ".mass must be positive");
    if (!is_spd(links[i].inertia)) fail(tag + ".inertia must be symmetric positive definite");
    if (!is_valid(links[i].com_pose)) fail(tag + ".com is not a valid pose");
  }
  if (!is_valid(home)) fail("home is not a valid pose");
  if (!gravity.allFinite()) fail("gravity is not finite");
  if (!armature.empty()) {
    if (armature.size() != joint_twists.size()) fail("armature needs one entry per joint");
    for (double a : armature) {
      if (!(a >= 0.0) || !std::isfinite(a)) fail("armature entries must be non-negative");
    }
  }
  if (joint_limits) {
    if (joint_limits->size() != joint_twists.size()) fail("joint limits need one entry per joint");
    for (const auto& lim : *joint_limits) {
      if (!(lim.min < lim.max)) fail("joint limit min must be below max");
    }
  }
}

Twist revolute_twist(const Vec3& axis, const Vec3& point) {
  const Vec3 w = axis.normalized();
  return make_twist(-w.cross(point), w);
}

Pose forward_kinematics(const RobotModel& model, const VecX& q) {
  check_dimension(model, q, "q");
  Pose g;
  for (int i = 0; i < model.dof(); ++i) g = compose(g, exp_se3(model.joint_twists[i] * q(i)));
  return compose(g, model.home);
}

Mat6X spatial_jacobian(const RobotModel& model, const VecX& q) {
  check_dimension(model, q, "q");
  return spatial_columns(model, prefix_products(model, q));
}

Mat6X body_jacobian(const RobotModel& model, const VecX& q) {
  check_dimension(model, q, "q");
  // Column i = Ad((exp(xi_i q_i) ... exp(xi_n q_n) g0)^-1) xi_i, built from the tool back.
  Mat6X Jb(6, model.dof());
  Pose tail = model.home;
  for (int i = model.dof() - 1; i >= 0; --i) {
    Jb.col(i) = adjoint(inverse(tail)) * model.joint_twists[i];
    tail = compose(exp_se3(model.joint_twists[i] * q(i)), tail);
  }
  return Jb;
}

Mat6X body_jacobian_dot(const RobotModel& model, const VecX& q, const VecX& qdot) {
  check_dimension(model, qdot, "qdot");
  const Mat6X Jb = body_jacobian(model, q);
  Mat6X Jdot = Mat6X::Zero(6, model.dof());
  Twist distal = Twist::Zero();  // sum_{k>j} J_k qdot_k
  for (int j = model.dof() - 1; j >= 0; --j) {
    Jdot.col(j) = ad(Jb.col(j)) * distal;
    distal += Jb.col(j) * qdot(j);
  }
  return Jdot;
}

Mat6X spatial_jacobian_dot(const RobotModel& model, const VecX& q, const VecX& qdot) {
  check_dimension(model, qdot, "qdot");
  const Pose g = forward_kinematics(model, q);
  const Mat6X Jb = body_jacobian(model, q);
  const Twist Vb = Jb * qdot;
  return adjoint(g) * (ad(Vb) * Jb + body_jacobian_dot(model, q, qdot));
}

namespace {
Mat6 block_diag(const Mat3& A) {
  Mat6 B = Mat6::Zero();
  B.topLeftCorner<3, 3>() = A;
  B.bottomRightCorner<3, 3>() = A;
  return B;
}
}  // namespace

Mat6X world_jacobian(const RobotModel& model, const VecX& q) {
  return block_diag(forward_kinematics(model, q).R) * body_jacobian(model, q);
}

Mat6X world_jacobian_dot(const RobotModel& model, const VecX& q, const VecX& qdot) {
  check_dimension(model, qdot, "qdot");
  const Mat3 R = forward_kinematics(model, q).R;
  const Mat6X Jb = body_jacobian(model, q);
  const Mat3 w_hat = hat3(angular(Twist(Jb * qdot)));
  return block_diag(R) * (block_diag(w_hat) * Jb + body_jacobian_dot(model, q, qdot));
}

Twist body_velocity(const RobotModel& model, const VecX& q, const VecX& qdot) {
  check_dimension(model, qdot, "qdot");
  return body_jacobian(model, q) * qdot;
}

Twist spatial_velocity(const RobotModel& model, const VecX& q, const VecX& qdot) {
  check_dimension(model, qdot, "qdot");
  return spatial_jacobian(model, q) * qdot;
}

std::vector<LinkFrame> link_frames(const RobotModel& model, const VecX& q) {
  check_dimension(model, q, "q");
  const auto prefix = prefix_products(model, q);
  const Mat6X Js = spatial_columns(model, prefix);
  std::vector<LinkFrame> frames;
  frames.reserve(model.links.size());
  for (int i = 0; i < model.dof(); ++i) {
    LinkFrame f;
    f.pose = compose(prefix[i + 1], model.links[i].com_pose);
    f.jacobian = Mat6X::Zero(6, model.dof());
    f.jacobian.leftCols(i + 1) = adjoint(inverse(f.pose)) * Js.leftCols(i + 1);
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace gic
