#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// 6-vector in translation-first order [v; w]. Every twist, wrench and error
/// vector in the library uses this layout.
using Twist = Vec6;
using Wrench = Vec6;

inline Vec3 linear(const Twist& xi) { return xi.head<3>(); }
inline Vec3 angular(const Twist& xi) { return xi.tail<3>(); }
inline Twist make_twist(const Vec3& v, const Vec3& w) {
  Twist xi;
  xi << v, w;
  return xi;
}

/// Raised by vee maps when the argument is not (numerically) in the Lie algebra.
class NonSkewInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rigid transform g = [R p; 0 1].
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 p = Vec3::Zero();

  static Pose identity() { return {}; }
  [[nodiscard]] Mat4 matrix() const;
  static Pose from_matrix(const Mat4& m);
};

Mat3 hat3(const Vec3& w);
Vec3 vee3(const Mat3& m);
Mat4 hat6(const Twist& xi);
Twist vee6(const Mat4& m);

Mat3 exp_so3(const Vec3& w);
Vec3 log_so3(const Mat3& R);

Pose exp_se3(const Twist& xi);
Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& g);

/// Ad_g = [R, p^ R; 0, R] acting on translation-first twists.
Mat6 adjoint(const Pose& g);
/// ad_xi = [w^, v^; 0, w^], so that ad_a(b) = vee6([a^, b^]).
Mat6 ad(const Twist& xi);

/// Orthonormality and unit determinant within `tol`.
bool is_rotation(const Mat3& R, double tol = 1e-9);
bool is_valid(const Pose& g, double tol = 1e-9);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Unit quaternion (w, x, y, z) with w >= 0.
Eigen::Vector4d to_quaternion_wxyz(const Mat3& R);

}  // namespace gic
