#include "gic/se3.hpp"

#include <algorithm>
#include <cmath>

namespace gic {
namespace {

constexpr double kSmallAngle = 1e-6;

Vec3 vee3_unchecked(const Mat3& m) {
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
          0.5 * (m(1, 0) - m(0, 1))};
}

// Coefficients of the Rodrigues and SE(3) V-matrix expansions:
// a = sin t / t, b = (1 - cos t) / t^2, c = (t - sin t) / t^3.
struct RodriguesCoefficients {
  double a, b, c;
};

RodriguesCoefficients rodrigues(double theta) {
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0, 0.5 - t2 / 24.0, 1.0 / 6.0 - t2 / 120.0};
  }
  const double t2 = theta * theta;
  return {std::sin(theta) / theta, (1.0 - std::cos(theta)) / t2,
          (theta - std::sin(theta)) / (t2 * theta)};
}

}  // namespace

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.topRightCorner<3, 1>() = p;
  return m;
}

Pose Pose::from_matrix(const Mat4& m) {
  return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()};
}

Mat3 hat3(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),  //
      w.z(), 0.0, -w.x(),   //
      -w.y(), w.x(), 0.0;
  return m;
}

Vec3 vee3(const Mat3& m) {
  const double asym = (m + m.transpose()).norm();
  if (!(asym <= 1e-6 * (1.0 + m.norm()))) {
    throw NonSkewInput("vee3: argument is not skew-symmetric (|M + M^T|_F = " +
                       std::to_string(asym) + ")");
  }
  return vee3_unchecked(m);
}

Mat4 hat6(const Twist& xi) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat3(angular(xi));
  m.topRightCorner<3, 1>() = linear(xi);
  return m;
}

Twist vee6(const Mat4& m) {
  if (m.row(3).cwiseAbs().maxCoeff() > 1e-9) {
    throw NonSkewInput("vee6: bottom row of an se(3) element must be zero");
  }
  return make_twist(m.topRightCorner<3, 1>(), vee3(m.topLeftCorner<3, 3>()));
}

Mat3 exp_so3(const Vec3& w) {
  const auto k = rodrigues(w.norm());
  const Mat3 W = hat3(w);
  return Mat3::Identity() + k.a * W + k.b * W * W;
}

Vec3 log_so3(const Mat3& R) {
  const double cos_theta = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  const Vec3 s = vee3_unchecked(R);  // sin(theta) * axis
  const double theta = std::atan2(s.norm(), cos_theta);
  if (theta < kSmallAngle) {
    return (1.0 + theta * theta / 6.0) * s;
  }
  if (M_PI - theta < 1e-3) {
    // Near a half turn sin(theta) carries no usable axis information; recover
    // the axis from the symmetric part, which equals I + (1 - cos)(n n^T - I).
    const Mat3 nnT = (0.5 * (R + R.transpose()) - cos_theta * Mat3::Identity()) /
                     (1.0 - cos_theta);
    Eigen::Index k = 0;
    nnT.diagonal().maxCoeff(&k);
    Vec3 n = nnT.col(k) / std::sqrt(nnT(k, k));
    n.normalize();
    if (n.dot(s) < 0.0) n = -n;
    return theta * n;
  }
  return (theta / std::sin(theta)) * s;
}

Pose exp_se3(const Twist& xi) {
  const Vec3 w = angular(xi);
  const auto k = rodrigues(w.norm());
  const Mat3 W = hat3(w);
  const Mat3 W2 = W * W;
  const Mat3 V = Mat3::Identity() + k.b * W + k.c * W2;
  return {Mat3::Identity() + k.a * W + k.b * W2, V * linear(xi)};
}

Pose compose(const Pose& a, const Pose& b) { return {a.R * b.R, a.R * b.p + a.p}; }

Pose inverse(const Pose& g) {
  const Mat3 Rt = g.R.transpose();
  return {Rt, -Rt * g.p};
}

Mat6 adjoint(const Pose& g) {
  Mat6 A = Mat6::Zero();
  A.topLeftCorner<3, 3>() = g.R;
  A.topRightCorner<3, 3>() = hat3(g.p) * g.R;
  A.bottomRightCorner<3, 3>() = g.R;
  return A;
}

Mat6 ad(const Twist& xi) {
  Mat6 A = Mat6::Zero();
  const Mat3 W = hat3(angular(xi));
  A.topLeftCorner<3, 3>() = W;
  A.topRightCorner<3, 3>() = hat3(linear(xi));
  A.bottomRightCorner<3, 3>() = W;
  return A;
}

bool is_rotation(const Mat3& R, double tol) {
  return R.allFinite() && (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(R.determinant() - 1.0) <= tol;
}

bool is_valid(const Pose& g, double tol) { return is_rotation(g.R, tol) && g.p.allFinite(); }

Mat3 rot_x(double angle) { return exp_so3(angle * Vec3::UnitX()); }
Mat3 rot_y(double angle) { return exp_so3(angle * Vec3::UnitY()); }
Mat3 rot_z(double angle) { return exp_so3(angle * Vec3::UnitZ()); }

Eigen::Vector4d to_quaternion_wxyz(const Mat3& R) {
  Eigen::Quaterniond q(R);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return {q.w(), q.x(), q.y(), q.z()};
}

}  // namespace gic
