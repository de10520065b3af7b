#include "gic/geometry_errors.hpp"

#include <stdexcept>

namespace gic {
namespace {

template <int N>
bool is_spd(const Eigen::Matrix<double, N, N>& K) {
  if (!K.allFinite() || (K - K.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + K.norm())) {
    return false;
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>>(K).eigenvalues().minCoeff() >
         0.0;
}

constexpr double kRateStep = 1e-3;

// Five-point central difference of f at 0.
template <class F>
auto five_point(const F& f, double h) -> decltype(f(h)) {
  return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
}

}  // namespace

Mat6 Gains::Kg() const {
  Mat6 K = Mat6::Zero();
  K.topLeftCorner<3, 3>() = Kp;
  K.bottomRightCorner<3, 3>() = KR;
  return K;
}

void Gains::validate() const {
  if (!is_spd(Kp)) throw std::invalid_argument("gains: Kp must be symmetric positive definite");
  if (!is_spd(KR)) throw std::invalid_argument("gains: KR must be symmetric positive definite");
  if (!is_spd(Kd)) throw std::invalid_argument("gains: Kd must be symmetric positive definite");
  if (!(lambda_g >= 0.0)) throw std::invalid_argument("gains: lambda_g must be non-negative");
}

Gains Gains::isotropic(double kp, double ko, double kd, double lambda_g) {
  Gains g;
  g.Kp = kp * Mat3::Identity();
  g.KR = ko * Mat3::Identity();
  g.Kd = kd * Mat6::Identity();
  g.lambda_g = lambda_g;
  return g;
}

double error_function(const Pose& g, const Pose& gd) {
  return (Mat3::Identity() - gd.R.transpose() * g.R).trace() + 0.5 * (g.p - gd.p).squaredNorm();
}

Vec6 position_error(const Pose& g, const Pose& gd) {
  const Mat3 RdtR = gd.R.transpose() * g.R;
  return make_twist(g.R.transpose() * (g.p - gd.p), vee3(RdtR - RdtR.transpose()));
}

Twist desired_velocity_star(const Pose& g, const DesiredState& des) {
  return adjoint(compose(inverse(g), des.gd)) * des.Vd_b;
}

Mat6 adjoint_rate(const Pose& g, const Twist& Vb, const DesiredState& des) {
  const Mat3 Red = g.R.transpose() * des.gd.R;
  const Vec3 ped = -g.R.transpose() * (g.p - des.gd.p);
  const Mat3 w_hat = hat3(angular(Vb));
  const Mat3 Red_dot = -w_hat * Red + Red * hat3(angular(des.Vd_b));
  const Vec3 ped_dot = -w_hat * ped - linear(Vb) + Red * linear(des.Vd_b);
  Mat6 A = Mat6::Zero();
  A.topLeftCorner<3, 3>() = Red_dot;
  A.topRightCorner<3, 3>() = hat3(ped_dot) * Red + hat3(ped) * Red_dot;
  A.bottomRightCorner<3, 3>() = Red_dot;
  return A;
}

Twist desired_accel_star(const Pose& g, const Twist& Vb, const DesiredState& des) {
  return adjoint_rate(g, Vb, des) * des.Vd_b +
         adjoint(compose(inverse(g), des.gd)) * des.Vd_b_dot;
}

Twist velocity_error(const Pose& g, const Twist& Vb, const DesiredState& des) {
  return Vb - desired_velocity_star(g, des);
}

double potential(const Pose& g, const Pose& gd, const Gains& gains) {
  const Vec3 dp = g.p - gd.p;
  const Vec3 dp_d = gd.R.transpose() * dp;
  return (gains.KR * (Mat3::Identity() - gd.R.transpose() * g.R)).trace() +
         0.5 * dp_d.dot(gains.Kp * dp_d);
}

Mat3 spd_sqrt(const Mat3& K) { return Eigen::SelfAdjointEigenSolver<Mat3>(K).operatorSqrt(); }

double potential_trace_form(const Pose& g, const Pose& gd, const Gains& gains) {
  Mat4 psi = Mat4::Zero();
  psi.topLeftCorner<3, 3>() = spd_sqrt(gains.KR) * (Mat3::Identity() - gd.R.transpose() * g.R);
  psi.topRightCorner<3, 1>() = -spd_sqrt(gains.Kp) * gd.R.transpose() * (g.p - gd.p);
  return 0.5 * (psi.transpose() * psi).trace();
}

Wrench elastic_force(const Pose& g, const Pose& gd, const Gains& gains) {
  const Mat3 RdtR = gd.R.transpose() * g.R;
  const Vec3 fp = RdtR.transpose() * gains.Kp * gd.R.transpose() * (g.p - gd.p);
  return make_twist(fp, vee3(gains.KR * RdtR - RdtR.transpose() * gains.KR));
}

Mat6 stiffness_jacobian(const Pose& g, const Pose& gd, const Gains& gains) {
  const Mat3 Red = g.R.transpose() * gd.R;
  const Vec3 fp = linear(elastic_force(g, gd, gains));
  const Mat3 RK = Red * gains.KR;
  Mat6 B = Mat6::Zero();
  B.topLeftCorner<3, 3>() = Red * gains.Kp * Red.transpose();
  B.topRightCorner<3, 3>() = hat3(fp);
  B.bottomRightCorner<3, 3>() = RK.trace() * Mat3::Identity() - RK;
  return B;
}

double potential_rate_identity_check(const Pose& g, const Pose& gd, const Twist& Vb,
                                     const DesiredState& des, const Gains& gains) {
  const double h = kRateStep;
  const auto P_at = [&](double s) {
    return potential(compose(g, exp_se3(s * Vb)), compose(gd, exp_se3(s * des.Vd_b)), gains);
  };
  const double rate = five_point(P_at, h);
  DesiredState at_g = des;
  at_g.gd = gd;
  const Twist eV = velocity_error(g, Vb, at_g);
  return std::abs(rate - elastic_force(g, gd, gains).dot(eV));
}

double elastic_force_rate_identity_check(const Pose& g, const Twist& Vb,
                                         const DesiredState& des, const Gains& gains) {
  const double h = kRateStep;
  const auto f_at = [&](double s) {
    return elastic_force(compose(g, exp_se3(s * Vb)), compose(des.gd, exp_se3(s * des.Vd_b)),
                         gains);
  };
  const Wrench rate = five_point(f_at, h);
  const Twist eV = velocity_error(g, Vb, des);
  return (rate - stiffness_jacobian(g, des.gd, gains) * eV).norm();
}

std::pair<Vec6, Vec6> spatial_errors(const Pose& g, const Pose& gd, const Twist& Vs,
                                     const Twist& Vd_s) {
  Vec3 eR = Vec3::Zero();
  for (int i = 0; i < 3; ++i) eR += gd.R.col(i).cross(g.R.col(i));
  return {make_twist(g.p - gd.p, eR), Vs - Vd_s};
}

double dynamic_error(const Pose& g, const Pose& gd, const Twist& eV) {
  return error_function(g, gd) + eV.squaredNorm();
}

}  // namespace gic
