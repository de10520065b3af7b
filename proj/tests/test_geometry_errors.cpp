#include <cmath>

#include <gtest/gtest.h>

#include "gic/geometry_errors.hpp"
#include "support/oracles.hpp"

using namespace gic;

namespace {

Gains random_gains(oracle::Random& rnd) {
  Gains k;
  k.Kp = rnd.spd3(1.0);
  k.KR = rnd.spd3(1.0);
  k.Kd = Mat6::Identity();
  return k;
}

DesiredState random_desired(oracle::Random& rnd) {
  return {rnd.pose(), rnd.twist(), rnd.twist()};
}

// Right perturbation g exp(t eta^) through the series oracle.
Pose right_step(const Pose& g, const Twist& eta, double t) {
  return oracle::pose_of(oracle::homogeneous(g) * oracle::series_exp(Mat4(oracle::twist_matrix(t * eta)), 40));
}

// Desired state transported along gd exp(t Vd^) with constant body acceleration to first order.
DesiredState desired_at(const DesiredState& des, double t) {
  const Twist V = des.Vd_b + t * des.Vd_b_dot;
  const Twist avg = des.Vd_b + 0.5 * t * des.Vd_b_dot;
  return {right_step(des.gd, avg, t), V, des.Vd_b_dot};
}

}  // namespace

TEST(ErrorFunction, Examples) {
  const Pose g{rot_x(0.3), Vec3(1, 2, 3)};
  EXPECT_EQ(error_function(g, g), 0.0);
  EXPECT_NEAR(error_function({Mat3::Identity(), Vec3(1, 0, 0)}, Pose{}), 0.5, 1e-15);
  EXPECT_NEAR(error_function({rot_z(M_PI), Vec3::Zero()}, Pose{}), 4.0, 1e-15);
}

TEST(ErrorFunction, IsHalfSquaredFrobeniusDistance) {
  oracle::Random rnd(51);
  for (int i = 0; i < 100; ++i) {
    const Pose g = rnd.pose(), gd = rnd.pose();
    const Mat4 D = Mat4::Identity() - oracle::homogeneous(gd).inverse() * oracle::homogeneous(g);
    EXPECT_NEAR(error_function(g, gd), 0.5 * D.squaredNorm(), 1e-10 * (1.0 + D.squaredNorm()));
    EXPECT_GE(error_function(g, gd), 0.0);
  }
}

TEST(ErrorFunction, LeftInvariantButNotRightInvariant) {
  oracle::Random rnd(52);
  for (int i = 0; i < 200; ++i) {
    const Pose g = rnd.rigid(), gd = rnd.rigid(), gl = rnd.rigid(2.0);
    EXPECT_NEAR(error_function(compose(gl, g), compose(gl, gd)), error_function(g, gd), 1e-12);
  }
  const Pose g{rot_x(0.4), Vec3(0.3, 0, 0)}, gd{Mat3::Identity(), Vec3::Zero()};
  const Pose gr{rot_z(1.0), Vec3(0, 0.5, 0)};
  EXPECT_GT(std::abs(error_function(compose(g, gr), compose(gd, gr)) - error_function(g, gd)), 1e-3);
}

TEST(PositionError, ExamplesAndZero) {
  const Pose g{rot_y(0.7), Vec3(1, -1, 2)};
  EXPECT_EQ(position_error(g, g), Vec6::Zero());
  const Vec3 d(0.1, -0.2, 0.3);
  Vec6 expected;
  expected << d, Vec3::Zero();
  EXPECT_LT((position_error({Mat3::Identity(), d}, Pose{}) - expected).norm(), 1e-15);
}

TEST(PositionError, IsRightGradientOfPsi) {
  oracle::Random rnd(53);
  const double eps = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const Pose g = rnd.pose(), gd = rnd.pose();
    const Twist eta = rnd.twist();
    const double fd = oracle::central([&](double t) { return error_function(right_step(g, eta, t), gd); }, eps);
    EXPECT_NEAR(fd, position_error(g, gd).dot(eta), 1e-6 * (1.0 + eta.norm()));
  }
}

TEST(DesiredVelocityStar, AdjointAndConjugationAgree) {
  oracle::Random rnd(54);
  for (int i = 0; i < 100; ++i) {
    const Pose g = rnd.pose();
    const DesiredState des = random_desired(rnd);
    const Mat4 ged = oracle::homogeneous(g).inverse() * oracle::homogeneous(des.gd);
    const Twist conj = oracle::twist_vector(ged * oracle::twist_matrix(des.Vd_b) * ged.inverse());
    EXPECT_LT((desired_velocity_star(g, des) - conj).norm(), 1e-12 * (1.0 + conj.norm()));
    // Expanded block form.
    const Mat3 Red = g.R.transpose() * des.gd.R;
    const Vec3 vd = des.Vd_b.head<3>(), wd = des.Vd_b.tail<3>();
    Twist expanded;
    expanded << Red * vd + Red * hat3(wd) * des.gd.R.transpose() * (g.p - des.gd.p), Red * wd;
    EXPECT_LT((desired_velocity_star(g, des) - expanded).norm(), 1e-11 * (1.0 + conj.norm()));
  }
}

TEST(DesiredVelocityStar, Examples) {
  const Pose g{rot_z(0.5), Vec3(1, 0, 0)};
  DesiredState des{g, Twist::LinSpaced(6, 1, 2), Twist::Zero()};
  EXPECT_LT((desired_velocity_star(g, des) - des.Vd_b).norm(), 1e-15);
  des.gd.p = Vec3(0, 1, 0);
  des.Vd_b << 0.1, 0.2, 0.3, 0, 0, 0;
  const Twist star = desired_velocity_star(g, des);
  EXPECT_LT((star.head<3>() - des.Vd_b.head<3>()).norm(), 1e-15);
  EXPECT_EQ(Vec3(star.tail<3>()), Vec3::Zero());
}

TEST(DesiredAccelStar, MatchesFiniteDifferenceAlongPaths) {
  oracle::Random rnd(55);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const Pose g = rnd.pose();
    const Twist Vb = rnd.twist(), Vb_dot = rnd.twist();
    const DesiredState des = random_desired(rnd);
    const auto star_at = [&](double t) -> MatX {
      const Twist avg = Vb + 0.5 * t * Vb_dot;
      return desired_velocity_star(right_step(g, avg, t), desired_at(des, t));
    };
    const Twist fd = oracle::central(star_at, h);
    EXPECT_LT((desired_accel_star(g, Vb, des) - fd).norm(), 1e-5 * (1.0 + fd.norm()));
  }
}

TEST(DesiredAccelStar, Examples) {
  const Pose g{rot_x(1.0), Vec3(0.2, 0.1, 0)};
  const DesiredState still{Pose{}, Twist::Zero(), Twist::Zero()};
  EXPECT_EQ(desired_accel_star(g, Twist::LinSpaced(6, -1, 1), still), Twist::Zero());
  const DesiredState moving{g, Twist::LinSpaced(6, 0.5, 1.0), Twist::LinSpaced(6, -0.3, 0.4)};
  EXPECT_LT((desired_accel_star(g, moving.Vd_b, moving) - moving.Vd_b_dot).norm(), 1e-14);
}

TEST(VelocityError, TangentIdentity) {
  oracle::Random rnd(56);
  for (int i = 0; i < 100; ++i) {
    const Pose g = rnd.pose();
    const Twist Vb = rnd.twist();
    const DesiredState des = random_desired(rnd);
    const Mat4 G = oracle::homogeneous(g), Gd = oracle::homogeneous(des.gd);
    const Mat4 lhs = G * oracle::twist_matrix(velocity_error(g, Vb, des));
    const Mat4 rhs = G * oracle::twist_matrix(Vb) - Gd * oracle::twist_matrix(des.Vd_b) * Gd.inverse() * G;
    EXPECT_LT((lhs - rhs).norm(), 1e-10 * (1.0 + rhs.norm()));
  }
  const Pose g{rot_y(0.2), Vec3(0, 0, 1)};
  const DesiredState des{g, Twist::LinSpaced(6, 0, 1), Twist::Zero()};
  EXPECT_LT(velocity_error(g, desired_velocity_star(g, des), des).norm(), 1e-15);
  EXPECT_LT((velocity_error(g, Twist::Ones(), des) - (Twist::Ones() - des.Vd_b)).norm(), 1e-15);
}

TEST(Potential, ReducesToPsiWithUnitGains) {
  oracle::Random rnd(57);
  const Gains unit = Gains::isotropic(1.0, 1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Pose g = rnd.pose(), gd = rnd.pose();
    EXPECT_NEAR(potential(g, gd, unit), error_function(g, gd), 1e-12);
  }
  const Pose g = rnd.pose();
  EXPECT_NEAR(potential(g, g, random_gains(rnd)), 0.0, 1e-13);
}

TEST(Potential, TraceFormAgreesAndIsNonNegative) {
  oracle::Random rnd(58);
  for (int i = 0; i < 200; ++i) {
    const Pose g = rnd.pose(), gd = rnd.pose();
    const Gains k = random_gains(rnd);
    const double P = potential(g, gd, k);
    EXPECT_NEAR(P, potential_trace_form(g, gd, k), 1e-12 * (1.0 + std::abs(P)));
    EXPECT_GE(P, 0.0);
  }
}

TEST(Potential, SpdSqrt) {
  oracle::Random rnd(59);
  for (int i = 0; i < 50; ++i) {
    const Mat3 K = rnd.spd3();
    const Mat3 S = spd_sqrt(K);
    EXPECT_LT((S * S - K).norm(), 1e-12 * K.norm());
    EXPECT_LT((S - S.transpose()).norm(), 1e-14 * K.norm());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat3>(S).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(ElasticForce, IsRightGradientOfPotential) {
  oracle::Random rnd(60);
  const double eps = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const Pose g = rnd.pose(), gd = rnd.pose();
    const Gains k = random_gains(rnd);
    const Twist eta = rnd.twist();
    const double fd = oracle::central([&](double t) { return potential(right_step(g, eta, t), gd, k); }, eps);
    const Wrench f = elastic_force(g, gd, k);
    EXPECT_NEAR(fd, f.dot(eta), 1e-6 * (1.0 + f.norm() * eta.norm()));
  }
}

TEST(ElasticForce, IsotropicGainsScalePositionError) {
  oracle::Random rnd(61);
  for (int i = 0; i < 100; ++i) {
    const Pose g = rnd.pose(), gd = rnd.pose();
    const double kv = 0.5 + std::abs(rnd.normal()) * 100.0;
    const Wrench f = elastic_force(g, gd, Gains::isotropic(kv, kv, 1.0));
    EXPECT_LT((f - kv * position_error(g, gd)).norm(), 1e-12 * kv * (1.0 + f.norm()));
  }
  const Pose g = rnd.pose();
  EXPECT_LT(elastic_force(g, g, random_gains(rnd)).norm(), 1e-13);
}

TEST(ElasticForce, TranslationalPartIsTransformedStiffness) {
  oracle::Random rnd(62);
  const Pose g = rnd.pose(), gd = rnd.pose();
  const Gains k = random_gains(rnd);
  const Mat3 Red = g.R.transpose() * gd.R;
  const Vec3 ep = position_error(g, gd).head<3>();
  EXPECT_LT((elastic_force(g, gd, k).head<3>() - Red * k.Kp * Red.transpose() * ep).norm(), 1e-12);
}

TEST(StiffnessJacobian, AtTheGoal) {
  oracle::Random rnd(63);
  const Pose g = rnd.pose();
  const Gains k = random_gains(rnd);
  const Mat6 B = stiffness_jacobian(g, g, k);
  EXPECT_LT((Mat3(B.topLeftCorner<3, 3>()) - k.Kp).norm(), 1e-12 * k.Kp.norm());
  EXPECT_LT(Mat3(B.topRightCorner<3, 3>()).norm(), 1e-15);
  EXPECT_EQ(Mat3(B.bottomLeftCorner<3, 3>()), Mat3::Zero());
  EXPECT_LT((Mat3(B.bottomRightCorner<3, 3>()) - (k.KR.trace() * Mat3::Identity() - k.KR)).norm(), 1e-12 * k.KR.norm());
  const Mat6 Bi = stiffness_jacobian(g, g, Gains::isotropic(5.0, 7.0, 1.0));
  EXPECT_LT((Mat3(Bi.bottomRightCorner<3, 3>()) - 14.0 * Mat3::Identity()).norm(), 1e-12);
}

TEST(RateIdentities, PotentialAndElasticForce) {
  oracle::Random rnd(64);
  for (int i = 0; i < 200; ++i) {
    const Pose g = rnd.pose();
    const Twist Vb = rnd.twist();
    const DesiredState des = random_desired(rnd);
    const Gains k = random_gains(rnd);
    const double scale = 1.0 + elastic_force(g, des.gd, k).norm() * velocity_error(g, Vb, des).norm();
    EXPECT_LT(potential_rate_identity_check(g, des.gd, Vb, des, k), 1e-5 * scale);
    EXPECT_LT(elastic_force_rate_identity_check(g, Vb, des, k), 1e-4 * scale);
  }
  const Pose g = rnd.pose();
  const DesiredState rest{rnd.pose(), Twist::Zero(), Twist::Zero()};
  EXPECT_LT(potential_rate_identity_check(g, rest.gd, Twist::Zero(), rest, random_gains(rnd)), 1e-12);
  const DesiredState at{g, rnd.twist(), Twist::Zero()};
  EXPECT_LT(potential_rate_identity_check(g, g, rnd.twist(), at, random_gains(rnd)), 1e-10);
}

TEST(RateIdentities, ElasticForceRateAgainstOwnFiniteDifference) {
  oracle::Random rnd(65);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const Pose g = rnd.pose();
    const Twist Vb = rnd.twist();
    const DesiredState des{rnd.pose(), rnd.twist(), Twist::Zero()};
    const Gains k = random_gains(rnd);
    const Twist fd = oracle::central(
        [&](double t) -> MatX { return elastic_force(right_step(g, Vb, t), right_step(des.gd, des.Vd_b, t), k); }, h);
    const Twist bk = stiffness_jacobian(g, des.gd, k) * velocity_error(g, Vb, des);
    EXPECT_LT((fd - bk).norm(), 1e-4 * (1.0 + bk.norm()));
  }
}

// Legacy identity for a diagonal rotational stiffness: dP/dt = e_V^T blkdiag(Kt, Kbar_o) e_g with
// Kbar_o = diag((k2 + k3) / 2, (k1 + k3) / 2, (k1 + k2) / 2). It holds for regulation with an
// isotropic Kt when the rotation error is about a single principal axis, and not in general.
TEST(LegacyDiagonalStiffness, HoldsForPrincipalAxisErrors) {
  const double k1 = 10.0, k2 = 100.0, k3 = 1000.0;
  Gains k = Gains::isotropic(50.0, 1.0, 1.0);
  k.KR = Vec3(k1, k2, k3).asDiagonal();
  Mat6 Kg = Mat6::Zero();
  Kg.topLeftCorner<3, 3>() = k.Kp;
  Kg.bottomRightCorner<3, 3>() = Vec3((k2 + k3) / 2, (k1 + k3) / 2, (k1 + k2) / 2).asDiagonal();

  oracle::Random rnd(66);
  const Mat3 Rd = rot_x(0.3) * rot_y(-0.8);
  const DesiredState des{{Rd, Vec3(0.1, 0.2, 0.3)}, Twist::Zero(), Twist::Zero()};
  for (const Mat3& Re : {rot_x(0.9), rot_y(-1.4), rot_z(2.5)}) {
    const Pose g{Rd * Re, rnd.vec3()};
    const Twist Vb = rnd.twist();
    const double fd = oracle::central([&](double t) { return potential(right_step(g, Vb, t), des.gd, k); }, 1e-6);
    const Twist eV = velocity_error(g, Vb, des);
    EXPECT_NEAR(fd, eV.dot(Kg * position_error(g, des.gd)), 1e-5 * (1.0 + std::abs(fd)));
  }
  const Pose g{Rd * rot_x(0.9) * rot_y(0.7), Vec3::Zero()};
  const Twist Vb = (Twist() << 0, 0, 0, 0.3, -0.5, 0.8).finished();
  const double fd = oracle::central([&](double t) { return potential(right_step(g, Vb, t), des.gd, k); }, 1e-6);
  EXPECT_GT(std::abs(fd - Vb.dot(Kg * position_error(g, des.gd))), 1.0);
}

TEST(SpatialErrors, Examples) {
  const Pose g{rot_x(0.4), Vec3(1, 2, 3)};
  const Twist Vs = Twist::LinSpaced(6, -1, 1);
  const auto [eg, eV] = spatial_errors(g, g, Vs, Vs);
  EXPECT_EQ(eg, Vec6::Zero());
  EXPECT_EQ(eV, Vec6::Zero());

  const Pose gd{rot_x(0.4), Vec3(0, 0, 0)};
  EXPECT_EQ(Vec3(spatial_errors(g, gd, Vs, Vs).first.tail<3>()), Vec3::Zero());
  EXPECT_LT((Vec3(spatial_errors(g, gd, Vs, Vs).first.head<3>()) - Vec3(1, 2, 3)).norm(), 1e-15);

  for (double th : {1e-3, 0.1, 0.5}) {
    const auto es = spatial_errors({rot_z(th), Vec3::Zero()}, Pose{}, Vs, Twist::Zero());
    // Column cross products r_di x r_i for Rd = I.
    Vec3 expected = Vec3::Zero();
    for (int c = 0; c < 3; ++c) expected += Vec3::Unit(c).cross(rot_z(th).col(c));
    EXPECT_LT((Vec3(es.first.tail<3>()) - expected).norm(), 1e-15);
    EXPECT_NEAR(es.first(5), 2.0 * std::sin(th), 1e-15);
    EXPECT_LT((es.second - Vs).norm(), 1e-15);
  }
}

TEST(DynamicError, Examples) {
  oracle::Random rnd(67);
  const Pose g = rnd.pose();
  EXPECT_NEAR(dynamic_error(g, g, Twist::Zero()), 0.0, 1e-14);
  EXPECT_NEAR(dynamic_error(g, g, Twist::Unit(0)), 1.0, 1e-14);
  for (int i = 0; i < 50; ++i) {
    const Pose a = rnd.pose(), b = rnd.pose();
    const Twist eV = rnd.twist();
    EXPECT_NEAR(dynamic_error(a, b, eV) - error_function(a, b), eV.squaredNorm(), 1e-12 * (1.0 + eV.squaredNorm()));
  }
}
