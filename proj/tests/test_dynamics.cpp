#include <cmath>

#include <gtest/gtest.h>

#include "gic/cli_io.hpp"
#include "gic/dynamics.hpp"
#include "support/oracles.hpp"

using namespace gic;

namespace {

RobotModel model(const char* file) {
  return load_robot_model(std::string(GIC_DATA_DIR) + "/models/" + file);
}

bool is_spd(const MatX& M) {
  Eigen::LLT<MatX> llt(M);
  return llt.info() == Eigen::Success;
}

}  // namespace

TEST(MassMatrix, MatchesKineticEnergy) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(41);
  for (int i = 0; i < 50; ++i) {
    const VecX q = rnd.vec(6, M_PI);
    const MatX M = mass_matrix(m, q);
    EXPECT_LT((M - oracle::mass_matrix(m, q)).norm(), 1e-5 * (1.0 + M.norm()));
    EXPECT_LT((M - M.transpose()).norm(), 1e-12);
    EXPECT_TRUE(is_spd(M));
  }
}

TEST(MassMatrix, PendulumHasUnitInertia) {
  const RobotModel m = model("pendulum1.json");
  EXPECT_NEAR(mass_matrix(m, VecX::Zero(1))(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(mass_matrix(m, VecX::Constant(1, 1.3))(0, 0), 1.0, 1e-9);
}

TEST(MassMatrix, PartialsMatchFiniteDifference) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(42);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const VecX q = rnd.vec(6, M_PI);
    const auto analytic = mass_matrix_partials(m, q, MassDerivative::Analytic);
    const auto numeric = mass_matrix_partials(m, q, MassDerivative::FiniteDifference);
    ASSERT_EQ(analytic.size(), 6u);
    for (int k = 0; k < 6; ++k) {
      const VecX e = VecX::Unit(6, k);
      const MatX fd = (mass_matrix(m, q + h * e) - mass_matrix(m, q - h * e)) / (2 * h);
      EXPECT_LT((analytic[k] - fd).norm(), 1e-6);
      EXPECT_LT((analytic[k] - numeric[k]).norm(), 1e-6);
    }
  }
}

TEST(Coriolis, SkewSymmetryAndEnergyIdentity) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(43);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const VecX q = rnd.vec(6, M_PI), qd = rnd.vec(6, 2.0);
    const MatX C = coriolis_matrix(m, q, qd);
    const MatX Mdot = (mass_matrix(m, q + h * qd) - mass_matrix(m, q - h * qd)) / (2 * h);
    const MatX N = Mdot - 2.0 * C;
    EXPECT_LT((N + N.transpose()).norm(), 1e-6 * (1.0 + Mdot.norm()));
    EXPECT_NEAR(qd.dot(N * qd), 0.0, 1e-6 * (1.0 + qd.squaredNorm() * Mdot.norm()));
    // C qd = Mdot qd - 1/2 d(qd^T M qd)/dq
    VecX grad(6);
    for (int k = 0; k < 6; ++k) {
      const VecX e = VecX::Unit(6, k);
      grad(k) = (qd.dot(mass_matrix(m, q + h * e) * qd) - qd.dot(mass_matrix(m, q - h * e) * qd)) / (2 * h);
    }
    EXPECT_LT((C * qd - (Mdot * qd - 0.5 * grad)).norm(), 1e-5 * (1.0 + qd.squaredNorm()));
  }
}

TEST(Coriolis, ZeroVelocityAndFiniteDifferenceMethodAgree) {
  const RobotModel m = model("ur5e_approx.json");
  const VecX q = VecX::LinSpaced(6, -1, 1), qd = VecX::LinSpaced(6, 1, -0.5);
  EXPECT_EQ(coriolis_matrix(m, q, VecX::Zero(6)), MatX::Zero(6, 6));
  EXPECT_LT((coriolis_matrix(m, q, qd) - coriolis_matrix(m, q, qd, MassDerivative::FiniteDifference)).norm(),
            1e-6);
}

TEST(Gravity, MatchesPotentialGradient) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(44);
  for (int i = 0; i < 50; ++i) {
    const VecX q = rnd.vec(6, M_PI);
    EXPECT_NEAR(potential_energy(m, q), oracle::potential_energy(m, q), 1e-10);
    EXPECT_LT((gravity_vector(m, q) - oracle::gravity(m, q)).norm(), 1e-6);
  }
}

TEST(Gravity, PendulumTorque) {
  const RobotModel m = model("pendulum1.json");
  EXPECT_NEAR(gravity_vector(m, VecX::Zero(1))(0), 9.81, 1e-12);
  EXPECT_NEAR(gravity_vector(m, VecX::Constant(1, M_PI / 2))(0), 0.0, 1e-12);
}

TEST(JointDynamics, MatchesIndividualTerms) {
  const RobotModel m = model("ur5e_approx.json");
  const JointState s{VecX::LinSpaced(6, 0.2, 1.2), VecX::LinSpaced(6, -0.4, 0.6)};
  const JointDynamics d = joint_dynamics(m, s);
  EXPECT_LT((d.M - mass_matrix(m, s.q)).norm(), 1e-14);
  EXPECT_LT((d.C - coriolis_matrix(m, s.q, s.qdot)).norm(), 1e-14);
  EXPECT_LT((d.G - gravity_vector(m, s.q)).norm(), 1e-14);
}

TEST(ForwardDynamics, SatisfiesEquationOfMotion) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(45);
  for (int i = 0; i < 20; ++i) {
    const JointState s{rnd.vec(6, M_PI), rnd.vec(6, 1.0)};
    const VecX T = rnd.vec(6, 20.0), Te = rnd.vec(6, 5.0);
    const VecX qdd = forward_dynamics(m, s, T, Te);
    const JointDynamics d = joint_dynamics(m, s);
    EXPECT_LT((d.M * qdd + d.C * s.qdot + d.G - T - Te).norm(), 1e-9);
  }
  const JointState rest{VecX::Zero(6), VecX::Zero(6)};
  EXPECT_LT(forward_dynamics(m, rest, gravity_vector(m, rest.q), VecX::Zero(6)).norm(), 1e-10);
}

TEST(TaskSpace, PreservesKineticEnergyAndPower) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(46);
  for (Frame frame : {Frame::Body, Frame::Spatial, Frame::World}) {
    for (int i = 0; i < 20; ++i) {
      VecX q = rnd.vec(6, M_PI);
      q(4) = 0.5 + 0.5 * std::abs(q(4));
      const JointState s{q, rnd.vec(6, 1.0)};
      const TaskSpaceDynamics ts = task_space_dynamics(m, s, frame);
      const JointDynamics d = joint_dynamics(m, s);
      const Vec6 V = ts.J * s.qdot;
      const double scale = 1.0 + s.qdot.squaredNorm() * d.M.norm();
      EXPECT_NEAR(V.dot(ts.Mt * V), s.qdot.dot(d.M * s.qdot), 1e-9 * scale);
      EXPECT_NEAR(V.dot(ts.Ct * V), s.qdot.dot(d.C * s.qdot - d.M * ts.J.inverse() * ts.Jdot * s.qdot),
                  1e-8 * scale);
      EXPECT_NEAR(V.dot(ts.Gt), s.qdot.dot(d.G), 1e-9 * (1.0 + d.G.norm() * s.qdot.norm()));
      EXPECT_EQ(ts.frame, frame);
    }
  }
}

TEST(TaskSpace, MtDotMinusTwoCtIsSkew) {
  const RobotModel m = model("ur5e_approx.json");
  oracle::Random rnd(47);
  const double h = 1e-6;
  for (Frame frame : {Frame::Body, Frame::Spatial, Frame::World}) {
    for (int i = 0; i < 20; ++i) {
      VecX q = rnd.vec(6, M_PI);
      q(4) = 0.5 + 0.5 * std::abs(q(4));
      const VecX qd = rnd.vec(6, 1.0);
      const TaskSpaceDynamics ts = task_space_dynamics(m, {q, qd}, frame);
      const Mat6 Mdot = (task_space_dynamics(m, {q + h * qd, qd}, frame).Mt -
                         task_space_dynamics(m, {q - h * qd, qd}, frame).Mt) /
                        (2 * h);
      const Mat6 N = Mdot - 2.0 * ts.Ct;
      EXPECT_LT((N + N.transpose()).norm(), 1e-5 * (1.0 + Mdot.norm())) << "frame " << int(frame);
    }
  }
}

TEST(TaskSpace, RejectsSingularConfiguration) {
  const RobotModel m = model("ur5e_approx.json");
  VecX q = VecX::LinSpaced(6, 0.3, 1.0);
  q(4) = 0.0;
  EXPECT_THROW(task_space_dynamics(m, {q, VecX::Zero(6)}, Frame::Body), NearSingularJacobian);
  EXPECT_GT(condition_number(body_jacobian(m, q)), kJacobianConditionLimit);
  q(4) = 1.0;
  EXPECT_NO_THROW(task_space_dynamics(m, {q, VecX::Zero(6)}, Frame::Body));
}
