#include "gic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gic {
namespace {

class Sampler {
 public:
  explicit Sampler(std::uint32_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Twist twist(double scale = 1.0) {
    Twist x;
    for (int i = 0; i < 6; ++i) x(i) = scale * normal();
    return x;
  }

  Pose pose() { return exp_se3(twist()); }

  VecX vector(int n, double scale) {
    VecX v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * uniform(-1.0, 1.0);
    return v;
  }

  Gains gains() {
    Gains g;
    g.Kp = spd3();
    g.KR = spd3();
    g.Kd = 50.0 * Mat6::Identity();
    return g;
  }

 private:
  Mat3 spd3() {
    Mat3 A;
    for (int i = 0; i < 9; ++i) A(i) = normal();
    return A * A.transpose() + Mat3::Identity();
  }

  std::mt19937 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

CheckResult left_invariance(Sampler& s, int n) {
  CheckResult r{"left-invariance of Psi", 0.0, 1e-12, ""};
  for (int i = 0; i < n; ++i) {
    const Pose g = s.pose(), gd = s.pose(), gl = s.pose();
    r.value = std::max(r.value, std::abs(error_function(compose(gl, g), compose(gl, gd)) -
                                         error_function(g, gd)));
  }
  return r;
}

template <class Value, class Gradient>
double perturbation_residual(Sampler& s, int n, Value&& value, Gradient&& gradient) {
  constexpr double eps = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Pose g = s.pose(), gd = s.pose();
    const Twist eta = s.twist();
    const double fd = (value(compose(g, exp_se3(eps * eta)), gd) -
                       value(compose(g, exp_se3(-eps * eta)), gd)) /
                      (2.0 * eps);
    worst = std::max(worst, std::abs(fd - gradient(g, gd).dot(eta)));
  }
  return worst;
}

CheckResult rate_identities(Sampler& s, int n, bool potential) {
  CheckResult r{potential ? "dP/dt = f_g^T e_V" : "f_g rate = B_K e_V", 0.0,
                potential ? 1e-5 : 1e-4, ""};
  for (int i = 0; i < n; ++i) {
    const Gains gains = s.gains();
    const Pose g = s.pose();
    DesiredState des;
    des.gd = s.pose();
    des.Vd_b = s.twist();
    const Twist Vb = s.twist();
    const double v = potential ? potential_rate_identity_check(g, des.gd, Vb, des, gains)
                               : elastic_force_rate_identity_check(g, Vb, des, gains);
    // Relative to the size of the rate itself.
    const double scale = 1.0 + elastic_force(g, des.gd, gains).norm() * Vb.norm();
    r.value = std::max(r.value, v / scale);
  }
  r.detail = "relative to 1 + |f_g||V|";
  return r;
}

CheckResult skew_symmetry(const RobotModel& model, Sampler& s, int n) {
  CheckResult r{"Mt_dot - 2 Ct skew-symmetric", 0.0, 1e-5, ""};
  const double h = 1e-6;
  for (int i = 0; i < n; ++i) {
    const JointState x{s.vector(model.dof(), M_PI), s.vector(model.dof(), 1.0)};
    try {
      const auto at = [&](double t) {
        return task_space_dynamics(model, {x.q + t * x.qdot, x.qdot}, Frame::Body).Mt;
      };
      const Mat6 Mt_dot = (at(h) - at(-h)) / (2.0 * h);
      const Mat6 N = Mt_dot - 2.0 * task_space_dynamics(model, x, Frame::Body).Ct;
      r.value = std::max(r.value, (N + N.transpose()).norm() / (1.0 + Mt_dot.norm()));
    } catch (const NearSingularJacobian&) {
      continue;
    }
  }
  r.detail = "relative to 1 + |Mt_dot|";
  return r;
}

CheckResult closed_loop(const RobotModel& model, ControllerKind kind, double lambda_g,
                        double duration) {
  Scenario sc = kind == ControllerKind::Gic2 ? tracking_scenario(model, kind, lambda_g)
                                             : regulation_scenario(model, kind);
  sc.duration = duration;
  CheckResult r{kind == ControllerKind::Gic2 ? "gic2 tracking: dW/dt residual"
                                             : "gic1 regulation: dV/dt residual",
                0.0, 1e-4, ""};
  try {
    const auto res = lyapunov_residuals(run_scenario(sc, {.probe_rates = true}));
    r.value = kind == ControllerKind::Gic2 ? res.max_W : res.max_V;
  } catch (const std::exception& e) {
    r.value = INFINITY;
    r.detail = e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const RobotModel& model, const VerifyOptions& o) {
  Sampler s(o.seed);
  std::vector<CheckResult> out;
  out.push_back(left_invariance(s, o.samples));

  CheckResult dpsi{"delta Psi = e_g^T eta", 0.0, 1e-6, ""};
  dpsi.value = perturbation_residual(s, o.samples, error_function, position_error);
  out.push_back(dpsi);

  const Gains gains = s.gains();
  CheckResult dP{"delta P = f_g^T eta", 0.0, 1e-6, ""};
  dP.value = perturbation_residual(
      s, o.samples, [&](const Pose& g, const Pose& gd) { return potential(g, gd, gains); },
      [&](const Pose& g, const Pose& gd) { return elastic_force(g, gd, gains); });
  out.push_back(dP);

  out.push_back(rate_identities(s, o.samples, true));
  out.push_back(rate_identities(s, o.samples, false));
  out.push_back(skew_symmetry(model, s, o.samples));

  if (o.simulate && model.dof() == 6) {
    out.push_back(closed_loop(model, ControllerKind::Gic1, 0.0, o.sim_duration));
    out.push_back(closed_loop(model, ControllerKind::Gic2, 0.02, o.sim_duration));
  }
  return out;
}

}  // namespace gic
