#include "gic/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gic {
namespace {

constexpr double kTimeTol = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

StateRate state_rate(const Scenario& s, int piece, double t, const JointState& x) {
  auto r = closed_loop_rate(s, piece, t, x);
  return {x.qdot, std::move(r.qdd)};
}

// Interval [start, end) of a trajectory piece.
std::pair<double, double> piece_interval(const Trajectory& trajectory, int piece) {
  const auto breaks = trajectory_breakpoints(trajectory);
  const double start = piece == 0 ? 0.0 : breaks[piece - 1];
  const double end = piece < static_cast<int>(breaks.size())
                         ? breaks[piece]
                         : std::numeric_limits<double>::infinity();
  return {start, end};
}

// dV/dt and dW/dt by five-point differences of the monitors along the flow.
// Offsets that would leave the current piece switch to one-sided stencils.
std::pair<double, double> probe_rates(const Scenario& s, int piece, double t,
                                      const JointState& x, double h) {
  const auto [start, end] = piece_interval(s.trajectory, piece);
  int first = -2;
  if (t - 2.0 * h < start - kTimeTol) {
    first = 0;
  } else if (t + 2.0 * h > end + kTimeTol) {
    first = -4;
  }
  // One-sided stencils carry a larger error constant.
  if (first != -2) h *= 0.25;
  std::array<double, 5> V{}, W{};
  const auto sample = [&](int j, const JointState& xj) {
    const auto m = lyapunov_monitors(s, piece, t + j * h, xj);
    V[j - first] = m.V;
    W[j - first] = m.W;
  };
  sample(0, x);
  JointState fwd = x;
  for (int j = 1; j <= first + 4; ++j) {
    fwd = rk4_step(s, piece, fwd, t + (j - 1) * h, h);
    sample(j, fwd);
  }
  JointState back = x;
  for (int j = -1; j >= first; --j) {
    back = rk4_step(s, piece, back, t + (j + 1) * h, -h);
    sample(j, back);
  }
  const auto diff = [&](const std::array<double, 5>& f) {
    switch (first) {
      case 0: return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
      case -4: return (3 * f[0] - 16 * f[1] + 36 * f[2] - 48 * f[3] + 25 * f[4]) / (12 * h);
      default: return (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
    }
  };
  return {diff(V), diff(W)};
}

bool finite(const JointState& x) { return x.q.allFinite() && x.qdot.allFinite(); }

}  // namespace

// ---------------------------------------------------------------------------

void validate(const Trajectory& trajectory) {
  std::visit(Overloaded{
                 [](const RegulationWaypoints& w) {
                   if (w.waypoints.empty()) {
                     throw std::invalid_argument("regulation trajectory needs a waypoint");
                   }
                   if (w.waypoints.front().t_start != 0.0) {
                     throw std::invalid_argument("first waypoint must start at t = 0");
                   }
                   for (std::size_t i = 0; i < w.waypoints.size(); ++i) {
                     if (!is_valid(w.waypoints[i].gd)) {
                       throw std::invalid_argument("waypoint " + std::to_string(i) +
                                                   " is not a valid pose");
                     }
                     if (i > 0 && !(w.waypoints[i].t_start > w.waypoints[i - 1].t_start)) {
                       throw std::invalid_argument("waypoint start times must increase");
                     }
                   }
                 },
                 [](const SinusoidTrack& s) {
                   if (!is_rotation(s.R0)) {
                     throw std::invalid_argument("sinusoid orientation is not a rotation");
                   }
                 },
             },
             trajectory);
}

int trajectory_piece(const Trajectory& trajectory, double t) {
  const auto* w = std::get_if<RegulationWaypoints>(&trajectory);
  if (w == nullptr) return 0;
  int piece = 0;
  for (std::size_t i = 1; i < w->waypoints.size(); ++i) {
    if (w->waypoints[i].t_start <= t + kTimeTol) piece = static_cast<int>(i);
  }
  return piece;
}

std::vector<double> trajectory_breakpoints(const Trajectory& trajectory) {
  std::vector<double> out;
  if (const auto* w = std::get_if<RegulationWaypoints>(&trajectory)) {
    for (std::size_t i = 1; i < w->waypoints.size(); ++i) out.push_back(w->waypoints[i].t_start);
  }
  return out;
}

DesiredState desired_state_in_piece(const Trajectory& trajectory, int piece, double t) {
  return std::visit(
      Overloaded{
          [&](const RegulationWaypoints& w) {
            DesiredState d;
            d.gd = w.waypoints.at(piece).gd;
            return d;
          },
          [&](const SinusoidTrack& s) {
            Vec3 p, pdot, pddot;
            for (int i = 0; i < 3; ++i) {
              const auto& a = s.axes[i];
              const double c = std::cos(a.omega * t);
              const double sn = std::sin(a.omega * t);
              p(i) = a.offset + a.cos_amp * c + a.sin_amp * sn;
              pdot(i) = a.omega * (-a.cos_amp * sn + a.sin_amp * c);
              pddot(i) = -a.omega * a.omega * (a.cos_amp * c + a.sin_amp * sn);
            }
            DesiredState d;
            d.gd = {s.R0, p};
            d.Vd_b = make_twist(s.R0.transpose() * pdot, Vec3::Zero());
            d.Vd_b_dot = make_twist(s.R0.transpose() * pddot, Vec3::Zero());
            return d;
          },
      },
      trajectory);
}

DesiredState desired_state_at(const Trajectory& trajectory, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::out_of_range("desired state requested at t = " + std::to_string(t));
  }
  return desired_state_in_piece(trajectory, trajectory_piece(trajectory, t), t);
}

// ---------------------------------------------------------------------------

void Scenario::validate() const {
  robot.validate();
  gains.validate();
  gic::validate(trajectory);
  if (!(dt > 0.0)) throw std::invalid_argument("scenario '" + name + "': dt must be positive");
  if (!(duration >= dt)) {
    throw std::invalid_argument("scenario '" + name + "': duration must be at least dt");
  }
  check_dimension(robot, initial.q, "initial q");
  check_dimension(robot, initial.qdot, "initial qdot");
  if (!external_wrench.allFinite()) {
    throw std::invalid_argument("scenario '" + name + "': external wrench is not finite");
  }
}

namespace {

Mat3 start_rotation() {
  Mat3 R;
  R << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  return R;
}

VecX vec6(std::initializer_list<double> v) {
  VecX out(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

}  // namespace

Scenario regulation_scenario(RobotModel robot, ControllerKind controller) {
  Mat3 Rd1, Rd2;
  Rd1 << 0, -1, 0, 0, 0, -1, 1, 0, 0;
  Rd2 << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  RegulationWaypoints w;
  w.waypoints = {{0.0, {Rd1, {-0.4, 0.3, 0.2}}},
                 {3.0, {Rd2, {-0.4, -0.3, 0.2}}},
                 {6.0, {Rd1, {-0.6, -0.3, 0.2}}},
                 {9.0, {Rd2, {-0.6, 0.3, 0.2}}},
                 {12.0, {Rd1, {-0.4, 0.3, 0.2}}}};
  Scenario s;
  s.name = "regulation";
  s.robot = std::move(robot);
  s.controller = controller;
  s.gains = Gains::isotropic(100.0, 100.0, 50.0);
  s.duration = 15.0;
  s.dt = 1e-3;
  s.initial = {vec6({0.1721, -1.0447, 1.6729, -0.6282, 0.1721, 0.0}), VecX::Zero(6)};
  s.trajectory = std::move(w);
  return s;
}

Scenario tracking_scenario(RobotModel robot, ControllerKind controller, double lambda_g) {
  SinusoidTrack track;
  track.axes[0] = {-0.52, -0.2, 0.0, M_PI};
  track.axes[1] = {0.0, 0.0, 0.2, M_PI};
  track.axes[2] = {0.2, 0.0, 0.1, 0.5 * M_PI};
  track.R0 = start_rotation();
  Scenario s;
  s.name = "tracking";
  s.robot = std::move(robot);
  s.controller = controller;
  s.gains = Gains::isotropic(100.0, 100.0, 50.0, lambda_g);
  s.duration = 8.0;
  s.dt = 1e-3;
  s.initial = {vec6({0.4, -0.5, 0.4, 0.6, -0.5, 0.2}), VecX::Zero(6)};
  s.trajectory = track;
  return s;
}

SimulationError::SimulationError(std::size_t step_index, const std::string& what)
    : std::runtime_error("simulation aborted at step " + std::to_string(step_index) + ": " +
                         what),
      step(step_index) {}

// ---------------------------------------------------------------------------

ClosedLoopRate closed_loop_rate(const Scenario& s, int piece, double t, const JointState& x) {
  const DesiredState des = desired_state_in_piece(s.trajectory, piece, t);
  const JointDynamics joint = joint_dynamics(s.robot, x);
  ClosedLoopRate out;
  out.control = compute_control(s.controller, s.robot, x, des, s.gains, joint);
  VecX Te = VecX::Zero(s.robot.dof());
  if (!s.external_wrench.isZero(0.0)) {
    Te = body_jacobian(s.robot, x.q).transpose() * s.external_wrench;
  }
  out.qdd = forward_dynamics(joint, x, out.control.tau, Te);
  out.tau = out.control.tau;
  return out;
}

JointState rk4_step(const Scenario& s, int piece, const JointState& x, double t, double dt) {
  return rk4([&](double tt, const JointState& xx) { return state_rate(s, piece, tt, xx); }, x, t, dt);
}

JointState rk4_step(const Scenario& s, const JointState& x, double t, double dt) {
  return rk4_step(s, trajectory_piece(s.trajectory, t), x, t, dt);
}

LyapunovMonitors lyapunov_monitors(const Scenario& s, int piece, double t,
                                   const JointState& x) {
  LyapunovMonitors m;
  m.des = desired_state_in_piece(s.trajectory, piece, t);
  m.g = forward_kinematics(s.robot, x.q);
  const Mat6X Jb = body_jacobian(s.robot, x.q);
  const double cond = condition_number(Jb);
  if (!(cond <= kJacobianConditionLimit)) throw NearSingularJacobian(cond, kJacobianConditionLimit);
  const Twist Vb = Jb * x.qdot;
  const MatX M = mass_matrix(s.robot, x.q);

  m.Psi = error_function(m.g, m.des.gd);
  m.P = potential(m.g, m.des.gd, s.gains);
  m.e_g = position_error(m.g, m.des.gd);
  m.e_V = velocity_error(m.g, Vb, m.des);
  m.f_g = elastic_force(m.g, m.des.gd, s.gains);
  m.Phi = m.Psi + m.e_V.squaredNorm();
  const Twist e_ref = m.e_V + s.gains.lambda_g * m.f_g;
  // 1/2 e^T Mt e = 1/2 u^T M u with u = J^-1 e. Writing u = qdot - J^-1 (Vb - e) keeps
  // the regulation case free of Jacobian solves, which lose digits near singularities.
  const auto joint_rate = [&](const Twist& e) -> VecX {
    const Twist target = Vb - e;
    if (target.isZero(0.0)) return x.qdot;
    if (Jb.cols() == 6) return x.qdot - Jb.partialPivLu().solve(target);
    const MatX Jpinv = Jb.completeOrthogonalDecomposition().pseudoInverse();
    if (Jb.cols() < 6) return x.qdot - Jpinv * target;
    return Jpinv * e;
  };
  const VecX u = joint_rate(m.e_V);
  const VecX u_ref = joint_rate(e_ref);
  m.K = 0.5 * u.dot(M * u);
  m.V = m.K + m.P;
  m.W = 0.5 * u_ref.dot(M * u_ref) + m.P;
  m.decay_V = m.e_V.dot(s.gains.Kd * m.e_V);
  m.decay_W = e_ref.dot(s.gains.Kd * e_ref) + s.gains.lambda_g * m.f_g.squaredNorm();
  return m;
}

Trace run_scenario(const Scenario& s, const RunOptions& options) {
  s.validate();
  const auto steps = static_cast<std::size_t>(std::floor(s.duration / s.dt + kTimeTol));
  const auto breaks = trajectory_breakpoints(s.trajectory);

  Trace trace;
  trace.scenario = s.name;
  trace.controller = s.controller;
  trace.tracking = s.is_tracking();
  trace.dof = s.robot.dof();
  trace.gains = s.gains;
  trace.dt = s.dt;
  trace.records.reserve(steps + 1);

  JointState x = s.initial;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    try {
      const int piece = trajectory_piece(s.trajectory, t);
      const auto m = lyapunov_monitors(s, piece, t, x);
      TraceRecord r;
      r.t = t;
      r.piece = piece;
      r.q = x.q;
      r.qdot = x.qdot;
      r.p = m.g.p;
      r.quat_wxyz = to_quaternion_wxyz(m.g.R);
      r.p_d = m.des.gd.p;
      r.Psi = m.Psi;
      r.Phi = m.Phi;
      r.P = m.P;
      r.K = m.K;
      r.V = m.V;
      r.W = m.W;
      r.decay_V = m.decay_V;
      r.decay_W = m.decay_W;
      r.e_g = m.e_g;
      r.e_V = m.e_V;
      r.f_g = m.f_g;
      r.tau = closed_loop_rate(s, piece, t, x).tau;
      if (options.probe_rates) {
        const auto [dV, dW] = probe_rates(s, piece, t, x, options.probe_step);
        r.V_rate = dV;
        r.W_rate = dW;
      }
      trace.records.push_back(std::move(r));
      if (k == steps) break;

      // Integrate to the next record, splitting at set-point switches.
      const double t_next = static_cast<double>(k + 1) * s.dt;
      double t0 = t;
      for (double b : breaks) {
        if (b > t0 + kTimeTol && b < t_next - kTimeTol) {
          x = rk4_step(s, trajectory_piece(s.trajectory, t0), x, t0, b - t0);
          t0 = b;
        }
      }
      x = rk4_step(s, trajectory_piece(s.trajectory, t0), x, t0, t_next - t0);
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError(k, e.what());
    }
    if (!finite(x)) throw SimulationError(k + 1, "state is not finite");
  }
  trace.summary = summarize(trace);
  return trace;
}

double rms(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("rms of an empty series");
  double acc = 0.0;
  for (double v : series) acc += v * v;
  return std::sqrt(acc / static_cast<double>(series.size()));
}

TraceSummary summarize(const Trace& trace) {
  TraceSummary out;
  if (trace.records.empty()) return out;
  std::vector<double> buf(trace.records.size());
  const auto column = [&](auto&& get) {
    std::transform(trace.records.begin(), trace.records.end(), buf.begin(), get);
    return rms(buf);
  };
  for (int i = 0; i < 3; ++i) {
    out.rms_position(i) = column([i](const TraceRecord& r) { return r.p(i) - r.p_d(i); });
  }
  out.rms_psi = column([](const TraceRecord& r) { return r.Psi; });
  out.rms_phi = column([](const TraceRecord& r) { return r.Phi; });
  return out;
}

LyapunovResiduals lyapunov_residuals(const Trace& trace) {
  LyapunovResiduals out;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (!r.V_rate || !r.W_rate) continue;
    ++out.samples;
    const double rv = std::abs(*r.V_rate + r.decay_V);
    const double rw = std::abs(*r.W_rate + r.decay_W);
    if (rv > out.max_V) {
      out.max_V = rv;
      out.worst_V_step = k;
    }
    if (rw > out.max_W) {
      out.max_W = rw;
      out.worst_W_step = k;
    }
  }
  if (out.samples == 0) {
    throw std::invalid_argument("trace carries no rate probes; rerun with probe_rates");
  }
  return out;
}

MonotonicityReport monotonicity(const Trace& trace) {
  MonotonicityReport out;
  out.max_V_increase = -std::numeric_limits<double>::infinity();
  out.max_W_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& a = trace.records[k - 1];
    const auto& b = trace.records[k];
    if (a.piece != b.piece) continue;
    out.max_V_increase = std::max(out.max_V_increase, b.V - a.V);
    out.max_W_increase = std::max(out.max_W_increase, b.W - a.W);
  }
  return out;
}

}  // namespace gic
