#pragma once

#include <utility>

#include "gic/se3.hpp"

namespace gic {

/// Impedance gains: translational stiffness Kp, rotational stiffness KR,
/// damping Kd and the reference-velocity gain lambda_g of the second control law.
struct Gains {
  Mat3 Kp = Mat3::Identity();
  Mat3 KR = Mat3::Identity();
  Mat6 Kd = Mat6::Identity();
  double lambda_g = 0.0;

  /// Kg = blkdiag(Kp, KR).
  [[nodiscard]] Mat6 Kg() const;
  /// Throws std::invalid_argument unless Kp, KR, Kd are SPD and lambda_g >= 0.
  void validate() const;

  /// Kg = diag(kp, kp, kp, ko, ko, ko), Kd = kd I.
  static Gains isotropic(double kp, double ko, double kd, double lambda_g = 0.0);
};

/// Desired pose with body-frame velocity and acceleration (gd_dot = gd * Vd_b^).
struct DesiredState {
  Pose gd;
  Twist Vd_b = Twist::Zero();
  Twist Vd_b_dot = Twist::Zero();
};

/// Psi = tr(I - Rd^T R) + 1/2 |p - pd|^2, i.e. 1/2 |I - gd^-1 g|_F^2.
double error_function(const Pose& g, const Pose& gd);

/// e_g = [R^T (p - pd); (Rd^T R - R^T Rd)^v], the gradient of Psi under right
/// perturbations g exp(eps eta^).
Vec6 position_error(const Pose& g, const Pose& gd);

/// Vd* = Ad(g^-1 gd) Vd_b: the desired velocity carried into the current body frame.
Twist desired_velocity_star(const Pose& g, const DesiredState& des);

/// d/dt Ad(g_ed) for g_ed = g^-1 gd moving with body velocities Vb and Vd_b.
Mat6 adjoint_rate(const Pose& g, const Twist& Vb, const DesiredState& des);

/// d/dt Vd* = (d/dt Ad(g_ed)) Vd_b + Ad(g_ed) Vd_b_dot, so that
/// d/dt e_V = Vb_dot - Vd*_dot holds identically.
Twist desired_accel_star(const Pose& g, const Twist& Vb, const DesiredState& des);

/// e_V = Vb - Vd*.
Twist velocity_error(const Pose& g, const Twist& Vb, const DesiredState& des);

/// P = tr(KR (I - Rd^T R)) + 1/2 (p - pd)^T Rd Kp Rd^T (p - pd).
double potential(const Pose& g, const Pose& gd, const Gains& gains);

/// Same value through 1/2 tr(psi_k^T psi_k) with psi_k built from sqrt(KR), sqrt(Kp).
double potential_trace_form(const Pose& g, const Pose& gd, const Gains& gains);

/// Principal square root of a symmetric positive definite matrix.
Mat3 spd_sqrt(const Mat3& K);

/// f_g = [R^T Rd Kp Rd^T (p - pd); (KR Rd^T R - R^T Rd KR)^v].
Wrench elastic_force(const Pose& g, const Pose& gd, const Gains& gains);

/// B_K with d/dt f_g = B_K e_V:
/// [[R^T Rd Kp Rd^T R, f_p^], [0, tr(R^T Rd KR) I - R^T Rd KR]].
Mat6 stiffness_jacobian(const Pose& g, const Pose& gd, const Gains& gains);

/// |dP/dt - f_g^T e_V| with dP/dt taken by five-point central differences (step 1e-3) along
/// g exp(t Vb^), gd exp(t Vd_b^).
double potential_rate_identity_check(const Pose& g, const Pose& gd, const Twist& Vb,
                                     const DesiredState& des, const Gains& gains);

/// |d f_g/dt - B_K e_V| (Euclidean norm), same finite-difference curves.
double elastic_force_rate_identity_check(const Pose& g, const Twist& Vb,
                                         const DesiredState& des, const Gains& gains);

/// Spatial-frame errors used by the benchmark law:
/// e_g^s = [p - pd; sum_i rd_i x r_i],  e_V^s = V^s - Vd^s.
std::pair<Vec6, Vec6> spatial_errors(const Pose& g, const Pose& gd, const Twist& Vs,
                                     const Twist& Vd_s);

/// Phi = Psi + e_V^T e_V.
double dynamic_error(const Pose& g, const Pose& gd, const Twist& eV);

}  // namespace gic
