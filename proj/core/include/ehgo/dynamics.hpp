#pragma once

// Rigid-body model of the airframe:
//   m v_dot = F - m g e3 + d_f
//   M(eta) eta_ddot + C(eta, eta_dot) eta_dot = tau + d_tau
// with M = W^T J W built from the diagonal body inertia J and the Euler-rate
// map W. tau and d_tau are generalized torques in Euler coordinates; they
// coincide with body torques at zero attitude.

#include "ehgo/types.hpp"

#include <array>

namespace ehgo {

struct AttitudeMatrices {
  Mat3 inertia;   // M(eta)
  Mat3 coriolis;  // C(eta, eta_dot)
};

/// W(eta): maps Euler rates to body angular rates. Throws GimbalLockError
/// when pitch leaves the valid region.
Mat3 euler_rate_transform(const EulerAngles& eta);

/// Time derivative of W along eta_dot.
Mat3 euler_rate_transform_derivative(const EulerAngles& eta, const Vec3& eta_rate);

/// M = W^T J W, C = W^T J W_dot - W^T [J W eta_dot]x W. This C satisfies
/// the skew-symmetry of M_dot - 2C.
AttitudeMatrices attitude_matrices(const EulerAngles& eta, const Vec3& eta_rate,
                                   const Vec3& body_inertia);

/// Body z axis expressed in the world frame.
Vec3 thrust_direction(const EulerAngles& eta);

Vec3 translational_accel(const Vec3& lift, const Vec3& force_disturbance,
                         const VehicleParams& params);

Vec3 rotational_accel(const EulerAngles& eta, const Vec3& eta_rate, const Vec3& torque,
                      const Vec3& torque_disturbance, const Vec3& body_inertia);

/// Euler-coordinate torque -> body torque (W^-T tau).
Vec3 generalized_to_body_torque(const EulerAngles& eta, const Vec3& torque);

/// Time derivative of the 12-dimensional state for collective thrust
/// `thrust` along body z, generalized torque and disturbances.
struct StateDerivative {
  Vec3 velocity;
  Vec3 acceleration;
  Vec3 attitude_rate;
  Vec3 attitude_accel;
};

StateDerivative state_derivative(const RigidBodyState& state, double thrust, const Vec3& torque,
                                 const Vec3& force_disturbance, const Vec3& torque_disturbance,
                                 const VehicleParams& params);

// --- rotor allocation (diagnostic) -------------------------------------------

using RotorThrusts = std::array<double, 4>;

struct MixResult {
  RotorThrusts thrusts{};  // clamped to [0, max_rotor_thrust]
  RotorThrusts raw{};      // exact allocation-matrix solution
  bool infeasible = false;
};

/// Allocation matrix mapping rotor thrusts to [F, tau_x, tau_y, tau_z] for
/// the X frame. Rotors sit at 45, 135, 225 and 315 degrees; the 45/225 pair
/// spins so that its drag torque is positive about z.
Eigen::Matrix4d allocation_matrix(const VehicleParams& params);

MixResult motor_mixing(double total_thrust, const Vec3& body_torque, const VehicleParams& params);

/// Inverse of motor_mixing: (F, tau) produced by a set of rotor thrusts.
std::pair<double, Vec3> rotor_wrench(const RotorThrusts& thrusts, const VehicleParams& params);

}  // namespace ehgo
