#include "ehgo/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace ehgo {

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

void require_valid(const EulerAngles& eta) {
  if (!eta.valid()) throw GimbalLockError(eta.pitch);
}

}  // namespace

Mat3 euler_rate_transform(const EulerAngles& eta) {
  require_valid(eta);
  const double sphi = std::sin(eta.roll), cphi = std::cos(eta.roll);
  const double sth = std::sin(eta.pitch), cth = std::cos(eta.pitch);
  Mat3 w;
  w << 1.0, 0.0, -sth,
       0.0, cphi, sphi * cth,
       0.0, -sphi, cphi * cth;
  return w;
}

Mat3 euler_rate_transform_derivative(const EulerAngles& eta, const Vec3& eta_rate) {
  require_valid(eta);
  const double sphi = std::sin(eta.roll), cphi = std::cos(eta.roll);
  const double sth = std::sin(eta.pitch), cth = std::cos(eta.pitch);
  const double dphi = eta_rate.x(), dth = eta_rate.y();
  Mat3 wd;
  wd << 0.0, 0.0, -cth * dth,
        0.0, -sphi * dphi, cphi * cth * dphi - sphi * sth * dth,
        0.0, -cphi * dphi, -sphi * cth * dphi - cphi * sth * dth;
  return wd;
}

AttitudeMatrices attitude_matrices(const EulerAngles& eta, const Vec3& eta_rate,
                                   const Vec3& body_inertia) {
  const Mat3 w = euler_rate_transform(eta);
  const Mat3 wd = euler_rate_transform_derivative(eta, eta_rate);
  const Mat3 j = body_inertia.asDiagonal();
  const Vec3 body_momentum = j * (w * eta_rate);
  AttitudeMatrices out;
  out.inertia = w.transpose() * j * w;
  out.coriolis = w.transpose() * j * wd - w.transpose() * skew(body_momentum) * w;
  return out;
}

Vec3 thrust_direction(const EulerAngles& eta) {
  const double sphi = std::sin(eta.roll), cphi = std::cos(eta.roll);
  const double sth = std::sin(eta.pitch), cth = std::cos(eta.pitch);
  const double spsi = std::sin(eta.yaw), cpsi = std::cos(eta.yaw);
  return {cpsi * sth * cphi + spsi * sphi, spsi * sth * cphi - cpsi * sphi, cth * cphi};
}

Vec3 translational_accel(const Vec3& lift, const Vec3& force_disturbance,
                         const VehicleParams& params) {
  return (lift - params.mass * params.gravity * kUnitZ + force_disturbance) / params.mass;
}

Vec3 rotational_accel(const EulerAngles& eta, const Vec3& eta_rate, const Vec3& torque,
                      const Vec3& torque_disturbance, const Vec3& body_inertia) {
  const AttitudeMatrices mc = attitude_matrices(eta, eta_rate, body_inertia);
  return mc.inertia.ldlt().solve(torque + torque_disturbance - mc.coriolis * eta_rate);
}

Vec3 generalized_to_body_torque(const EulerAngles& eta, const Vec3& torque) {
  return euler_rate_transform(eta).transpose().partialPivLu().solve(torque);
}

StateDerivative state_derivative(const RigidBodyState& state, double thrust, const Vec3& torque,
                                 const Vec3& force_disturbance, const Vec3& torque_disturbance,
                                 const VehicleParams& params) {
  StateDerivative d;
  d.velocity = state.velocity;
  d.acceleration =
      translational_accel(thrust * thrust_direction(state.attitude), force_disturbance, params);
  d.attitude_rate = state.attitude_rate;
  d.attitude_accel = rotational_accel(state.attitude, state.attitude_rate, torque,
                                      torque_disturbance, params.inertia);
  return d;
}

Eigen::Matrix4d allocation_matrix(const VehicleParams& params) {
  const double r = 0.5 * params.axis_distance;
  const double k = params.yaw_drag_coefficient;
  Eigen::Matrix4d a;
  for (int i = 0; i < 4; ++i) {
    const double angle = std::numbers::pi / 4.0 + i * std::numbers::pi / 2.0;
    const double x = r * std::cos(angle);
    const double y = r * std::sin(angle);
    const double spin = (i % 2 == 0) ? 1.0 : -1.0;
    a(0, i) = 1.0;
    a(1, i) = y;
    a(2, i) = -x;
    a(3, i) = spin * k;
  }
  return a;
}

MixResult motor_mixing(double total_thrust, const Vec3& body_torque,
                       const VehicleParams& params) {
  const Eigen::Vector4d wrench(total_thrust, body_torque.x(), body_torque.y(), body_torque.z());
  const Eigen::Vector4d f = allocation_matrix(params).partialPivLu().solve(wrench);
  MixResult out;
  for (int i = 0; i < 4; ++i) {
    out.raw[i] = f(i);
    out.thrusts[i] = std::clamp(f(i), 0.0, params.max_rotor_thrust);
    if (f(i) < 0.0 || f(i) > params.max_rotor_thrust) out.infeasible = true;
  }
  return out;
}

std::pair<double, Vec3> rotor_wrench(const RotorThrusts& thrusts, const VehicleParams& params) {
  const Eigen::Vector4d f(thrusts[0], thrusts[1], thrusts[2], thrusts[3]);
  const Eigen::Vector4d w = allocation_matrix(params) * f;
  return {w(0), Vec3(w(1), w(2), w(3))};
}

}  // namespace ehgo
