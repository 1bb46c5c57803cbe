#include "ehgo/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ehgo {

std::string_view to_string(SatMode mode) {
  switch (mode) {
    case SatMode::bounded: return "bounded";
    case SatMode::slope_limited: return "slope_limited";
    case SatMode::none: return "none";
  }
  return "unknown";
}

SatMode sat_mode_from_string(std::string_view name) {
  if (name == "bounded") return SatMode::bounded;
  if (name == "slope_limited") return SatMode::slope_limited;
  if (name == "none") return SatMode::none;
  throw ConfigError("unknown saturation mode '" + std::string(name) + "'");
}

SatConfig::SatConfig(double bound, double h, SatMode mode) : bound_(bound), h_(h), mode_(mode) {
  if (!(bound > 0.0)) throw ConfigError("saturation bound must be > 0");
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("saturation h must be in (0, 1]");
}

double sat(double v, double h, SatMode mode) {
  const double a = std::abs(v);
  if (mode == SatMode::none || a <= 1.0) return v;
  const double excess = a - 1.0;
  double mag = 0.0;
  if (mode == SatMode::bounded) {
    mag = 1.0 + h * std::tanh(excess / h);
  } else {
    mag = 1.0 + h * excess + (1.0 - h) * (1.0 - std::exp(-excess));
  }
  return std::copysign(mag, v);
}

double sat_derivative(double v, double h, SatMode mode) {
  const double a = std::abs(v);
  if (mode == SatMode::none || a <= 1.0) return 1.0;
  const double excess = a - 1.0;
  if (mode == SatMode::bounded) {
    const double t = std::tanh(excess / h);
    return 1.0 - t * t;
  }
  return h + (1.0 - h) * std::exp(-excess);
}

Vec3 saturate(const Vec3& demand, const SatConfig& cfg) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = cfg.bound() * sat(demand[i] / cfg.bound(), cfg);
  return out;
}

bool saturation_active(const Vec3& demand, const SatConfig& cfg) {
  return (demand.array().abs() > cfg.bound()).any();
}

FeedbackGains::FeedbackGains(double k1, double k2) : k1_(k1), k2_(k2) {
  if (!(k1 < 0.0 && k2 < 0.0)) {
    std::ostringstream os;
    os << "feedback gains k1=" << k1 << ", k2=" << k2
       << " do not make [[0, 1], [k1, k2]] Hurwitz (both must be negative)";
    throw ConfigError(os.str());
  }
}

Vec3 position_demand(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                     const FeedbackGains& gains, double nominal_mass) {
  return nominal_mass * (gains.k1() * x1 + gains.k2() * x2_hat - x3_hat);
}

Vec3 position_control(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                      const FeedbackGains& gains, const SatConfig& cfg, double nominal_mass) {
  return saturate(position_demand(x1, x2_hat, x3_hat, gains, nominal_mass), cfg);
}

Vec3 attitude_demand(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                     const FeedbackGains& gains, const Mat3& nominal_inertia) {
  return nominal_inertia * (gains.k1() * x1 + gains.k2() * x2_hat - x3_hat);
}

Vec3 attitude_control(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                      const FeedbackGains& gains, const SatConfig& cfg,
                      const Mat3& nominal_inertia) {
  return saturate(attitude_demand(x1, x2_hat, x3_hat, gains, nominal_inertia), cfg);
}

AttitudeSetpoint attitude_setpoint(const Vec3& force_demand, double yaw, double tilt_limit) {
  if (!force_demand.allFinite()) throw TiltLimitError("non-finite force demand");
  const double thrust = force_demand.norm();
  // A rotorcraft cannot pull downwards: cut the collective and level out.
  if (!(force_demand.z() > 0.0)) return {0.0, EulerAngles{0.0, 0.0, yaw}};
  // Undo the yaw rotation, then read roll/pitch off the body z axis.
  const Vec3 z = force_demand / thrust;
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double zx = c * z.x() + s * z.y();
  const double zy = -s * z.x() + c * z.y();
  AttitudeSetpoint out;
  out.thrust = thrust;
  out.attitude.roll = std::asin(std::clamp(-zy, -1.0, 1.0));
  out.attitude.pitch = std::atan2(zx, z.z());
  out.attitude.yaw = yaw;
  if (std::abs(out.attitude.roll) > tilt_limit || std::abs(out.attitude.pitch) > tilt_limit) {
    std::ostringstream os;
    os << "demanded tilt (roll " << out.attitude.roll << ", pitch " << out.attitude.pitch
       << ") exceeds limit " << tilt_limit << " rad";
    throw TiltLimitError(os.str());
  }
  return out;
}

namespace {

Vec3 clamp_abs(const Vec3& v, double limit) {
  return v.cwiseMax(Vec3::Constant(-limit)).cwiseMin(Vec3::Constant(limit));
}

}  // namespace

std::pair<PidState, Vec3> pid_position_step(const PidState& state, const TrackingError& error,
                                            const PidConfig& cfg, double dt) {
  PidState next = state;
  const auto& g = cfg.position;
  next.position_integral = clamp_abs(
      state.position_integral + g.ki.cwiseProduct(error.position) * dt, cfg.position_sat.bound());
  const Vec3 demand = g.kp.cwiseProduct(error.position) + next.position_integral +
                      g.kd.cwiseProduct(error.velocity) +
                      cfg.nominal_mass * cfg.gravity * kUnitZ;
  return {next, saturate(demand, cfg.position_sat)};
}

std::pair<PidState, Vec3> pid_attitude_step(const PidState& state, const TrackingError& error,
                                            const PidConfig& cfg, double dt) {
  PidState next = state;
  const auto& g = cfg.attitude;
  next.attitude_integral = clamp_abs(
      state.attitude_integral + g.ki.cwiseProduct(error.attitude) * dt, cfg.attitude_sat.bound());
  const Vec3 demand = g.kp.cwiseProduct(error.attitude) + next.attitude_integral +
                      g.kd.cwiseProduct(error.attitude_rate);
  return {next, saturate(demand, cfg.attitude_sat)};
}

std::pair<PidState, ControlCommand> pid_control(const PidState& state, const TrackingError& error,
                                                const PidConfig& cfg, double yaw, double dt) {
  if (!(dt > 0.0)) throw ConfigError("pid_control: dt must be > 0");
  auto [after_position, force] = pid_position_step(state, error, cfg, dt);
  auto [after_attitude, torque] = pid_attitude_step(after_position, error, cfg, dt);
  ControlCommand cmd;
  cmd.force = force;
  cmd.torque = torque;
  const AttitudeSetpoint sp = attitude_setpoint(force, yaw);
  cmd.thrust = sp.thrust;
  cmd.attitude_setpoint = sp.attitude;
  return {after_attitude, cmd};
}

}  // namespace ehgo
