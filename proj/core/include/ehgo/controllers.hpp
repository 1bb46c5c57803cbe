#pragma once

// Saturated observer-based control laws, the thrust/attitude setpoint map
// between the loops, and a PID baseline.
//
// The observer-based laws work in loop coordinates x1 = output - reference,
// where the loop input enters with positive sign (x1_ddot = x3 + N u):
//   u = B * sat(N^-1 (k1 x1 + k2 x2_hat - x3_hat) / B)      (per axis)

#include "ehgo/types.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ehgo {

enum class SatMode {
  bounded,        // identity on [-1, 1], smooth asymptote 1 + h
  slope_limited,  // identity on [-1, 1], unbounded with asymptotic slope h
  none,           // identity everywhere (unsaturated law)
};

std::string_view to_string(SatMode mode);
SatMode sat_mode_from_string(std::string_view name);

class SatConfig {
 public:
  SatConfig(double bound, double h, SatMode mode = SatMode::bounded);

  double bound() const { return bound_; }
  double h() const { return h_; }
  SatMode mode() const { return mode_; }
  /// B (1 + h): the largest magnitude a bounded law can produce.
  double ceiling() const { return bound_ * (1.0 + h_); }

 private:
  double bound_;
  double h_;
  SatMode mode_;
};

/// Unit saturation: odd, C1, nondecreasing, slope <= 1, identity on [-1, 1].
/// For |v| > 1 (bounded mode): sign(v) (1 + h tanh((|v| - 1) / h)).
double sat(double v, double h, SatMode mode = SatMode::bounded);
double sat_derivative(double v, double h, SatMode mode = SatMode::bounded);
inline double sat(double v, const SatConfig& cfg) { return sat(v, cfg.h(), cfg.mode()); }

/// Per-axis B sat(v / B).
Vec3 saturate(const Vec3& demand, const SatConfig& cfg);
/// True when any axis of the demand is outside the linear region.
bool saturation_active(const Vec3& demand, const SatConfig& cfg);

/// K = [k1, k2]; the companion matrix [[0, 1], [k1, k2]] must be Hurwitz,
/// which holds exactly when both gains are negative.
class FeedbackGains {
 public:
  FeedbackGains(double k1, double k2);
  double k1() const { return k1_; }
  double k2() const { return k2_; }

 private:
  double k1_;
  double k2_;
};

/// Unsaturated position demand m0 (K x_hat - x3_hat).
Vec3 position_demand(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                     const FeedbackGains& gains, double nominal_mass);
Vec3 position_control(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                      const FeedbackGains& gains, const SatConfig& cfg, double nominal_mass);

/// Unsaturated attitude demand M0 (K x_hat - x3_hat).
Vec3 attitude_demand(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                     const FeedbackGains& gains, const Mat3& nominal_inertia);
Vec3 attitude_control(const Vec3& x1, const Vec3& x2_hat, const Vec3& x3_hat,
                      const FeedbackGains& gains, const SatConfig& cfg,
                      const Mat3& nominal_inertia);

/// Demanded tilt beyond the configured limit.
class TiltLimitError : public std::runtime_error {
 public:
  explicit TiltLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct AttitudeSetpoint {
  double thrust = 0.0;
  EulerAngles attitude;
};

/// Collective thrust and roll/pitch that align the body z axis with the
/// world force demand, keeping the demanded yaw. A demand with no upward
/// component maps to zero thrust at level attitude.
AttitudeSetpoint attitude_setpoint(const Vec3& force_demand, double yaw,
                                   double tilt_limit = kMaxPitch);

// --- PID baseline -------------------------------------------------------------

struct PidLoopGains {
  Vec3 kp = Vec3::Zero();
  Vec3 ki = Vec3::Zero();
  Vec3 kd = Vec3::Zero();
};

struct PidConfig {
  PidLoopGains position;
  PidLoopGains attitude;
  SatConfig position_sat{52.9740, 0.1};
  SatConfig attitude_sat{1.5, 0.1};
  double nominal_mass = 2.7;
  double gravity = 9.81;
};

/// Integrals are stored already multiplied by ki (force / torque units).
struct PidState {
  Vec3 position_integral = Vec3::Zero();
  Vec3 attitude_integral = Vec3::Zero();
};

struct ControlCommand {
  Vec3 force = Vec3::Zero();   // u_p (N, world)
  Vec3 torque = Vec3::Zero();  // u_a (N m)
  double thrust = 0.0;         // collective (N)
  EulerAngles attitude_setpoint;
};

/// u_p = B sat((kp e_s + I + kd e_v + m0 g e3) / B), I <- clamp(I + ki e_s dt, +-B).
std::pair<PidState, Vec3> pid_position_step(const PidState& state, const TrackingError& error,
                                            const PidConfig& cfg, double dt);
/// u_a = B sat((kp e_eta + I + kd e_eta_rate) / B), same integral rule.
std::pair<PidState, Vec3> pid_attitude_step(const PidState& state, const TrackingError& error,
                                            const PidConfig& cfg, double dt);
/// Both loops on one error sample, plus the attitude setpoint for u_p.
std::pair<PidState, ControlCommand> pid_control(const PidState& state, const TrackingError& error,
                                                const PidConfig& cfg, double yaw, double dt);

}  // namespace ehgo
