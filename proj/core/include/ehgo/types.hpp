#pragma once

// Shared state, error and parameter types. World frame is Z-up; gravity acts
// along -e3. Euler angles follow the Z-Y-X (yaw-pitch-roll) convention.

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>
#include <string>

namespace ehgo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline const Vec3 kUnitZ{0.0, 0.0, 1.0};

/// Pitch is kept at least this far away from +-pi/2.
inline constexpr double kPitchMargin = 0.2;
inline constexpr double kMaxPitch = std::numbers::pi / 2.0 - kPitchMargin;

/// Bad scenario, gains or rates. Raised before any stepping happens.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Pitch entered the gimbal-lock guard band.
class GimbalLockError : public std::runtime_error {
 public:
  explicit GimbalLockError(double pitch);
  double pitch() const { return pitch_; }

 private:
  double pitch_;
};

struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  static EulerAngles from_vector(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  Vec3 vector() const { return {roll, pitch, yaw}; }

  /// True when pitch is inside the non-singular region.
  bool valid() const;
};

struct RigidBodyState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  EulerAngles attitude;
  Vec3 attitude_rate = Vec3::Zero();
  double time = 0.0;

  bool finite() const;
};

/// Reference-minus-state errors: e_s = s_d - s, e_v = v_d - v, e_eta = eta_d - eta.
struct TrackingError {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 attitude = Vec3::Zero();
  Vec3 attitude_rate = Vec3::Zero();
};

TrackingError tracking_error(const RigidBodyState& state, const RigidBodyState& reference);

struct VehicleParams {
  double mass = 2.7;
  double nominal_mass = 2.7;
  Vec3 inertia{0.021, 0.021, 0.036};
  Vec3 nominal_inertia{0.021, 0.021, 0.036};
  double gravity = 9.81;
  /// Motor-to-motor diagonal distance of the X frame.
  double axis_distance = 0.333;
  double max_rotor_thrust = 12.0;
  /// Rotor drag torque per unit thrust (m).
  double yaw_drag_coefficient = 0.016;

  /// Throws ConfigError on non-positive mass or inertia.
  void validate() const;
};

}  // namespace ehgo
