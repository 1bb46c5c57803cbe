#include "ehgo/types.hpp"

#include <cmath>
#include <sstream>

namespace ehgo {

namespace {

std::string gimbal_message(double pitch) {
  std::ostringstream os;
  os << "pitch " << pitch << " rad outside the valid region |theta| < " << kMaxPitch;
  return os.str();
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

GimbalLockError::GimbalLockError(double pitch)
    : std::runtime_error(gimbal_message(pitch)), pitch_(pitch) {}

bool EulerAngles::valid() const {
  return std::isfinite(pitch) && std::abs(pitch) < kMaxPitch;
}

bool RigidBodyState::finite() const {
  return ehgo::finite(position) && ehgo::finite(velocity) && ehgo::finite(attitude.vector()) &&
         ehgo::finite(attitude_rate) && std::isfinite(time);
}

TrackingError tracking_error(const RigidBodyState& state, const RigidBodyState& reference) {
  TrackingError e;
  e.position = reference.position - state.position;
  e.velocity = reference.velocity - state.velocity;
  e.attitude = reference.attitude.vector() - state.attitude.vector();
  e.attitude_rate = reference.attitude_rate - state.attitude_rate;
  return e;
}

void VehicleParams::validate() const {
  if (!(mass > 0.0)) throw ConfigError("vehicle.mass must be > 0");
  if (!(nominal_mass > 0.0)) throw ConfigError("vehicle.nominal_mass must be > 0");
  if (!(inertia.array() > 0.0).all()) throw ConfigError("vehicle.inertia must be componentwise > 0");
  if (!(nominal_inertia.array() > 0.0).all())
    throw ConfigError("vehicle.nominal_inertia must be componentwise > 0");
  if (!(gravity > 0.0)) throw ConfigError("vehicle.gravity must be > 0");
  if (!(axis_distance > 0.0)) throw ConfigError("vehicle.axis_distance must be > 0");
  if (!(max_rotor_thrust > 0.0)) throw ConfigError("vehicle.max_rotor_thrust must be > 0");
  if (!(yaw_drag_coefficient > 0.0))
    throw ConfigError("vehicle.yaw_drag_coefficient must be > 0");
}

}  // namespace ehgo
