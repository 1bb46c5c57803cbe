#pragma once

// Time-parameterized force and torque disturbances. Every primitive is C1 in
// time with an analytic bound on its derivative, so impacts are modelled as
// smoothed pulses rather than impulses.

#include "ehgo/types.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ehgo {

enum class PrimitiveKind { constant, ramp, sinusoid, smoothed_pulse, gust_window };

std::string_view to_string(PrimitiveKind kind);
PrimitiveKind primitive_kind_from_string(std::string_view name);

/// One additive term  amplitude * direction * shape(t).
///
///   constant        shape = 1
///   ramp            shape' rises linearly 0 -> 1 over [start, start + smoothing],
///                   falls back to 0 over [end, end + smoothing]; amplitude is the slope
///   sinusoid        shape = sin(2 pi frequency t + phase)
///   smoothed_pulse  smoothstep up over [center - width/2 - smoothing, center - width/2],
///                   down over [center + width/2, center + width/2 + smoothing]
///   gust_window     smoothstep up over [start, start + smoothing],
///                   down over [end - smoothing, end]; end may be +inf
struct DisturbancePrimitive {
  PrimitiveKind kind = PrimitiveKind::constant;
  Vec3 direction = Vec3::UnitX();
  double amplitude = 0.0;
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  double center = 0.0;
  double width = 0.0;
  double frequency_hz = 0.0;
  double phase = 0.0;
  double smoothing = 0.0;

  double shape(double t) const;
  double shape_derivative(double t) const;
  /// sup |shape'|.
  double shape_derivative_bound() const;
  /// Interval outside which the term is constant; nullopt for terms that never settle.
  std::optional<std::pair<double, double>> active_interval() const;

  /// Throws ConfigError for inconsistent timing or non-finite fields.
  void validate() const;
};

struct DisturbanceSample {
  Vec3 force = Vec3::Zero();   // d_f (N, world)
  Vec3 torque = Vec3::Zero();  // d_tau (N m)
};

struct DerivativeBounds {
  double force = 0.0;
  double torque = 0.0;
};

struct DisturbanceProfile {
  std::vector<DisturbancePrimitive> force;
  std::vector<DisturbancePrimitive> torque;
  /// Free-form provenance of calibration constants, echoed into reports.
  std::string note;

  bool empty() const { return force.empty() && torque.empty(); }
  void validate() const;

  /// Triangle-inequality bound on ||d_dot|| from the primitives' analytic bounds.
  DerivativeBounds declared_derivative_bound() const;
  /// Union of the primitives' active intervals, or nullopt if empty/unbounded.
  std::optional<std::pair<double, double>> active_interval() const;
};

DisturbanceSample evaluate(const DisturbanceProfile& profile, double t);

/// Largest forward-difference ||d(t + dt) - d(t)|| / dt over [0, t_end].
/// Requires dt <= (smallest smoothing time) / 10.
DerivativeBounds derivative_bound_check(const DisturbanceProfile& profile, double dt, double t_end);

/// 1/2 rho CdA v^2.
double wind_drag_force(double air_density, double drag_area, double wind_speed);

}  // namespace ehgo
