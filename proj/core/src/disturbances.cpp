#include "ehgo/disturbances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ehgo {

namespace {

// C1 smoothstep on [0, 1]: 3x^2 - 2x^3, slope at most 1.5.
double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

double smoothstep_slope(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 6.0 * x * (1.0 - x);
}

// Integral of a unit linear ramp-up over [0, tau] followed by 1.
double ramp_integral(double u, double tau) {
  if (u <= 0.0) return 0.0;
  if (u <= tau) return 0.5 * u * u / tau;
  return u - 0.5 * tau;
}

double ramp_slope(double u, double tau) {
  if (u <= 0.0) return 0.0;
  if (u >= tau) return 1.0;
  return u / tau;
}

}  // namespace

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::constant: return "constant";
    case PrimitiveKind::ramp: return "ramp";
    case PrimitiveKind::sinusoid: return "sinusoid";
    case PrimitiveKind::smoothed_pulse: return "smoothed_pulse";
    case PrimitiveKind::gust_window: return "gust_window";
  }
  return "unknown";
}

PrimitiveKind primitive_kind_from_string(std::string_view name) {
  if (name == "constant") return PrimitiveKind::constant;
  if (name == "ramp") return PrimitiveKind::ramp;
  if (name == "sinusoid") return PrimitiveKind::sinusoid;
  if (name == "smoothed_pulse") return PrimitiveKind::smoothed_pulse;
  if (name == "gust_window") return PrimitiveKind::gust_window;
  throw ConfigError("unknown disturbance kind '" + std::string(name) + "'");
}

double DisturbancePrimitive::shape(double t) const {
  switch (kind) {
    case PrimitiveKind::constant:
      return 1.0;
    case PrimitiveKind::ramp:
      // d/dt = ramp up at start, ramp down at end: value is the difference.
      return ramp_integral(t - start, smoothing) - ramp_integral(t - end, smoothing);
    case PrimitiveKind::sinusoid:
      return std::sin(2.0 * std::numbers::pi * frequency_hz * t + phase);
    case PrimitiveKind::smoothed_pulse: {
      const double rise_end = center - 0.5 * width;
      const double fall_start = center + 0.5 * width;
      return smoothstep((t - (rise_end - smoothing)) / smoothing) *
             (1.0 - smoothstep((t - fall_start) / smoothing));
    }
    case PrimitiveKind::gust_window: {
      const double up = smoothstep((t - start) / smoothing);
      if (std::isinf(end)) return up;
      return up * (1.0 - smoothstep((t - (end - smoothing)) / smoothing));
    }
  }
  return 0.0;
}

double DisturbancePrimitive::shape_derivative(double t) const {
  switch (kind) {
    case PrimitiveKind::constant:
      return 0.0;
    case PrimitiveKind::ramp:
      return ramp_slope(t - start, smoothing) - ramp_slope(t - end, smoothing);
    case PrimitiveKind::sinusoid: {
      const double w = 2.0 * std::numbers::pi * frequency_hz;
      return w * std::cos(w * t + phase);
    }
    case PrimitiveKind::smoothed_pulse: {
      const double a = (t - (center - 0.5 * width - smoothing)) / smoothing;
      const double b = (t - (center + 0.5 * width)) / smoothing;
      return (smoothstep_slope(a) * (1.0 - smoothstep(b)) - smoothstep(a) * smoothstep_slope(b)) /
             smoothing;
    }
    case PrimitiveKind::gust_window: {
      const double a = (t - start) / smoothing;
      if (std::isinf(end)) return smoothstep_slope(a) / smoothing;
      const double b = (t - (end - smoothing)) / smoothing;
      return (smoothstep_slope(a) * (1.0 - smoothstep(b)) - smoothstep(a) * smoothstep_slope(b)) /
             smoothing;
    }
  }
  return 0.0;
}

double DisturbancePrimitive::shape_derivative_bound() const {
  switch (kind) {
    case PrimitiveKind::constant: return 0.0;
    case PrimitiveKind::ramp: return 1.0;
    case PrimitiveKind::sinusoid: return 2.0 * std::numbers::pi * std::abs(frequency_hz);
    case PrimitiveKind::smoothed_pulse:
    case PrimitiveKind::gust_window: return 1.5 / smoothing;
  }
  return 0.0;
}

std::optional<std::pair<double, double>> DisturbancePrimitive::active_interval() const {
  switch (kind) {
    case PrimitiveKind::constant:
    case PrimitiveKind::sinusoid:
      return std::nullopt;
    case PrimitiveKind::ramp:
      if (std::isinf(end)) return std::nullopt;
      return std::make_pair(start, end + smoothing);
    case PrimitiveKind::smoothed_pulse:
      return std::make_pair(center - 0.5 * width - smoothing, center + 0.5 * width + smoothing);
    case PrimitiveKind::gust_window:
      return std::make_pair(start, end);
  }
  return std::nullopt;
}

void DisturbancePrimitive::validate() const {
  const std::string who = "disturbance '" + std::string(to_string(kind)) + "'";
  if (!direction.allFinite() || !std::isfinite(amplitude))
    throw ConfigError(who + ": direction and amplitude must be finite");
  switch (kind) {
    case PrimitiveKind::constant:
      break;
    case PrimitiveKind::sinusoid:
      if (!std::isfinite(frequency_hz) || !std::isfinite(phase))
        throw ConfigError(who + ": frequency and phase must be finite");
      break;
    case PrimitiveKind::ramp:
      if (!(smoothing > 0.0)) throw ConfigError(who + ": smoothing must be > 0");
      if (!(end >= start + smoothing)) throw ConfigError(who + ": end must be >= start + smoothing");
      break;
    case PrimitiveKind::smoothed_pulse:
      if (!(smoothing > 0.0)) throw ConfigError(who + ": smoothing must be > 0");
      if (!(width >= 0.0) || !std::isfinite(center))
        throw ConfigError(who + ": width must be >= 0 and center finite");
      break;
    case PrimitiveKind::gust_window:
      if (!(smoothing > 0.0)) throw ConfigError(who + ": smoothing must be > 0");
      if (!(end >= start + 2.0 * smoothing))
        throw ConfigError(who + ": end must be >= start + 2 * smoothing");
      break;
  }
}

void DisturbanceProfile::validate() const {
  for (const auto& p : force) p.validate();
  for (const auto& p : torque) p.validate();
}

DerivativeBounds DisturbanceProfile::declared_derivative_bound() const {
  DerivativeBounds b;
  for (const auto& p : force)
    b.force += std::abs(p.amplitude) * p.direction.norm() * p.shape_derivative_bound();
  for (const auto& p : torque)
    b.torque += std::abs(p.amplitude) * p.direction.norm() * p.shape_derivative_bound();
  return b;
}

std::optional<std::pair<double, double>> DisturbanceProfile::active_interval() const {
  std::optional<std::pair<double, double>> out;
  for (const auto* list : {&force, &torque}) {
    for (const auto& p : *list) {
      if (p.kind == PrimitiveKind::constant) continue;
      const auto iv = p.active_interval();
      if (!iv) return std::nullopt;
      if (!out) {
        out = iv;
      } else {
        out->first = std::min(out->first, iv->first);
        out->second = std::max(out->second, iv->second);
      }
    }
  }
  return out;
}

DisturbanceSample evaluate(const DisturbanceProfile& profile, double t) {
  DisturbanceSample s;
  for (const auto& p : profile.force) s.force += p.amplitude * p.shape(t) * p.direction;
  for (const auto& p : profile.torque) s.torque += p.amplitude * p.shape(t) * p.direction;
  return s;
}

DerivativeBounds derivative_bound_check(const DisturbanceProfile& profile, double dt,
                                        double t_end) {
  double min_smoothing = std::numeric_limits<double>::infinity();
  for (const auto* list : {&profile.force, &profile.torque})
    for (const auto& p : *list)
      if (p.smoothing > 0.0) min_smoothing = std::min(min_smoothing, p.smoothing);
  if (!(dt > 0.0) || dt > min_smoothing / 10.0 * (1.0 + 1e-12))
    throw ConfigError("derivative_bound_check: grid dt must be in (0, smallest smoothing / 10]");

  DerivativeBounds out;
  const auto steps = static_cast<long>(std::ceil(t_end / dt));
  DisturbanceSample prev = evaluate(profile, 0.0);
  for (long k = 1; k <= steps; ++k) {
    const DisturbanceSample cur = evaluate(profile, static_cast<double>(k) * dt);
    out.force = std::max(out.force, (cur.force - prev.force).norm() / dt);
    out.torque = std::max(out.torque, (cur.torque - prev.torque).norm() / dt);
    prev = cur;
  }
  return out;
}

double wind_drag_force(double air_density, double drag_area, double wind_speed) {
  return 0.5 * air_density * drag_area * wind_speed * wind_speed;
}

}  // namespace ehgo
