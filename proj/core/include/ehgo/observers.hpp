#pragma once

// Extended high-gain observers for a second-order loop
//   x1_dot = x2,  x2_dot = x3 + N u,  y = x1
// where x3 lumps disturbance, gravity and nominal-model mismatch and N is the
// nominal input gain (1/m0 for translation, M0^-1 for attitude).
//
// The cascaded observer chains two first-order high-gain stages:
//   xi1_dot = (l1/eps) e1,            e1 = y - xi1,      x2_hat = (l1/eps) e1
//   xi2_dot = (l2/eps) e2 + N u,      e2 = x2_hat - xi2, x3_hat = (l2/eps) e2
//
// The standard observer is the classical third-order form with gains
// alpha_i / eps^i.
//
// Both are advanced with forward Euler. A step is only accepted when
// dt * (fastest observer pole) <= 0.1.

#include "ehgo/types.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ehgo {

enum class ObserverKind { cascaded, standard };

std::string_view to_string(ObserverKind kind);
ObserverKind observer_kind_from_string(std::string_view name);

struct ObserverEstimates {
  Vec3 rate = Vec3::Zero();         // x2_hat
  Vec3 disturbance = Vec3::Zero();  // x3_hat
};

class CascadedGains {
 public:
  CascadedGains(double l1, double l2, double epsilon);

  double l1() const { return l1_; }
  double l2() const { return l2_; }
  double epsilon() const { return epsilon_; }
  CascadedGains with_epsilon(double epsilon) const { return {l1_, l2_, epsilon}; }

  /// Largest stable forward-Euler step accepted by the stiffness guard.
  double max_step() const;

 private:
  double l1_;
  double l2_;
  double epsilon_;
};

class StandardGains {
 public:
  /// Rejects gains whose polynomial s^3 + a1 s^2 + a2 s + a3 is not Hurwitz.
  StandardGains(std::array<double, 3> alpha, double epsilon);

  const std::array<double, 3>& alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  StandardGains with_epsilon(double epsilon) const { return {alpha_, epsilon}; }

  /// Magnitude of the fastest root of s^3 + a1 s^2 + a2 s + a3.
  double spectral_radius() const { return spectral_radius_; }
  double max_step() const;

 private:
  std::array<double, 3> alpha_;
  double epsilon_;
  double spectral_radius_ = 0.0;
};

struct CascadedEhgoState {
  CascadedGains gains;
  Mat3 nominal_gain = Mat3::Identity();
  Vec3 xi1 = Vec3::Zero();
  Vec3 xi2 = Vec3::Zero();
};

struct StandardEhgoState {
  StandardGains gains;
  Mat3 nominal_gain = Mat3::Identity();
  Vec3 x1 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
  Vec3 x3 = Vec3::Zero();
};

/// Observer state whose estimates at output y0 are exactly (rate0, ext0).
CascadedEhgoState make_cascaded_ehgo(const CascadedGains& gains, const Mat3& nominal_gain,
                                     const Vec3& y0 = Vec3::Zero(),
                                     const Vec3& rate0 = Vec3::Zero(),
                                     const Vec3& ext0 = Vec3::Zero());
StandardEhgoState make_standard_ehgo(const StandardGains& gains, const Mat3& nominal_gain,
                                     const Vec3& y0 = Vec3::Zero(),
                                     const Vec3& rate0 = Vec3::Zero(),
                                     const Vec3& ext0 = Vec3::Zero());

ObserverEstimates cascaded_ehgo_estimates(const CascadedEhgoState& state, const Vec3& y);
ObserverEstimates standard_ehgo_estimates(const StandardEhgoState& state, const Vec3& y);

/// One Euler step. The returned estimates are the ones available at the
/// start of the step (they depend on y and the pre-step state only).
/// Throws ConfigError if dt violates the stiffness guard.
std::pair<CascadedEhgoState, ObserverEstimates> cascaded_ehgo_step(
    const CascadedEhgoState& state, const Vec3& y, const Vec3& u, double dt);
std::pair<StandardEhgoState, ObserverEstimates> standard_ehgo_step(
    const StandardEhgoState& state, const Vec3& y, const Vec3& u, double dt);

// --- O(eps) scaling study ---------------------------------------------------

struct ScalingOptions {
  double l1 = 2.0;
  double l2 = 2.0;
  std::array<double, 3> alpha{6.0, 11.0, 6.0};
  double amplitude = 1.0;     // disturbance amplitude (m/s^2)
  double frequency_hz = 0.5;  // disturbance frequency
  double duration = 10.0;     // s
  double window = 2.0;        // residual measured over the final `window` seconds
  /// dt = (stiffness-guard step) / steps_per_guard, so dt shrinks with eps.
  double steps_per_guard = 10.0;
};

enum class ScalingStatus { ok, floor_limited, non_convergent };
std::string_view to_string(ScalingStatus status);

struct ScalingPoint {
  double epsilon = 0.0;
  double residual = 0.0;
  double dt = 0.0;
};

struct ScalingReport {
  ObserverKind kind = ObserverKind::cascaded;
  std::vector<ScalingPoint> points;  // sorted by decreasing epsilon
  double slope = 0.0;                // NaN unless status == ok
  ScalingStatus status = ScalingStatus::ok;
};

/// Runs the observer on a double integrator driven by a sinusoidal
/// disturbance and fits log(residual) against log(eps). The epsilon list may
/// be given in any order; it must hold at least three distinct positive values.
ScalingReport estimation_error_scaling(ObserverKind kind, std::span<const double> epsilons,
                                       const ScalingOptions& options = {});

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ehgo
