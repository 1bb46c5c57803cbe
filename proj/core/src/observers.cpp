#include "ehgo/observers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/Polynomials>

namespace ehgo {

namespace {

// dt * fastest_pole must stay below this.
constexpr double kStiffnessFraction = 0.1;

void check_step(double dt, double max_step, std::string_view who) {
  if (!(dt > 0.0)) throw ConfigError(std::string(who) + ": dt must be > 0");
  if (dt > max_step * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << who << ": dt=" << dt << " exceeds the stiffness guard " << max_step
       << " (dt * fastest observer pole must be <= " << kStiffnessFraction << ")";
    throw ConfigError(os.str());
  }
}

}  // namespace

std::string_view to_string(ObserverKind kind) {
  return kind == ObserverKind::cascaded ? "cascaded" : "standard";
}

ObserverKind observer_kind_from_string(std::string_view name) {
  if (name == "cascaded" || name == "cascaded_ehgo") return ObserverKind::cascaded;
  if (name == "standard" || name == "standard_ehgo") return ObserverKind::standard;
  throw ConfigError("unknown observer kind '" + std::string(name) + "'");
}

std::string_view to_string(ScalingStatus status) {
  switch (status) {
    case ScalingStatus::ok: return "ok";
    case ScalingStatus::floor_limited: return "floor-limited";
    case ScalingStatus::non_convergent: return "non-convergent";
  }
  return "unknown";
}

CascadedGains::CascadedGains(double l1, double l2, double epsilon)
    : l1_(l1), l2_(l2), epsilon_(epsilon) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw ConfigError("cascaded observer gains l1, l2 must be > 0");
  if (!(epsilon > 0.0)) throw ConfigError("observer epsilon must be > 0");
}

double CascadedGains::max_step() const {
  // Triangular error dynamics: poles are exactly -l1/eps and -l2/eps.
  return kStiffnessFraction * epsilon_ / std::max(l1_, l2_);
}

StandardGains::StandardGains(std::array<double, 3> alpha, double epsilon)
    : alpha_(alpha), epsilon_(epsilon) {
  const auto [a1, a2, a3] = alpha;
  // Routh-Hurwitz for a monic cubic.
  if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0 && a1 * a2 > a3))
    throw ConfigError("standard observer gains alpha do not give a Hurwitz polynomial");
  if (!(epsilon > 0.0)) throw ConfigError("observer epsilon must be > 0");
  const Eigen::Vector4d coeffs(a3, a2, a1, 1.0);
  const Eigen::PolynomialSolver<double, 3> solver(coeffs);
  for (const auto& root : solver.roots()) spectral_radius_ = std::max(spectral_radius_, std::abs(root));
}

double StandardGains::max_step() const {
  return kStiffnessFraction * epsilon_ / spectral_radius();
}

CascadedEhgoState make_cascaded_ehgo(const CascadedGains& gains, const Mat3& nominal_gain,
                                     const Vec3& y0, const Vec3& rate0, const Vec3& ext0) {
  const double k1 = gains.l1() / gains.epsilon();
  const double k2 = gains.l2() / gains.epsilon();
  CascadedEhgoState s{gains, nominal_gain};
  s.xi1 = y0 - rate0 / k1;
  s.xi2 = rate0 - ext0 / k2;
  return s;
}

StandardEhgoState make_standard_ehgo(const StandardGains& gains, const Mat3& nominal_gain,
                                     const Vec3& y0, const Vec3& rate0, const Vec3& ext0) {
  StandardEhgoState s{gains, nominal_gain};
  s.x1 = y0;
  s.x2 = rate0;
  s.x3 = ext0;
  return s;
}

ObserverEstimates cascaded_ehgo_estimates(const CascadedEhgoState& state, const Vec3& y) {
  const double eps = state.gains.epsilon();
  ObserverEstimates est;
  est.rate = (state.gains.l1() / eps) * (y - state.xi1);
  est.disturbance = (state.gains.l2() / eps) * (est.rate - state.xi2);
  return est;
}

ObserverEstimates standard_ehgo_estimates(const StandardEhgoState& state, const Vec3&) {
  return {state.x2, state.x3};
}

std::pair<CascadedEhgoState, ObserverEstimates> cascaded_ehgo_step(
    const CascadedEhgoState& state, const Vec3& y, const Vec3& u, double dt) {
  check_step(dt, state.gains.max_step(), "cascaded observer");
  const ObserverEstimates est = cascaded_ehgo_estimates(state, y);
  CascadedEhgoState next = state;
  // (l1/eps) e1 and (l2/eps) e2 are the outputs themselves.
  next.xi1 += dt * est.rate;
  next.xi2 += dt * (est.disturbance + state.nominal_gain * u);
  return {next, est};
}

std::pair<StandardEhgoState, ObserverEstimates> standard_ehgo_step(
    const StandardEhgoState& state, const Vec3& y, const Vec3& u, double dt) {
  check_step(dt, state.gains.max_step(), "standard observer");
  const ObserverEstimates est = standard_ehgo_estimates(state, y);
  const auto& a = state.gains.alpha();
  const double eps = state.gains.epsilon();
  const Vec3 e = y - state.x1;
  StandardEhgoState next = state;
  next.x1 += dt * (state.x2 + (a[0] / eps) * e);
  next.x2 += dt * (state.x3 + state.nominal_gain * u + (a[1] / (eps * eps)) * e);
  next.x3 += dt * ((a[2] / (eps * eps * eps)) * e);
  return {next, est};
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

// Steady-state |x3 - x3_hat| for one epsilon on the sinusoidally disturbed
// double integrator  x1_ddot = A sin(w t). The plant is integrated in closed
// form so the only error source is the observer.
template <typename State, typename StepFn>
ScalingPoint run_scaling_case(State state, double max_step, StepFn step, double epsilon,
                              const ScalingOptions& opt) {
  const double dt = max_step / opt.steps_per_guard;
  const double w = 2.0 * std::numbers::pi * opt.frequency_hz;
  const double a = opt.amplitude;
  const auto steps = static_cast<long>(std::llround(opt.duration / dt));
  const auto window_start = static_cast<long>(std::llround((opt.duration - opt.window) / dt));
  const Vec3 zero = Vec3::Zero();

  double residual = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double y = a / w * t - a / (w * w) * std::sin(w * t);
    const double d = a * std::sin(w * t);
    auto [next, est] = step(state, Vec3::Constant(y), zero, dt);
    if (!est.disturbance.allFinite()) return {epsilon, std::numeric_limits<double>::infinity(), dt};
    if (k >= window_start) residual = std::max(residual, std::abs(est.disturbance.x() - d));
    state = std::move(next);
  }
  return {epsilon, residual, dt};
}

}  // namespace

ScalingReport estimation_error_scaling(ObserverKind kind, std::span<const double> epsilons,
                                       const ScalingOptions& options) {
  std::vector<double> eps(epsilons.begin(), epsilons.end());
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (eps.size() < 3) throw ConfigError("scaling study needs at least 3 epsilon values");
  if (std::adjacent_find(eps.begin(), eps.end()) != eps.end())
    throw ConfigError("scaling study epsilon values must be distinct");
  if (!(eps.back() > 0.0)) throw ConfigError("scaling study epsilon values must be > 0");

  ScalingReport report;
  report.kind = kind;
  const Mat3 unit = Mat3::Identity();
  // The plant starts at rest with zero disturbance, so the observer starts exact.
  const Vec3 rate0 = Vec3::Zero();

  for (const double e : eps) {
    if (kind == ObserverKind::cascaded) {
      const CascadedGains gains(options.l1, options.l2, e);
      report.points.push_back(run_scaling_case(
          make_cascaded_ehgo(gains, unit, Vec3::Zero(), rate0), gains.max_step(),
          [](const auto& s, const Vec3& y, const Vec3& u, double dt) {
            return cascaded_ehgo_step(s, y, u, dt);
          },
          e, options));
    } else {
      const StandardGains gains(options.alpha, e);
      report.points.push_back(run_scaling_case(
          make_standard_ehgo(gains, unit, Vec3::Zero(), rate0), gains.max_step(),
          [](const auto& s, const Vec3& y, const Vec3& u, double dt) {
            return standard_ehgo_step(s, y, u, dt);
          },
          e, options));
    }
  }

  std::vector<double> xs, ys;
  double largest = 0.0;
  for (const auto& p : report.points) {
    if (!std::isfinite(p.residual) || p.residual > 10.0 * std::max(options.amplitude, 1e-300)) {
      report.status = ScalingStatus::non_convergent;
      report.slope = std::numeric_limits<double>::quiet_NaN();
      return report;
    }
    largest = std::max(largest, p.residual);
    xs.push_back(p.epsilon);
    ys.push_back(p.residual);
  }
  if (largest < 1e-12) {
    report.status = ScalingStatus::floor_limited;
    report.slope = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  report.slope = log_log_slope(xs, ys);
  return report;
}

}  // namespace ehgo
