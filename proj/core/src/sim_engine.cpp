#include "ehgo/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>
#include <variant>

namespace ehgo {

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::cascaded_ehgo: return "cascaded_ehgo";
    case ControllerKind::standard_ehgo: return "standard_ehgo";
    case ControllerKind::pid: return "pid";
    case ControllerKind::open_loop: return "open_loop";
  }
  return "unknown";
}

ControllerKind controller_kind_from_string(std::string_view name) {
  if (name == "cascaded_ehgo" || name == "cascaded") return ControllerKind::cascaded_ehgo;
  if (name == "standard_ehgo" || name == "standard") return ControllerKind::standard_ehgo;
  if (name == "pid") return ControllerKind::pid;
  if (name == "open_loop") return ControllerKind::open_loop;
  throw ConfigError("unknown controller '" + std::string(name) +
                    "' (expected cascaded_ehgo, standard_ehgo, pid or open_loop)");
}

std::string_view to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::hover: return "hover";
    case ReferenceKind::line: return "line";
    case ReferenceKind::circle: return "circle";
    case ReferenceKind::waypoints: return "waypoints";
  }
  return "unknown";
}

// --- reference -------------------------------------------------------------------

namespace {

// Smoothstep blend between two points over [t0, t0 + T].
ReferenceSample blend(const Vec3& from, const Vec3& to, double t0, double span, double t) {
  ReferenceSample r;
  const double x = (t - t0) / span;
  if (x <= 0.0) {
    r.position = from;
  } else if (x >= 1.0) {
    r.position = to;
  } else {
    const Vec3 delta = to - from;
    r.position = from + delta * (x * x * (3.0 - 2.0 * x));
    r.velocity = delta * (6.0 * x * (1.0 - x) / span);
    r.acceleration = delta * ((6.0 - 12.0 * x) / (span * span));
  }
  return r;
}

}  // namespace

ReferenceSample ReferenceTrajectory::sample(double t) const {
  ReferenceSample r;
  switch (kind) {
    case ReferenceKind::hover:
      r.position = position;
      break;
    case ReferenceKind::line:
      r = blend(position, end, start_time, travel_time, t);
      break;
    case ReferenceKind::circle: {
      const double a = angular_rate * t;
      const double c = std::cos(a), s = std::sin(a);
      r.position = position + Vec3(radius * c, radius * s, 0.0);
      r.velocity = Vec3(-radius * angular_rate * s, radius * angular_rate * c, 0.0);
      r.acceleration = Vec3(-radius * angular_rate * angular_rate * c,
                            -radius * angular_rate * angular_rate * s, 0.0);
      break;
    }
    case ReferenceKind::waypoints: {
      if (t <= waypoints.front().time) {
        r.position = waypoints.front().position;
        break;
      }
      if (t >= waypoints.back().time) {
        r.position = waypoints.back().position;
        break;
      }
      const auto next = std::upper_bound(
          waypoints.begin(), waypoints.end(), t,
          [](double value, const Waypoint& w) { return value < w.time; });
      const auto prev = std::prev(next);
      r = blend(prev->position, next->position, prev->time, next->time - prev->time, t);
      break;
    }
  }
  r.yaw = yaw;
  return r;
}

void ReferenceTrajectory::validate() const {
  if (!position.allFinite() || !std::isfinite(yaw))
    throw ConfigError("reference: position and yaw must be finite");
  switch (kind) {
    case ReferenceKind::hover:
      break;
    case ReferenceKind::line:
      if (!end.allFinite()) throw ConfigError("reference.end must be finite");
      if (!(travel_time > 0.0)) throw ConfigError("reference.travel_time must be > 0");
      break;
    case ReferenceKind::circle:
      if (!(radius > 0.0)) throw ConfigError("reference.radius must be > 0");
      if (!std::isfinite(angular_rate)) throw ConfigError("reference.angular_rate must be finite");
      break;
    case ReferenceKind::waypoints:
      if (waypoints.empty()) throw ConfigError("reference.waypoints must not be empty");
      for (std::size_t i = 1; i < waypoints.size(); ++i)
        if (!(waypoints[i].time > waypoints[i - 1].time))
          throw ConfigError("reference.waypoints times must be strictly increasing");
      break;
  }
}

// --- scenario -----------------------------------------------------------------------

namespace {

long rate_ratio(double slow, double fast, const char* what) {
  const double ratio = slow / fast;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "rates: " << what << " (" << slow << " / " << fast << ") must be an integer >= 1";
    throw ConfigError(os.str());
  }
  return static_cast<long>(rounded);
}

bool uses(const Scenario& s, ControllerKind kind) {
  return std::find(s.controllers.begin(), s.controllers.end(), kind) != s.controllers.end();
}

}  // namespace

void Scenario::validate() const {
  vehicle.validate();
  if (controllers.empty()) throw ConfigError("controllers: at least one controller required");
  if (!(duration > 0.0)) throw ConfigError("duration must be > 0");
  if (!(rates.plant_dt > 0.0)) throw ConfigError("rates.plant_dt must be > 0");
  rate_ratio(rates.attitude_dt, rates.plant_dt, "attitude_dt / plant_dt");
  rate_ratio(rates.position_dt, rates.attitude_dt, "position_dt / attitude_dt");
  const double ticks = duration / rates.plant_dt;
  if (std::abs(ticks - std::round(ticks)) > 1e-6 * ticks)
    throw ConfigError("duration must be an integer multiple of rates.plant_dt");
  if (uses(*this, ControllerKind::cascaded_ehgo) &&
      rates.plant_dt > observer.cascaded.max_step() * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "observer.cascaded: plant_dt " << rates.plant_dt << " exceeds the stiffness guard "
       << observer.cascaded.max_step() << " = eps / (10 max(l1, l2))";
    throw ConfigError(os.str());
  }
  if (uses(*this, ControllerKind::standard_ehgo) &&
      rates.plant_dt > observer.standard.max_step() * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "observer.standard: plant_dt " << rates.plant_dt << " exceeds the stiffness guard "
       << observer.standard.max_step() << " = eps / (10 * fastest root)";
    throw ConfigError(os.str());
  }
  if (!observer.initial_velocity_error.allFinite() || !observer.initial_rate_error.allFinite())
    throw ConfigError("observer initial errors must be finite");
  disturbance.validate();
  reference.validate();
  if (initial.attitude && !EulerAngles::from_vector(*initial.attitude).valid())
    throw ConfigError("initial_state.attitude: pitch outside the valid region");
  if (noise.enabled && (!(noise.position >= 0.0) || !(noise.attitude >= 0.0)))
    throw ConfigError("measurement_noise amplitudes must be >= 0");
  if (metrics.window) {
    const auto [t0, t1] = *metrics.window;
    if (!(t0 >= 0.0 && t1 > t0 && t1 <= duration + 1e-9))
      throw ConfigError("metrics.window must satisfy 0 <= t0 < t1 <= duration");
  }
  for (const int axis : {metrics.attitude_axis, metrics.position_axis})
    if (axis < 0 || axis > 2) throw ConfigError("metrics axes must be 0, 1 or 2");
}

long Scenario::steps() const { return std::lround(duration / rates.plant_dt); }

Mat3 Scenario::nominal_attitude_inertia() const {
  return attitude_matrices(EulerAngles{}, Vec3::Zero(), vehicle.nominal_inertia).inertia;
}

// --- plant -------------------------------------------------------------------------

namespace {

RigidBodyState advance(const RigidBodyState& s, const StateDerivative& d, double h) {
  RigidBodyState out = s;
  out.position += h * d.velocity;
  out.velocity += h * d.acceleration;
  out.attitude = EulerAngles::from_vector(s.attitude.vector() + h * d.attitude_rate);
  out.attitude_rate += h * d.attitude_accel;
  out.time += h;
  return out;
}

StateDerivative eval(const RigidBodyState& s, double thrust, const Vec3& torque,
                     const DisturbanceProfile& disturbance, const VehicleParams& params) {
  if (!s.attitude.valid()) throw GimbalLockError(s.attitude.pitch);
  const DisturbanceSample d = evaluate(disturbance, s.time);
  return state_derivative(s, thrust, torque, d.force, d.torque, params);
}

}  // namespace

RigidBodyState step_plant(const RigidBodyState& state, double thrust, const Vec3& torque,
                          const DisturbanceProfile& disturbance, const VehicleParams& params,
                          double dt) {
  if (!(dt > 0.0)) throw ConfigError("step_plant: dt must be > 0");
  try {
    const StateDerivative k1 = eval(state, thrust, torque, disturbance, params);
    const StateDerivative k2 = eval(advance(state, k1, 0.5 * dt), thrust, torque, disturbance, params);
    const StateDerivative k3 = eval(advance(state, k2, 0.5 * dt), thrust, torque, disturbance, params);
    const StateDerivative k4 = eval(advance(state, k3, dt), thrust, torque, disturbance, params);
    StateDerivative sum;
    sum.velocity = k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity;
    sum.acceleration =
        k1.acceleration + 2.0 * k2.acceleration + 2.0 * k3.acceleration + k4.acceleration;
    sum.attitude_rate =
        k1.attitude_rate + 2.0 * k2.attitude_rate + 2.0 * k3.attitude_rate + k4.attitude_rate;
    sum.attitude_accel =
        k1.attitude_accel + 2.0 * k2.attitude_accel + 2.0 * k3.attitude_accel + k4.attitude_accel;
    RigidBodyState next = advance(state, sum, dt / 6.0);
    next.time = state.time + dt;
    if (!next.finite()) throw SimulationFault("non_finite", "plant state became non-finite");
    if (!next.attitude.valid()) throw GimbalLockError(next.attitude.pitch);
    return next;
  } catch (const GimbalLockError& e) {
    throw SimulationFault("gimbal_lock", e.what());
  }
}

// --- closed loop -------------------------------------------------------------------

namespace {

using ObserverVariant = std::variant<std::monostate, CascadedEhgoState, StandardEhgoState>;

ObserverEstimates estimates_of(const ObserverVariant& obs, const Vec3& y) {
  if (const auto* c = std::get_if<CascadedEhgoState>(&obs)) return cascaded_ehgo_estimates(*c, y);
  if (const auto* s = std::get_if<StandardEhgoState>(&obs)) return standard_ehgo_estimates(*s, y);
  return {};
}

void advance_observer(ObserverVariant& obs, const Vec3& y, const Vec3& u, double dt) {
  if (auto* c = std::get_if<CascadedEhgoState>(&obs)) {
    *c = cascaded_ehgo_step(*c, y, u, dt).first;
  } else if (auto* s = std::get_if<StandardEhgoState>(&obs)) {
    *s = standard_ehgo_step(*s, y, u, dt).first;
  }
}

// Observer whose estimates at y0 equal (rate0 + rate_error, ext0) for the
// standard form; for the cascaded form the error is injected in the first
// stage so both estimates move: (rate0 + err, ext0 + (l2/eps) err).
ObserverVariant make_observer(ControllerKind kind, const ObserverConfig& cfg, const Mat3& gain,
                              const Vec3& y0, const Vec3& rate0, const Vec3& ext0,
                              const Vec3& rate_error) {
  if (kind == ControllerKind::cascaded_ehgo) {
    CascadedEhgoState s = make_cascaded_ehgo(cfg.cascaded, gain, y0, rate0, ext0);
    s.xi1 -= rate_error * (cfg.cascaded.epsilon() / cfg.cascaded.l1());
    return s;
  }
  if (kind == ControllerKind::standard_ehgo)
    return make_standard_ehgo(cfg.standard, gain, y0, rate0 + rate_error, ext0);
  return std::monostate{};
}

RigidBodyState initial_state(const Scenario& sc) {
  const ReferenceSample r0 = sc.reference.sample(0.0);
  RigidBodyState s;
  s.position = sc.initial.position.value_or(r0.position);
  s.velocity = sc.initial.velocity.value_or(r0.velocity);
  s.attitude = EulerAngles::from_vector(sc.initial.attitude.value_or(Vec3(0.0, 0.0, r0.yaw)));
  s.attitude_rate = sc.initial.attitude_rate.value_or(Vec3::Zero());
  s.time = 0.0;
  return s;
}

RigidBodyState reference_state(const ReferenceSample& r, const EulerAngles& attitude_setpoint,
                               double t) {
  RigidBodyState ref;
  ref.position = r.position;
  ref.velocity = r.velocity;
  ref.attitude = attitude_setpoint;
  ref.attitude_rate = Vec3::Zero();
  ref.time = t;
  return ref;
}

}  // namespace

TrajectoryLog run(const Scenario& scenario, ControllerKind controller) {
  Scenario sc = scenario;
  sc.controllers = {controller};
  sc.validate();

  const VehicleParams& veh = sc.vehicle;
  const double dt = sc.rates.plant_dt;
  const long attitude_every = rate_ratio(sc.rates.attitude_dt, dt, "attitude_dt / plant_dt");
  const long position_every =
      attitude_every * rate_ratio(sc.rates.position_dt, sc.rates.attitude_dt, "position_dt");
  const long steps = sc.steps();
  const Mat3 m0_att = sc.nominal_attitude_inertia();
  const Mat3 att_gain = m0_att.inverse();
  const Mat3 pos_gain = Mat3::Identity() / veh.nominal_mass;

  TrajectoryLog log;
  log.scenario = sc.name;
  log.controller = controller;
  log.dt = dt;
  log.records.reserve(static_cast<std::size_t>(steps) + 1);

  RigidBodyState state = initial_state(sc);
  const bool ehgo =
      controller == ControllerKind::cascaded_ehgo || controller == ControllerKind::standard_ehgo;

  // Position observer is trimmed to the nominal hover guess x3 = -g e3.
  ObserverVariant pos_obs =
      make_observer(controller, sc.observer, pos_gain, state.position, state.velocity,
                    -veh.gravity * kUnitZ, sc.observer.initial_velocity_error);
  ObserverVariant att_obs =
      make_observer(controller, sc.observer, att_gain, state.attitude.vector(),
                    state.attitude_rate, Vec3::Zero(), sc.observer.initial_rate_error);

  std::mt19937_64 rng(sc.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  PidConfig pid_cfg{sc.pid.position, sc.pid.attitude, sc.gains.position_sat,
                    sc.gains.attitude_sat, veh.nominal_mass, veh.gravity};
  PidState pid_state;

  Vec3 force_cmd = Vec3::Zero();
  Vec3 torque_cmd = Vec3::Zero();
  Vec3 force_demand = Vec3::Zero();
  Vec3 torque_demand = Vec3::Zero();
  double thrust = 0.0;
  EulerAngles attitude_sp{0.0, 0.0, sc.reference.yaw};
  bool pos_sat = false, att_sat = false;
  ObserverEstimates pos_est_err, att_est_err;

  auto fault = [&](double t, std::string kind, std::string message) {
    log.fault = Fault{t, std::move(kind), std::move(message)};
  };

  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    state.time = t;

    Vec3 meas_pos = state.position;
    Vec3 meas_att = state.attitude.vector();
    if (sc.noise.enabled) {
      for (int i = 0; i < 3; ++i) meas_pos[i] += sc.noise.position * unit(rng);
      for (int i = 0; i < 3; ++i) meas_att[i] += sc.noise.attitude * unit(rng);
    }
    const ReferenceSample ref = sc.reference.sample(t);

    const ObserverEstimates pos_est = estimates_of(pos_obs, meas_pos);
    const ObserverEstimates att_est = estimates_of(att_obs, meas_att);

    try {
      if (k % position_every == 0) {
        switch (controller) {
          case ControllerKind::cascaded_ehgo:
          case ControllerKind::standard_ehgo: {
            const Vec3 x1 = meas_pos - ref.position;
            pos_est_err.rate = pos_est.rate - ref.velocity;
            pos_est_err.disturbance = pos_est.disturbance - ref.acceleration;
            const Vec3 demand = position_demand(x1, pos_est_err.rate, pos_est_err.disturbance,
                                                sc.gains.position, veh.nominal_mass);
            pos_sat = saturation_active(demand, sc.gains.position_sat);
            force_demand = demand;
            force_cmd = saturate(demand, sc.gains.position_sat);
            break;
          }
          case ControllerKind::pid: {
            RigidBodyState measured = state;
            measured.position = meas_pos;
            const TrackingError e =
                tracking_error(measured, reference_state(ref, attitude_sp, t));
            auto [next, u] = pid_position_step(pid_state, e, pid_cfg, sc.rates.position_dt);
            pid_state = next;
            force_cmd = u;
            force_demand = u;
            pos_sat = saturation_active(u, sc.gains.position_sat);
            break;
          }
          case ControllerKind::open_loop:
            force_cmd = sc.open_loop.thrust * kUnitZ;
            force_demand = force_cmd;
            break;
        }
        if (controller == ControllerKind::open_loop) {
          thrust = sc.open_loop.thrust;
          attitude_sp = EulerAngles{0.0, 0.0, ref.yaw};
        } else {
          const AttitudeSetpoint sp = attitude_setpoint(force_cmd, ref.yaw);
          thrust = sp.thrust;
          attitude_sp = sp.attitude;
        }
      }
    } catch (const TiltLimitError& e) {
      fault(t, "tilt_limit", e.what());
      break;
    }

    if (k % attitude_every == 0) {
      switch (controller) {
        case ControllerKind::cascaded_ehgo:
        case ControllerKind::standard_ehgo: {
          const Vec3 x1 = meas_att - attitude_sp.vector();
          att_est_err = att_est;
          const Vec3 demand = attitude_demand(x1, att_est_err.rate, att_est_err.disturbance,
                                              sc.gains.attitude, m0_att);
          att_sat = saturation_active(demand, sc.gains.attitude_sat);
          torque_demand = demand;
          torque_cmd = saturate(demand, sc.gains.attitude_sat);
          break;
        }
        case ControllerKind::pid: {
          RigidBodyState measured = state;
          measured.attitude = EulerAngles::from_vector(meas_att);
          const TrackingError e = tracking_error(measured, reference_state(ref, attitude_sp, t));
          auto [next, u] = pid_attitude_step(pid_state, e, pid_cfg, sc.rates.attitude_dt);
          pid_state = next;
          torque_cmd = u;
          torque_demand = u;
          att_sat = saturation_active(u, sc.gains.attitude_sat);
          break;
        }
        case ControllerKind::open_loop:
          torque_cmd = sc.open_loop.torque;
          torque_demand = torque_cmd;
          break;
      }
    }

    // The position observer is driven by the force the airframe actually
    // produces, F R(eta) e3, so attitude lag is not lumped into the
    // disturbance estimate (cancelling it would close a loop around the
    // attitude dynamics).
    const Vec3 applied_force = thrust * thrust_direction(EulerAngles::from_vector(meas_att));
    advance_observer(pos_obs, meas_pos, applied_force, dt);
    advance_observer(att_obs, meas_att, torque_cmd, dt);

    LogRecord rec;
    rec.t = t;
    rec.state = state;
    rec.reference = ref;
    rec.attitude_setpoint = attitude_sp;
    rec.error = tracking_error(state, reference_state(ref, attitude_sp, t));
    if (ehgo) {
      rec.position_estimate = pos_est_err;
      rec.attitude_estimate = att_est_err;
    }
    rec.force_command = force_cmd;
    rec.torque_command = torque_cmd;
    rec.force_demand = force_demand;
    rec.torque_demand = torque_demand;
    rec.thrust = thrust;
    rec.disturbance = evaluate(sc.disturbance, t);
    rec.position_saturated = pos_sat;
    rec.attitude_saturated = att_sat;
    const MixResult mix =
        motor_mixing(thrust, generalized_to_body_torque(state.attitude, torque_cmd), veh);
    rec.rotor_infeasible = mix.infeasible;
    rec.rotors = mix.thrusts;
    log.records.push_back(rec);

    if (k == steps) break;
    try {
      state = step_plant(state, thrust, torque_cmd, sc.disturbance, veh, dt);
    } catch (const SimulationFault& e) {
      fault(t + dt, e.kind(), e.what());
      break;
    }
  }
  return log;
}

TrajectoryLog run(const Scenario& scenario) {
  if (scenario.controllers.empty())
    throw ConfigError("controllers: at least one controller required");
  return run(scenario, scenario.controllers.front());
}

std::vector<TrajectoryLog> run_batch(const Scenario& scenario,
                                     std::span<const ControllerKind> controllers) {
  for (const ControllerKind c : controllers) {
    Scenario probe = scenario;
    probe.controllers = {c};
    probe.validate();
  }
  std::vector<std::future<TrajectoryLog>> jobs;
  jobs.reserve(controllers.size());
  for (const ControllerKind c : controllers)
    jobs.push_back(std::async(std::launch::async, [&scenario, c] { return run(scenario, c); }));
  std::vector<TrajectoryLog> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace ehgo
