#pragma once

// Fixed-step closed-loop simulation. The plant is integrated with RK4 at the
// base rate; observers run at the base rate with forward Euler; control laws
// update at their loop rates and are held between ticks.

#include "ehgo/controllers.hpp"
#include "ehgo/disturbances.hpp"
#include "ehgo/dynamics.hpp"
#include "ehgo/observers.hpp"
#include "ehgo/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ehgo {

enum class ControllerKind { cascaded_ehgo, standard_ehgo, pid, open_loop };

std::string_view to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(std::string_view name);

/// Raised by step_plant when the state leaves the valid region.
class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// --- reference trajectories ---------------------------------------------------

struct ReferenceSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  double yaw = 0.0;
};

struct Waypoint {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
};

enum class ReferenceKind { hover, line, circle, waypoints };
std::string_view to_string(ReferenceKind kind);

/// hover: hold `position`. line: smoothstep from `position` to `end` over
/// [start_time, start_time + travel_time]. circle: radius/angular_rate about
/// `position` in the horizontal plane. waypoints: smoothstep between
/// consecutive timed points, holding the last one.
struct ReferenceTrajectory {
  ReferenceKind kind = ReferenceKind::hover;
  Vec3 position = Vec3::Zero();
  Vec3 end = Vec3::Zero();
  double start_time = 0.0;
  double travel_time = 1.0;
  double radius = 1.0;
  double angular_rate = 0.5;
  std::vector<Waypoint> waypoints;
  double yaw = 0.0;

  ReferenceSample sample(double t) const;
  void validate() const;
};

// --- scenario ------------------------------------------------------------------

struct Rates {
  double plant_dt = 0.001;
  double attitude_dt = 0.002;
  double position_dt = 0.01;
};

struct LoopGains {
  FeedbackGains position{-4.0, -4.0};
  FeedbackGains attitude{-25.0, -10.0};
  SatConfig position_sat{2.0 * 2.7 * 9.81, 0.1};
  SatConfig attitude_sat{1.5, 0.1};
};

struct ObserverConfig {
  CascadedGains cascaded{2.0, 2.0, 0.02};
  StandardGains standard{{6.0, 11.0, 6.0}, 0.03};
  /// Initial error injected on the velocity-level estimate of each loop. For
  /// the cascaded observer it is applied to the first stage, so the second
  /// stage sees it amplified by l2/eps.
  Vec3 initial_velocity_error = Vec3::Zero();
  Vec3 initial_rate_error = Vec3::Zero();
};

struct PidGains {
  PidLoopGains position{{10.8, 10.8, 10.8}, {5.4, 5.4, 5.4}, {10.8, 10.8, 10.8}};
  PidLoopGains attitude{{0.525, 0.525, 0.9}, {0.21, 0.21, 0.36}, {0.21, 0.21, 0.36}};
};

struct OpenLoopCommand {
  double thrust = 0.0;
  Vec3 torque = Vec3::Zero();
};

struct InitialState {
  std::optional<Vec3> position;
  std::optional<Vec3> velocity;
  std::optional<Vec3> attitude;
  std::optional<Vec3> attitude_rate;
};

struct MeasurementNoise {
  bool enabled = false;
  double position = 0.0;  // uniform half-width (m)
  double attitude = 0.0;  // uniform half-width (rad)
};

struct MetricsConfig {
  std::optional<std::pair<double, double>> window;
  int attitude_axis = 1;  // dominant axis reported in comparisons
  int position_axis = 1;
};

struct Scenario {
  std::string name = "scenario";
  std::string description;
  VehicleParams vehicle;
  std::vector<ControllerKind> controllers{ControllerKind::cascaded_ehgo};
  LoopGains gains;
  ObserverConfig observer;
  PidGains pid;
  OpenLoopCommand open_loop;
  DisturbanceProfile disturbance;
  ReferenceTrajectory reference;
  InitialState initial;
  double duration = 10.0;
  Rates rates;
  std::uint64_t seed = 1;
  MeasurementNoise noise;
  MetricsConfig metrics;
  std::string output_dir;

  /// Rate ordering, observer stiffness guards and parameter ranges. Throws ConfigError.
  void validate() const;
  /// Number of plant ticks; the log holds steps() + 1 records.
  long steps() const;
  /// Constant nominal attitude inertia M0 = M(0) built from the nominal body inertia.
  Mat3 nominal_attitude_inertia() const;
};

// --- log ---------------------------------------------------------------------------

struct LogRecord {
  double t = 0.0;
  RigidBodyState state;
  ReferenceSample reference;
  EulerAngles attitude_setpoint;
  TrackingError error;
  ObserverEstimates position_estimate;  // error coordinates, as used by the law
  ObserverEstimates attitude_estimate;
  Vec3 force_command = Vec3::Zero();    // u_p
  Vec3 torque_command = Vec3::Zero();   // u_a (applied tau)
  // Observer-based laws: the unsaturated demands. Other controllers: equal to the commands.
  Vec3 force_demand = Vec3::Zero();
  Vec3 torque_demand = Vec3::Zero();
  double thrust = 0.0;                  // collective F
  DisturbanceSample disturbance;
  bool position_saturated = false;
  bool attitude_saturated = false;
  bool rotor_infeasible = false;
  RotorThrusts rotors{};
};

struct Fault {
  double time = 0.0;
  std::string kind;  // "gimbal_lock", "non_finite", "tilt_limit"
  std::string message;
};

struct TrajectoryLog {
  std::string scenario;
  ControllerKind controller = ControllerKind::cascaded_ehgo;
  double dt = 0.0;
  std::vector<LogRecord> records;
  std::optional<Fault> fault;

  bool completed() const { return !fault.has_value(); }
};

/// One RK4 step of the 12-state model with thrust and torque held and the
/// disturbance evaluated at the stage times. Throws SimulationFault.
RigidBodyState step_plant(const RigidBodyState& state, double thrust, const Vec3& torque,
                          const DisturbanceProfile& disturbance, const VehicleParams& params,
                          double dt);

/// Deterministic closed-loop run. Configuration problems throw ConfigError
/// before any stepping; flight faults end the log with a Fault record.
TrajectoryLog run(const Scenario& scenario, ControllerKind controller);
TrajectoryLog run(const Scenario& scenario);

/// One run per controller, executed concurrently. Output order follows input.
std::vector<TrajectoryLog> run_batch(const Scenario& scenario,
                                     std::span<const ControllerKind> controllers);

}  // namespace ehgo
