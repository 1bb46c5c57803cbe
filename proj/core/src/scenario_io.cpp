#include "ehgo/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ehgo {

namespace {

using nlohmann::json;

#define EHGO_PRIMITIVE_FIELDS(prefix)                                                          \
  {prefix, "array<object>", "additive disturbance terms"},                                     \
  {prefix "[].kind", "string", "constant | ramp | sinusoid | smoothed_pulse | gust_window"},   \
  {prefix "[].direction", "number[3]", "axis mask / direction weights (default [1,0,0])"},     \
  {prefix "[].amplitude", "number", "magnitude (N or N m; slope for ramp)"},                   \
  {prefix "[].start", "number", "ramp start / window onset (s)"},                              \
  {prefix "[].end", "number", "ramp end / window release (s); omitted = never"},               \
  {prefix "[].center", "number", "pulse centre (s)"},                                          \
  {prefix "[].width", "number", "pulse flat-top width (s, default 0)"},                        \
  {prefix "[].frequency_hz", "number", "sinusoid frequency"},                                  \
  {prefix "[].phase", "number", "sinusoid phase (rad)"},                                       \
  {prefix "[].smoothing", "number", "rise/fall time (s)"},                                     \
  {prefix "[].wind_speed", "number", "gust: derive amplitude from drag at this speed (m/s)"},  \
  {prefix "[].air_density", "number", "gust: air density (kg/m^3, default 1.225)"},            \
  {prefix "[].drag_area", "number", "gust: drag coefficient times frontal area (m^2)"}

constexpr SchemaField kSchema[] = {
    {"name", "string", "scenario name, used in artifact file names"},
    {"description", "string", "free text"},
    {"duration", "number", "simulated time (s), integer multiple of rates.plant_dt"},
    {"seed", "integer", "seed for measurement jitter"},
    {"controllers", "array<string>", "cascaded_ehgo | standard_ehgo | pid | open_loop"},
    {"rates", "object", "loop periods"},
    {"rates.plant_dt", "number", "RK4 plant step and observer step (s, default 0.001)"},
    {"rates.attitude_dt", "number", "attitude law period (s, default 0.002)"},
    {"rates.position_dt", "number", "position law period (s, default 0.01)"},
    {"vehicle", "object", "true and nominal airframe parameters"},
    {"vehicle.mass", "number", "true mass m (kg)"},
    {"vehicle.nominal_mass", "number", "nominal mass m0 used by the controllers (kg)"},
    {"vehicle.inertia", "number[3]", "true diagonal body inertia J (kg m^2)"},
    {"vehicle.nominal_inertia", "number[3]", "nominal diagonal inertia J0 (kg m^2)"},
    {"vehicle.gravity", "number", "g (m/s^2)"},
    {"vehicle.axis_distance", "number", "motor-to-motor diagonal (m)"},
    {"vehicle.max_rotor_thrust", "number", "per-rotor thrust limit for mixing diagnostics (N)"},
    {"vehicle.yaw_drag_coefficient", "number", "rotor drag torque per unit thrust (m)"},
    {"gains", "object", "observer-based law gains and saturation"},
    {"gains.position", "object", "position loop"},
    {"gains.position.k1", "number", "K[0] (< 0)"},
    {"gains.position.k2", "number", "K[1] (< 0)"},
    {"gains.position.bound", "number", "saturation bound B_p (N)"},
    {"gains.position.h", "number", "saturation overshoot h in (0, 1]"},
    {"gains.attitude", "object", "attitude loop"},
    {"gains.attitude.k1", "number", "K[0] (< 0)"},
    {"gains.attitude.k2", "number", "K[1] (< 0)"},
    {"gains.attitude.bound", "number", "saturation bound B_a (N m)"},
    {"gains.attitude.h", "number", "saturation overshoot h in (0, 1]"},
    {"gains.saturation_mode", "string", "bounded | slope_limited | none"},
    {"observer", "object", "observer configuration"},
    {"observer.cascaded", "object", "cascaded observer"},
    {"observer.cascaded.l1", "number", "first-stage gain (> 0)"},
    {"observer.cascaded.l2", "number", "second-stage gain (> 0)"},
    {"observer.cascaded.epsilon", "number", "high-gain parameter (> 0)"},
    {"observer.standard", "object", "third-order observer"},
    {"observer.standard.alpha", "number[3]", "gains alpha1..3 (Hurwitz)"},
    {"observer.standard.epsilon", "number", "high-gain parameter (> 0)"},
    {"observer.initial_velocity_error", "number[3]", "error injected on the velocity estimate (m/s)"},
    {"observer.initial_rate_error", "number[3]", "error injected on the Euler-rate estimate (rad/s)"},
    {"pid", "object", "PID baseline gains (force / torque units)"},
    {"pid.position", "object", "position loop"},
    {"pid.position.kp", "number[3]", "proportional gains (N/m)"},
    {"pid.position.ki", "number[3]", "integral gains (N/(m s))"},
    {"pid.position.kd", "number[3]", "derivative gains (N s/m)"},
    {"pid.attitude", "object", "attitude loop"},
    {"pid.attitude.kp", "number[3]", "proportional gains (N m/rad)"},
    {"pid.attitude.ki", "number[3]", "integral gains (N m/(rad s))"},
    {"pid.attitude.kd", "number[3]", "derivative gains (N m s/rad)"},
    {"open_loop", "object", "fixed command for the open_loop controller"},
    {"open_loop.thrust", "number", "collective thrust (N)"},
    {"open_loop.torque", "number[3]", "torque (N m)"},
    {"disturbance", "object", "force and torque disturbance profile"},
    {"disturbance.note", "string", "calibration provenance, echoed into reports"},
    EHGO_PRIMITIVE_FIELDS("disturbance.force"),
    EHGO_PRIMITIVE_FIELDS("disturbance.torque"),
    {"reference", "object", "reference trajectory"},
    {"reference.type", "string", "hover | line | circle | waypoints"},
    {"reference.position", "number[3]", "hover point / line start / circle centre (m)"},
    {"reference.end", "number[3]", "line end (m)"},
    {"reference.start_time", "number", "line departure time (s)"},
    {"reference.travel_time", "number", "line travel time (s)"},
    {"reference.radius", "number", "circle radius (m)"},
    {"reference.angular_rate", "number", "circle angular rate (rad/s)"},
    {"reference.yaw", "number", "yaw setpoint (rad)"},
    {"reference.waypoints", "array<object>", "timed waypoints"},
    {"reference.waypoints[].time", "number", "arrival time (s)"},
    {"reference.waypoints[].position", "number[3]", "position (m)"},
    {"initial_state", "object", "overrides of the initial state (default: on the reference)"},
    {"initial_state.position", "number[3]", "m"},
    {"initial_state.velocity", "number[3]", "m/s"},
    {"initial_state.attitude", "number[3]", "roll, pitch, yaw (rad)"},
    {"initial_state.attitude_rate", "number[3]", "Euler rates (rad/s)"},
    {"measurement_noise", "object", "uniform measurement jitter"},
    {"measurement_noise.enabled", "boolean", "default false"},
    {"measurement_noise.position", "number", "half-width (m)"},
    {"measurement_noise.attitude", "number", "half-width (rad)"},
    {"metrics", "object", "error statistics settings"},
    {"metrics.window", "number[2]", "[t0, t1] (s); default: disturbance interval +- 2 s"},
    {"metrics.attitude_axis", "integer", "dominant attitude axis (0 roll, 1 pitch, 2 yaw)"},
    {"metrics.position_axis", "integer", "dominant position axis (0 x, 1 y, 2 z)"},
    {"output", "object", "artifact settings"},
    {"output.directory", "string", "default output directory (overridden by --out)"},
};

#undef EHGO_PRIMITIVE_FIELDS

bool known(const std::string& path) {
  return std::any_of(std::begin(kSchema), std::end(kSchema),
                     [&](const SchemaField& f) { return path == f.path; });
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Strict view of one JSON object at a schema path.
class Reader {
 public:
  Reader(const json& j, std::string path, std::string schema_path)
      : j_(j), path_(std::move(path)), schema_path_(std::move(schema_path)) {
    if (!j.is_object()) throw ConfigError(label() + ": expected an object");
    for (const auto& [key, value] : j.items()) {
      if (!known(join(schema_path_, key)))
        throw ConfigError("unknown key '" + join(path_, key) + "'");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <typename T>
  T require(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing key '" + join(path_, key) + "'");
    return as<T>(key);
  }

  Vec3 vec3(const std::string& key, const Vec3& fallback) const {
    if (!has(key)) return fallback;
    const auto v = as<std::vector<double>>(key);
    if (v.size() != 3) throw ConfigError(join(path_, key) + ": expected 3 numbers");
    return {v[0], v[1], v[2]};
  }

  Reader child(const std::string& key) const {
    return Reader(j_.at(key), join(path_, key), join(schema_path_, key));
  }

  const json& raw(const std::string& key) const { return j_.at(key); }
  std::string path(const std::string& key) const { return join(path_, key); }
  std::string schema_path(const std::string& key) const { return join(schema_path_, key); }

 private:
  std::string label() const { return path_.empty() ? "scenario" : path_; }

  template <typename T>
  T as(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(join(path_, key) + ": wrong type");
    }
  }

  const json& j_;
  std::string path_;
  std::string schema_path_;
};

// Converts ConfigErrors raised by domain constructors into path-qualified ones.
template <typename Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

DisturbancePrimitive read_primitive(const Reader& r) {
  DisturbancePrimitive p;
  p.kind = at_path(r.path("kind"),
                   [&] { return primitive_kind_from_string(r.require<std::string>("kind")); });
  p.direction = r.vec3("direction", Vec3::UnitX());
  p.start = r.get("start", 0.0);
  p.end = r.get("end", std::numeric_limits<double>::infinity());
  p.center = r.get("center", 0.0);
  p.width = r.get("width", 0.0);
  p.frequency_hz = r.get("frequency_hz", 0.0);
  p.phase = r.get("phase", 0.0);
  p.smoothing = r.get("smoothing", 0.0);
  if (r.has("wind_speed")) {
    if (r.has("amplitude"))
      throw ConfigError(r.path("amplitude") + ": give either amplitude or wind_speed, not both");
    p.amplitude = wind_drag_force(r.get("air_density", 1.225), r.require<double>("drag_area"),
                                  r.require<double>("wind_speed"));
  } else {
    p.amplitude = r.require<double>("amplitude");
  }
  return p;
}

std::vector<DisturbancePrimitive> read_primitives(const Reader& parent, const std::string& key) {
  std::vector<DisturbancePrimitive> out;
  if (!parent.has(key)) return out;
  const json& arr = parent.raw(key);
  if (!arr.is_array()) throw ConfigError(parent.path(key) + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = parent.path(key) + "[" + std::to_string(i) + "]";
    const Reader item(arr[i], path, parent.schema_path(key) + "[]");
    DisturbancePrimitive p = read_primitive(item);
    at_path(path, [&] { p.validate(); return 0; });
    out.push_back(p);
  }
  return out;
}

PidLoopGains read_pid_loop(const Reader& r, const PidLoopGains& fallback) {
  return {r.vec3("kp", fallback.kp), r.vec3("ki", fallback.ki), r.vec3("kd", fallback.kd)};
}

}  // namespace

std::span<const SchemaField> scenario_schema() { return kSchema; }

std::string scenario_schema_doc() {
  std::ostringstream os;
  os << "Scenario file schema (JSON; unknown keys are rejected)\n\n";
  std::size_t width = 0;
  for (const auto& f : kSchema) width = std::max(width, std::string(f.path).size());
  for (const auto& f : kSchema) {
    std::string path = f.path;
    os << "  " << path << std::string(width - path.size() + 2, ' ') << f.type;
    os << std::string(f.type == std::string("array<object>") ? 1 : 15 - std::string(f.type).size(), ' ');
    os << f.description << '\n';
  }
  return os.str();
}

Scenario scenario_from_json(const json& doc) {
  const Reader root(doc, "", "");
  Scenario sc;
  sc.name = root.get<std::string>("name", sc.name);
  sc.description = root.get<std::string>("description", "");
  sc.duration = root.require<double>("duration");
  sc.seed = root.get<std::uint64_t>("seed", sc.seed);

  if (root.has("controllers")) {
    sc.controllers.clear();
    for (const auto& name : root.require<std::vector<std::string>>("controllers"))
      sc.controllers.push_back(
          at_path("controllers", [&] { return controller_kind_from_string(name); }));
  }

  if (root.has("rates")) {
    const Reader r = root.child("rates");
    sc.rates.plant_dt = r.get("plant_dt", sc.rates.plant_dt);
    sc.rates.attitude_dt = r.get("attitude_dt", sc.rates.attitude_dt);
    sc.rates.position_dt = r.get("position_dt", sc.rates.position_dt);
  }

  if (root.has("vehicle")) {
    const Reader r = root.child("vehicle");
    auto& v = sc.vehicle;
    v.mass = r.get("mass", v.mass);
    v.nominal_mass = r.get("nominal_mass", v.nominal_mass);
    v.inertia = r.vec3("inertia", v.inertia);
    v.nominal_inertia = r.vec3("nominal_inertia", v.nominal_inertia);
    v.gravity = r.get("gravity", v.gravity);
    v.axis_distance = r.get("axis_distance", v.axis_distance);
    v.max_rotor_thrust = r.get("max_rotor_thrust", v.max_rotor_thrust);
    v.yaw_drag_coefficient = r.get("yaw_drag_coefficient", v.yaw_drag_coefficient);
  }
  // Default B_p tracks the nominal mass: 2 m0 g.
  sc.gains.position_sat = SatConfig(2.0 * sc.vehicle.nominal_mass * sc.vehicle.gravity, 0.1);

  if (root.has("gains")) {
    const Reader g = root.child("gains");
    const SatMode mode = at_path(g.path("saturation_mode"), [&] {
      return sat_mode_from_string(g.get<std::string>("saturation_mode", "bounded"));
    });
    auto loop = [&](const std::string& key, FeedbackGains& k, SatConfig& s) {
      if (!g.has(key)) {
        s = SatConfig(s.bound(), s.h(), mode);
        return;
      }
      const Reader r = g.child(key);
      k = at_path(g.path(key), [&] {
        return FeedbackGains(r.get("k1", k.k1()), r.get("k2", k.k2()));
      });
      s = at_path(g.path(key), [&] {
        return SatConfig(r.get("bound", s.bound()), r.get("h", s.h()), mode);
      });
    };
    loop("position", sc.gains.position, sc.gains.position_sat);
    loop("attitude", sc.gains.attitude, sc.gains.attitude_sat);
  }

  if (root.has("observer")) {
    const Reader o = root.child("observer");
    if (o.has("cascaded")) {
      const Reader c = o.child("cascaded");
      const auto& d = sc.observer.cascaded;
      sc.observer.cascaded = at_path(o.path("cascaded"), [&] {
        return CascadedGains(c.get("l1", d.l1()), c.get("l2", d.l2()),
                             c.get("epsilon", d.epsilon()));
      });
    }
    if (o.has("standard")) {
      const Reader s = o.child("standard");
      const auto& d = sc.observer.standard;
      std::array<double, 3> alpha = d.alpha();
      if (s.has("alpha")) {
        const auto v = s.require<std::vector<double>>("alpha");
        if (v.size() != 3) throw ConfigError(s.path("alpha") + ": expected 3 numbers");
        alpha = {v[0], v[1], v[2]};
      }
      sc.observer.standard = at_path(o.path("standard"), [&] {
        return StandardGains(alpha, s.get("epsilon", d.epsilon()));
      });
    }
    sc.observer.initial_velocity_error =
        o.vec3("initial_velocity_error", sc.observer.initial_velocity_error);
    sc.observer.initial_rate_error = o.vec3("initial_rate_error", sc.observer.initial_rate_error);
  }

  if (root.has("pid")) {
    const Reader p = root.child("pid");
    if (p.has("position")) sc.pid.position = read_pid_loop(p.child("position"), sc.pid.position);
    if (p.has("attitude")) sc.pid.attitude = read_pid_loop(p.child("attitude"), sc.pid.attitude);
  }

  if (root.has("open_loop")) {
    const Reader r = root.child("open_loop");
    sc.open_loop.thrust = r.get("thrust", 0.0);
    sc.open_loop.torque = r.vec3("torque", Vec3::Zero());
  }

  if (root.has("disturbance")) {
    const Reader d = root.child("disturbance");
    sc.disturbance.note = d.get<std::string>("note", "");
    sc.disturbance.force = read_primitives(d, "force");
    sc.disturbance.torque = read_primitives(d, "torque");
  }

  if (root.has("reference")) {
    const Reader r = root.child("reference");
    auto& ref = sc.reference;
    const auto type = r.get<std::string>("type", "hover");
    if (type == "hover") ref.kind = ReferenceKind::hover;
    else if (type == "line") ref.kind = ReferenceKind::line;
    else if (type == "circle") ref.kind = ReferenceKind::circle;
    else if (type == "waypoints") ref.kind = ReferenceKind::waypoints;
    else throw ConfigError(r.path("type") + ": unknown reference type '" + type + "'");
    ref.position = r.vec3("position", ref.position);
    ref.end = r.vec3("end", ref.end);
    ref.start_time = r.get("start_time", ref.start_time);
    ref.travel_time = r.get("travel_time", ref.travel_time);
    ref.radius = r.get("radius", ref.radius);
    ref.angular_rate = r.get("angular_rate", ref.angular_rate);
    ref.yaw = r.get("yaw", ref.yaw);
    if (r.has("waypoints")) {
      const json& arr = r.raw("waypoints");
      if (!arr.is_array()) throw ConfigError(r.path("waypoints") + ": expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const Reader w(arr[i], r.path("waypoints") + "[" + std::to_string(i) + "]",
                       r.schema_path("waypoints") + "[]");
        ref.waypoints.push_back({w.require<double>("time"), w.vec3("position", Vec3::Zero())});
      }
    }
  }

  if (root.has("initial_state")) {
    const Reader r = root.child("initial_state");
    auto opt = [&](const char* key) -> std::optional<Vec3> {
      if (!r.has(key)) return std::nullopt;
      return r.vec3(key, Vec3::Zero());
    };
    sc.initial.position = opt("position");
    sc.initial.velocity = opt("velocity");
    sc.initial.attitude = opt("attitude");
    sc.initial.attitude_rate = opt("attitude_rate");
  }

  if (root.has("measurement_noise")) {
    const Reader r = root.child("measurement_noise");
    sc.noise.enabled = r.get("enabled", false);
    sc.noise.position = r.get("position", 0.0);
    sc.noise.attitude = r.get("attitude", 0.0);
  }

  if (root.has("metrics")) {
    const Reader r = root.child("metrics");
    if (r.has("window")) {
      const auto w = r.require<std::vector<double>>("window");
      if (w.size() != 2) throw ConfigError(r.path("window") + ": expected [t0, t1]");
      sc.metrics.window = std::make_pair(w[0], w[1]);
    }
    sc.metrics.attitude_axis = r.get("attitude_axis", sc.metrics.attitude_axis);
    sc.metrics.position_axis = r.get("position_axis", sc.metrics.position_axis);
  }

  if (root.has("output")) {
    const Reader r = root.child("output");
    sc.output_dir = r.get<std::string>("directory", "");
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace ehgo
