#include "ehgo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

namespace ehgo {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  const auto res = std::to_chars(std::begin(buf), std::end(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);  // JSON has no inf / nan
}

void put(std::string& row, double v) {
  row += format_double(v);
  row += ',';
}

void put(std::string& row, const Vec3& v) {
  for (int i = 0; i < 3; ++i) put(row, v[i]);
}

void put(std::string& row, bool b) {
  row += b ? '1' : '0';
  row += ',';
}

constexpr const char* kAxes[3] = {"x", "y", "z"};
constexpr const char* kAngles[3] = {"roll", "pitch", "yaw"};

std::vector<std::string> build_columns() {
  std::vector<std::string> c{"t"};
  auto add3 = [&](const std::string& prefix, const char* const* names) {
    for (int i = 0; i < 3; ++i) c.push_back(prefix + names[i]);
  };
  add3("", kAxes);
  add3("v", kAxes);
  add3("", kAngles);
  add3("rate_", kAngles);
  add3("ref_", kAxes);
  c.push_back("ref_yaw");
  add3("sp_", kAngles);
  add3("e_", kAxes);
  add3("e_", kAngles);
  add3("pos_rate_hat_", kAxes);
  add3("pos_dist_hat_", kAxes);
  add3("att_rate_hat_", kAngles);
  add3("att_dist_hat_", kAngles);
  add3("u_p", kAxes);
  add3("u_a_", kAngles);
  add3("u_p_demand_", kAxes);
  add3("u_a_demand_", kAngles);
  c.push_back("thrust");
  add3("d_f", kAxes);
  add3("d_tau_", kAngles);
  c.push_back("pos_saturated");
  c.push_back("att_saturated");
  c.push_back("rotor_infeasible");
  for (int i = 1; i <= 4; ++i) c.push_back("rotor" + std::to_string(i));
  return c;
}

json stats_json(const ErrorStats& s) {
  json att = json::array(), pos = json::array();
  for (int i = 0; i < 3; ++i) {
    att.push_back({{"axis", kAngles[i]}, {"mean_deg", s.attitude_deg[i].mean},
                   {"std_deg", s.attitude_deg[i].std}});
    pos.push_back({{"axis", kAxes[i]}, {"mean_cm", s.position_cm[i].mean},
                   {"std_cm", s.position_cm[i].std}});
  }
  return {{"window", {s.window_start, s.window_end}},
          {"samples", s.samples},
          {"attitude", att},
          {"position", pos}};
}

json fault_json(const std::optional<Fault>& f) {
  if (!f) return nullptr;
  return {{"time", f->time}, {"kind", f->kind}, {"message", f->message}};
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return format_double(v);
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

}  // namespace

const std::vector<std::string>& log_csv_columns() {
  static const std::vector<std::string> cols = build_columns();
  return cols;
}

std::string log_csv(const TrajectoryLog& log) {
  std::string out;
  const auto& cols = log_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += cols[i];
    out += i + 1 < cols.size() ? ',' : '\n';
  }
  std::string row;
  for (const auto& r : log.records) {
    row.clear();
    put(row, r.t);
    put(row, r.state.position);
    put(row, r.state.velocity);
    put(row, r.state.attitude.vector());
    put(row, r.state.attitude_rate);
    put(row, r.reference.position);
    put(row, r.reference.yaw);
    put(row, r.attitude_setpoint.vector());
    put(row, r.error.position);
    put(row, r.error.attitude);
    put(row, r.position_estimate.rate);
    put(row, r.position_estimate.disturbance);
    put(row, r.attitude_estimate.rate);
    put(row, r.attitude_estimate.disturbance);
    put(row, r.force_command);
    put(row, r.torque_command);
    put(row, r.force_demand);
    put(row, r.torque_demand);
    put(row, r.thrust);
    put(row, r.disturbance.force);
    put(row, r.disturbance.torque);
    put(row, r.position_saturated);
    put(row, r.attitude_saturated);
    put(row, r.rotor_infeasible);
    for (const double f : r.rotors) put(row, f);
    row.back() = '\n';
    out += row;
  }
  return out;
}

json log_summary_json(const TrajectoryLog& log) {
  double peak_pos = 0.0, peak_att = 0.0, peak_force = 0.0, peak_torque = 0.0;
  std::size_t pos_sat = 0, att_sat = 0, infeasible = 0;
  for (const auto& r : log.records) {
    peak_pos = std::max(peak_pos, r.error.position.norm());
    peak_att = std::max(peak_att, r.error.attitude.cwiseAbs().maxCoeff());
    peak_force = std::max(peak_force, r.force_command.cwiseAbs().maxCoeff());
    peak_torque = std::max(peak_torque, r.torque_command.cwiseAbs().maxCoeff());
    pos_sat += r.position_saturated;
    att_sat += r.attitude_saturated;
    infeasible += r.rotor_infeasible;
  }
  json j{{"scenario", log.scenario},
         {"controller", to_string(log.controller)},
         {"dt", log.dt},
         {"records", log.records.size()},
         {"completed", log.completed()},
         {"fault", fault_json(log.fault)},
         {"peak_position_error_m", peak_pos},
         {"peak_attitude_error_rad", peak_att},
         {"peak_force_command_n", peak_force},
         {"peak_torque_command_nm", peak_torque},
         {"position_saturated_ticks", pos_sat},
         {"attitude_saturated_ticks", att_sat},
         {"rotor_infeasible_ticks", infeasible}};
  if (!log.records.empty()) {
    const auto& last = log.records.back();
    j["final_time"] = last.t;
    j["final_position"] = vec_json(last.state.position);
    j["final_attitude"] = vec_json(last.state.attitude.vector());
  }
  return j;
}

json report_json(const ComparisonReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back({{"controller", to_string(r.controller)},
                       {"status", r.stats ? "ok" : "dnf"},
                       {"fault", fault_json(r.fault)},
                       {"peak_position_error_m", r.peak_position_error},
                       {"peak_attitude_error_rad", r.peak_attitude_error},
                       {"stats", r.stats ? stats_json(*r.stats) : json(nullptr)}});
  }
  json reductions = json::array();
  for (const auto& red : report.reductions) {
    auto arr = [](const std::array<double, 3>& a) {
      return json::array({number(a[0]), number(a[1]), number(a[2])});
    };
    reductions.push_back({{"subject", to_string(red.subject)},
                          {"baseline", to_string(red.baseline)},
                          {"attitude_mean_pct", arr(red.attitude_mean)},
                          {"attitude_std_pct", arr(red.attitude_std)},
                          {"position_mean_pct", arr(red.position_mean)},
                          {"position_std_pct", arr(red.position_std)}});
  }
  json hardware = json::array();
  for (const auto& row : hardware_reference_table()) {
    hardware.push_back({{"loop", row.loop},
                        {"axis", row.axis},
                        {"controller", to_string(row.controller)},
                        {"mean", row.mean},
                        {"std", row.std}});
  }
  return {{"scenario", report.scenario},
          {"disturbance_note", report.disturbance_note},
          {"window", {report.window.first, report.window.second}},
          {"attitude_axis", kAngles[report.attitude_axis]},
          {"position_axis", kAxes[report.position_axis]},
          {"results", results},
          {"reductions", reductions},
          {"hardware_reference", {{"note", "hardware flight values; reference only, not a target"},
                                  {"rows", hardware}}}};
}

std::string report_table(const ComparisonReport& report) {
  std::ostringstream os;
  os << "scenario " << report.scenario << "  window [" << fixed(report.window.first, 2) << ", "
     << fixed(report.window.second, 2) << "] s\n";
  if (!report.disturbance_note.empty()) os << "disturbance: " << report.disturbance_note << '\n';
  os << '\n';

  os << pad("controller", 16);
  for (int i = 0; i < 3; ++i) os << lpad(std::string(kAngles[i]) + " deg", 18);
  for (int i = 0; i < 3; ++i) os << lpad(std::string(kAxes[i]) + " cm", 18);
  os << '\n';
  for (const auto& r : report.results) {
    os << pad(std::string(to_string(r.controller)), 16);
    if (!r.stats) {
      os << "DNF";
      if (r.fault) os << " (" << r.fault->kind << " at t=" << fixed(r.fault->time, 3) << " s)";
      os << '\n';
      continue;
    }
    auto cell = [](const AxisStats& s) { return lpad(fixed(s.mean, 3) + " +- " + fixed(s.std, 3), 18); };
    for (int i = 0; i < 3; ++i) os << cell(r.stats->attitude_deg[i]);
    for (int i = 0; i < 3; ++i) os << cell(r.stats->position_cm[i]);
    os << '\n';
  }

  const int a = report.attitude_axis;
  const int p = report.position_axis;
  bool header = false;
  for (const auto& red : report.reductions) {
    if (red.baseline == red.subject) continue;
    if (!header) {
      os << "\nmean |error| reduction (%), " << kAngles[a] << " / " << kAxes[p] << '\n';
      header = true;
    }
    os << "  " << pad(std::string(to_string(red.subject)), 14) << " vs "
       << pad(std::string(to_string(red.baseline)), 14) << lpad(fixed(red.attitude_mean[a], 1), 8)
       << lpad(fixed(red.position_mean[p], 1), 8) << '\n';
  }

  os << "\nhardware reference (not a target)\n";
  for (const auto& row : hardware_reference_table()) {
    const bool att = std::string(row.loop) == "attitude";
    os << "  " << pad(row.loop, 9) << pad(att ? kAngles[row.axis] : kAxes[row.axis], 6)
       << pad(std::string(to_string(row.controller)), 16) << lpad(fixed(row.mean, 2), 7) << " +- "
       << fixed(row.std, 2) << (att ? " deg" : " cm") << '\n';
  }
  return os.str();
}

std::string report_stats_csv(const ComparisonReport& report) {
  std::string out = "controller,loop,axis,mean,std,unit\n";
  for (const auto& r : report.results) {
    if (!r.stats) continue;
    const std::string name(to_string(r.controller));
    for (int i = 0; i < 3; ++i) {
      out += name + ",attitude," + kAngles[i] + "," + format_double(r.stats->attitude_deg[i].mean) +
             "," + format_double(r.stats->attitude_deg[i].std) + ",deg\n";
    }
    for (int i = 0; i < 3; ++i) {
      out += name + ",position," + kAxes[i] + "," + format_double(r.stats->position_cm[i].mean) +
             "," + format_double(r.stats->position_cm[i].std) + ",cm\n";
    }
  }
  return out;
}

json scaling_json(const ScalingReport& report) {
  json pts = json::array();
  for (const auto& p : report.points)
    pts.push_back({{"epsilon", p.epsilon}, {"residual", number(p.residual)}, {"dt", p.dt}});
  return {{"observer", to_string(report.kind)},
          {"status", to_string(report.status)},
          {"slope", number(report.slope)},
          {"points", pts}};
}

std::string scaling_table(const ScalingReport& report) {
  std::ostringstream os;
  os << "observer " << to_string(report.kind) << '\n';
  os << lpad("epsilon", 10) << lpad("dt", 26) << lpad("residual", 26) << '\n';
  for (const auto& p : report.points) {
    os << lpad(format_double(p.epsilon), 10) << lpad(format_double(p.dt), 26)
       << lpad(format_double(p.residual), 26) << '\n';
  }
  os << "status " << to_string(report.status);
  if (report.status == ScalingStatus::ok) os << "  log-log slope " << fixed(report.slope, 4);
  os << '\n';
  return os.str();
}

std::string artifact_stem(const TrajectoryLog& log) {
  return log.scenario + "_" + std::string(to_string(log.controller));
}

std::vector<fs::path> write_run_artifacts(const fs::path& dir, const TrajectoryLog& log) {
  const std::string stem = artifact_stem(log);
  const fs::path csv = dir / (stem + ".csv");
  const fs::path summary = dir / (stem + ".json");
  write_file_atomic(csv, log_csv(log));
  write_file_atomic(summary, log_summary_json(log).dump(2) + "\n");
  return {csv, summary};
}

std::vector<fs::path> write_compare_artifacts(const fs::path& dir, const ComparisonRun& run) {
  std::vector<fs::path> out;
  for (const auto& log : run.logs) {
    auto paths = write_run_artifacts(dir, log);
    out.insert(out.end(), paths.begin(), paths.end());
  }
  const std::string stem = run.report.scenario;
  const fs::path js = dir / (stem + "_report.json");
  const fs::path txt = dir / (stem + "_report.txt");
  const fs::path csv = dir / (stem + "_stats.csv");
  write_file_atomic(js, report_json(run.report).dump(2) + "\n");
  write_file_atomic(txt, report_table(run.report));
  write_file_atomic(csv, report_stats_csv(run.report));
  out.insert(out.end(), {js, txt, csv});
  return out;
}

}  // namespace ehgo
