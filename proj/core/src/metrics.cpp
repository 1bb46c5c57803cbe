#include "ehgo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ehgo {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kMToCm = 100.0;

constexpr ReferenceRow kHardwareTable[] = {
    {"attitude", 0, ControllerKind::pid, 4.84, 1.60},
    {"attitude", 0, ControllerKind::standard_ehgo, 3.31, 1.09},
    {"attitude", 0, ControllerKind::cascaded_ehgo, 2.36, 0.24},
    {"attitude", 1, ControllerKind::pid, 4.14, 1.10},
    {"attitude", 1, ControllerKind::standard_ehgo, 1.79, 0.87},
    {"attitude", 1, ControllerKind::cascaded_ehgo, 1.34, 0.18},
    {"attitude", 2, ControllerKind::pid, 2.19, 0.89},
    {"attitude", 2, ControllerKind::standard_ehgo, 1.37, 0.25},
    {"attitude", 2, ControllerKind::cascaded_ehgo, 1.11, 0.18},
    {"position", 0, ControllerKind::pid, 7.44, 10.22},
    {"position", 0, ControllerKind::standard_ehgo, 7.28, 8.74},
    {"position", 0, ControllerKind::cascaded_ehgo, 5.67, 6.38},
    {"position", 1, ControllerKind::pid, 9.16, 12.22},
    {"position", 1, ControllerKind::standard_ehgo, 8.75, 10.49},
    {"position", 1, ControllerKind::cascaded_ehgo, 7.20, 8.15},
    {"position", 2, ControllerKind::pid, 8.35, 9.64},
    {"position", 2, ControllerKind::standard_ehgo, 7.61, 8.31},
    {"position", 2, ControllerKind::cascaded_ehgo, 3.33, 3.99},
};

}  // namespace

AxisStats mean_std(std::span<const double> samples) {
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (const double v : samples) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (const double v : samples) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

ErrorStats error_stats(const TrajectoryLog& log, double t0, double t1) {
  if (log.records.empty()) throw ConfigError("error_stats: empty log");
  if (!(t1 >= t0)) throw ConfigError("error_stats: window end before start");
  const double first = log.records.front().t;
  const double last = log.records.back().t;
  const double slack = 0.5 * log.dt;
  if (t0 < first - slack || t1 > last + slack) {
    std::ostringstream os;
    os << "error_stats: window [" << t0 << ", " << t1 << "] outside log [" << first << ", " << last
       << "]";
    throw ConfigError(os.str());
  }

  std::array<std::vector<double>, 3> att, pos;
  for (const auto& r : log.records) {
    if (r.t < t0 - 1e-12 || r.t > t1 + 1e-12) continue;
    for (int i = 0; i < 3; ++i) {
      att[i].push_back(std::abs(r.error.attitude[i]) * kRadToDeg);
      pos[i].push_back(std::abs(r.error.position[i]) * kMToCm);
    }
  }
  if (att[0].empty()) throw ConfigError("error_stats: window holds no samples");

  ErrorStats out;
  out.window_start = t0;
  out.window_end = t1;
  out.samples = att[0].size();
  for (int i = 0; i < 3; ++i) {
    out.attitude_deg[i] = mean_std(att[i]);
    out.position_cm[i] = mean_std(pos[i]);
  }
  return out;
}

std::pair<double, double> metrics_window(const Scenario& scenario) {
  if (scenario.metrics.window) return *scenario.metrics.window;
  if (const auto active = scenario.disturbance.active_interval()) {
    return {std::max(0.0, active->first - 2.0), std::min(scenario.duration, active->second + 2.0)};
  }
  return {0.0, scenario.duration};
}

double percent_reduction(double value, double baseline) {
  return 100.0 * (baseline - value) / baseline;
}

std::span<const ReferenceRow> hardware_reference_table() { return kHardwareTable; }

const ControllerResult* ComparisonReport::find(ControllerKind kind) const {
  for (const auto& r : results)
    if (r.controller == kind) return &r;
  return nullptr;
}

const PairwiseReduction* ComparisonReport::find(ControllerKind subject,
                                                ControllerKind baseline) const {
  for (const auto& r : reductions)
    if (r.subject == subject && r.baseline == baseline) return &r;
  return nullptr;
}

ComparisonReport compare_logs(const Scenario& scenario, std::span<const TrajectoryLog> logs) {
  ComparisonReport report;
  report.scenario = scenario.name;
  report.disturbance_note = scenario.disturbance.note;
  report.window = metrics_window(scenario);
  report.attitude_axis = scenario.metrics.attitude_axis;
  report.position_axis = scenario.metrics.position_axis;

  for (const auto& log : logs) {
    ControllerResult res;
    res.controller = log.controller;
    res.fault = log.fault;
    for (const auto& r : log.records) {
      res.peak_position_error = std::max(res.peak_position_error, r.error.position.norm());
      res.peak_attitude_error =
          std::max(res.peak_attitude_error, r.error.attitude.cwiseAbs().maxCoeff());
    }
    if (log.completed()) res.stats = error_stats(log, report.window.first, report.window.second);
    report.results.push_back(res);
  }

  for (const auto& a : report.results) {
    for (const auto& b : report.results) {
      if (&a == &b || !a.stats || !b.stats) continue;
      PairwiseReduction red;
      red.subject = a.controller;
      red.baseline = b.controller;
      for (int i = 0; i < 3; ++i) {
        red.attitude_mean[i] =
            percent_reduction(a.stats->attitude_deg[i].mean, b.stats->attitude_deg[i].mean);
        red.attitude_std[i] =
            percent_reduction(a.stats->attitude_deg[i].std, b.stats->attitude_deg[i].std);
        red.position_mean[i] =
            percent_reduction(a.stats->position_cm[i].mean, b.stats->position_cm[i].mean);
        red.position_std[i] =
            percent_reduction(a.stats->position_cm[i].std, b.stats->position_cm[i].std);
      }
      report.reductions.push_back(red);
    }
  }
  return report;
}

ComparisonRun compare(const Scenario& scenario, std::span<const ControllerKind> controllers) {
  ComparisonRun out;
  out.logs = run_batch(scenario, controllers);
  out.report = compare_logs(scenario, out.logs);
  return out;
}

}  // namespace ehgo
