#pragma once

// Per-axis error statistics and multi-controller comparison reports.
// Statistics are taken over |error| per tick with the population standard
// deviation; attitude is reported in degrees and position in centimetres.

#include "ehgo/sim_engine.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ehgo {

struct AxisStats {
  double mean = 0.0;
  double std = 0.0;
};

struct ErrorStats {
  std::array<AxisStats, 3> attitude_deg{};
  std::array<AxisStats, 3> position_cm{};
  double window_start = 0.0;
  double window_end = 0.0;
  std::size_t samples = 0;
};

/// Mean and population std of a sample set (must be non-empty).
AxisStats mean_std(std::span<const double> samples);

/// Stats over records with t in [t0, t1]. Throws ConfigError if the window
/// lies outside the log or holds no samples.
ErrorStats error_stats(const TrajectoryLog& log, double t0, double t1);

/// Configured window, else the disturbance-active interval widened by 2 s
/// and clipped to the run, else the whole run.
std::pair<double, double> metrics_window(const Scenario& scenario);

/// 100 (baseline - value) / baseline.
double percent_reduction(double value, double baseline);

struct ControllerResult {
  ControllerKind controller = ControllerKind::cascaded_ehgo;
  std::optional<ErrorStats> stats;  // empty when the run did not finish (DNF)
  std::optional<Fault> fault;
  double peak_position_error = 0.0;  // max ||e_s|| over the run (m)
  double peak_attitude_error = 0.0;  // max ||e_eta||_inf over the run (rad)
};

struct PairwiseReduction {
  ControllerKind subject = ControllerKind::cascaded_ehgo;
  ControllerKind baseline = ControllerKind::pid;
  std::array<double, 3> attitude_mean{};
  std::array<double, 3> attitude_std{};
  std::array<double, 3> position_mean{};
  std::array<double, 3> position_std{};
};

/// One row of the published hardware comparison table.
struct ReferenceRow {
  const char* loop;  // "attitude" (deg) or "position" (cm)
  int axis;
  ControllerKind controller;
  double mean;
  double std;
};

/// Hardware flight results used as a side-by-side reference, not a target.
std::span<const ReferenceRow> hardware_reference_table();

struct ComparisonReport {
  std::string scenario;
  std::string disturbance_note;
  std::pair<double, double> window{0.0, 0.0};
  int attitude_axis = 1;
  int position_axis = 1;
  std::vector<ControllerResult> results;
  std::vector<PairwiseReduction> reductions;  // every ordered pair of finished runs

  const ControllerResult* find(ControllerKind kind) const;
  const PairwiseReduction* find(ControllerKind subject, ControllerKind baseline) const;
};

ComparisonReport compare_logs(const Scenario& scenario, std::span<const TrajectoryLog> logs);

struct ComparisonRun {
  std::vector<TrajectoryLog> logs;
  ComparisonReport report;
};

/// Runs every controller on the scenario and builds the report.
ComparisonRun compare(const Scenario& scenario, std::span<const ControllerKind> controllers);

}  // namespace ehgo
