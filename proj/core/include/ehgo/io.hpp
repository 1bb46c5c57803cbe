#pragma once

// Artifact rendering and writing. Every renderer is a pure function of its
// input, and numbers go through format_double, so artifacts are byte-stable.

#include "ehgo/metrics.hpp"
#include "ehgo/observers.hpp"
#include "ehgo/sim_engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehgo {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Writes to a sibling temp file, then renames over `path`. Creates parent dirs.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Column names of the per-tick log CSV, in order.
const std::vector<std::string>& log_csv_columns();
std::string log_csv(const TrajectoryLog& log);
nlohmann::json log_summary_json(const TrajectoryLog& log);

nlohmann::json report_json(const ComparisonReport& report);
/// Aligned text table of the comparison plus the hardware reference rows.
std::string report_table(const ComparisonReport& report);
/// controller,loop,axis,mean,std,unit rows.
std::string report_stats_csv(const ComparisonReport& report);

nlohmann::json scaling_json(const ScalingReport& report);
std::string scaling_table(const ScalingReport& report);

/// Base name used for artifacts: "<scenario>_<controller>".
std::string artifact_stem(const TrajectoryLog& log);

/// <stem>.csv and <stem>.json. Returns the written paths.
std::vector<std::filesystem::path> write_run_artifacts(const std::filesystem::path& dir,
                                                       const TrajectoryLog& log);
/// Every run's artifacts plus <scenario>_report.json, _report.txt, _stats.csv.
std::vector<std::filesystem::path> write_compare_artifacts(const std::filesystem::path& dir,
                                                           const ComparisonRun& run);

}  // namespace ehgo
