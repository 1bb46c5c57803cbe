#include "cli/cli.hpp"

#include "ehgo/io.hpp"
#include "ehgo/metrics.hpp"
#include "ehgo/observers.hpp"
#include "ehgo/scenario_io.hpp"
#include "ehgo/sim_engine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>

namespace ehgo::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error\n"
    "  2  configuration error (scenario file or flags)\n"
    "  3  simulation fault in at least one run (run / batch)\n"
    "  4  I/O error writing artifacts\n";

struct ScenarioFlags {
  std::vector<std::string> scenarios;
  std::string out;
  std::vector<std::string> controllers;
  std::optional<std::uint64_t> seed;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, bool many) {
  auto* opt = cmd->add_option("--scenario", f.scenarios, "scenario JSON file")->required();
  if (!many) opt->expected(1);
  cmd->add_option("--out", f.out,
                  "artifact directory (default: output.directory from the scenario, else ./out)");
  cmd->add_option("--controller", f.controllers,
                  "controller to run, repeatable: cascaded_ehgo, standard_ehgo, pid, open_loop "
                  "(default: the scenario's list)");
  cmd->add_option("--seed", f.seed, "override the scenario seed");
}

Scenario load(const std::string& path, const ScenarioFlags& f) {
  Scenario sc = load_scenario(path);
  if (f.seed) sc.seed = *f.seed;
  if (!f.controllers.empty()) {
    sc.controllers.clear();
    for (const auto& name : f.controllers) sc.controllers.push_back(controller_kind_from_string(name));
  }
  return sc;
}

fs::path out_dir(const Scenario& sc, const ScenarioFlags& f) {
  if (!f.out.empty()) return f.out;
  if (!sc.output_dir.empty()) return sc.output_dir;
  return "out";
}

void print_paths(std::ostream& out, const std::vector<fs::path>& paths) {
  for (const auto& p : paths) out << "wrote " << p.string() << '\n';
}

void print_run(std::ostream& out, const TrajectoryLog& log) {
  out << log.scenario << ' ' << to_string(log.controller) << ": ";
  if (log.fault) {
    out << "FAULT " << log.fault->kind << " at t=" << format_double(log.fault->time) << " s ("
        << log.fault->message << ")\n";
    return;
  }
  const auto s = log_summary_json(log);
  out << "completed, " << log.records.size() << " records, peak |e_s| "
      << format_double(s["peak_position_error_m"].get<double>()) << " m\n";
}

// Runs every selected controller; writes per-run artifacts and, with two or
// more controllers, the comparison report. Returns true if any run faulted.
bool execute(const Scenario& sc, const fs::path& dir, bool always_report, std::ostream& out) {
  const ComparisonRun run = compare(sc, sc.controllers);
  for (const auto& log : run.logs) print_run(out, log);
  if (always_report || run.logs.size() > 1) {
    print_paths(out, write_compare_artifacts(dir, run));
    out << '\n' << report_table(run.report);
  } else {
    print_paths(out, write_run_artifacts(dir, run.logs.front()));
  }
  return std::any_of(run.logs.begin(), run.logs.end(),
                     [](const TrajectoryLog& l) { return !l.completed(); });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadrotor simulator with cascaded and standard extended high-gain observers", "ehgo-sim"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "run one scenario and write per-run CSV/JSON logs");
  add_scenario_flags(run_cmd, run_flags, false);

  ScenarioFlags batch_flags;
  auto* batch_cmd = app.add_subcommand("batch", "run several scenario files in turn");
  add_scenario_flags(batch_cmd, batch_flags, true);

  ScenarioFlags cmp_flags;
  auto* cmp_cmd = app.add_subcommand(
      "compare", "run controllers on one scenario and write the error-statistics report");
  add_scenario_flags(cmp_cmd, cmp_flags, false);

  std::string observer = "cascaded";
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
  std::string scaling_out;
  auto* sc_cmd = app.add_subcommand(
      "scaling", "disturbance-estimation residual versus epsilon on a double integrator");
  sc_cmd->add_option("--observer", observer, "cascaded | standard")->capture_default_str();
  sc_cmd->add_option("--epsilon", epsilons, "comma-separated epsilon list (at least 3 values)")
      ->delimiter(',')
      ->capture_default_str();
  sc_cmd->add_option("--out", scaling_out, "directory for scaling_<observer>.json");

  auto* schema_cmd = app.add_subcommand("schema", "print the scenario file schema and CSV columns");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*schema_cmd) {
      out << scenario_schema_doc() << "\nLog CSV columns:\n";
      for (const auto& c : log_csv_columns()) out << "  " << c << '\n';
      out << '\n' << kExitCodes;
      return kOk;
    }
    if (*sc_cmd) {
      std::vector<double> sorted = epsilons;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      if (sorted.size() < 3) {
        err << "scaling: --epsilon needs at least 3 distinct values\n";
        return kUsage;
      }
      const ScalingReport report =
          estimation_error_scaling(observer_kind_from_string(observer), epsilons);
      out << scaling_table(report);
      if (!scaling_out.empty()) {
        const fs::path p = fs::path(scaling_out) / ("scaling_" + observer + ".json");
        write_file_atomic(p, scaling_json(report).dump(2) + "\n");
        print_paths(out, {p});
      }
      return kOk;
    }
    if (*run_cmd) {
      const Scenario sc = load(run_flags.scenarios.front(), run_flags);
      return execute(sc, out_dir(sc, run_flags), false, out) ? kSimulationFault : kOk;
    }
    if (*cmp_cmd) {
      const Scenario sc = load(cmp_flags.scenarios.front(), cmp_flags);
      execute(sc, out_dir(sc, cmp_flags), true, out);
      return kOk;  // faults are reported as DNF rows
    }
    if (*batch_cmd) {
      std::vector<Scenario> scenarios;
      for (const auto& path : batch_flags.scenarios) scenarios.push_back(load(path, batch_flags));
      bool faulted = false;
      for (const auto& sc : scenarios) faulted |= execute(sc, out_dir(sc, batch_flags), false, out);
      return faulted ? kSimulationFault : kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

}  // namespace ehgo::cli
