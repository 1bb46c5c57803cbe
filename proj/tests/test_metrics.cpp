#include "ehgo/metrics.hpp"
#include "ehgo/scenario_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

using namespace ehgo;
using ehgo::testing::kSweep;
using ehgo::testing::Rng;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Synthetic log on a 0.01 s grid whose pitch error is err(t) (rad) and y error is err(t) (m).
TrajectoryLog synthetic(ControllerKind c, double t_end, const std::function<double(double)>& err) {
  TrajectoryLog log;
  log.controller = c;
  log.dt = 0.01;
  const long n = std::lround(t_end / log.dt);
  for (long k = 0; k <= n; ++k) {
    LogRecord r;
    r.t = k * log.dt;
    r.error.attitude.y() = err(r.t);
    r.error.position.y() = err(r.t);
    log.records.push_back(r);
  }
  return log;
}

double reference_mean(const char* loop, int axis, ControllerKind c) {
  for (const auto& row : hardware_reference_table())
    if (std::string(row.loop) == loop && row.axis == axis && row.controller == c) return row.mean;
  return std::nan("");
}

double reference_std(const char* loop, int axis, ControllerKind c) {
  for (const auto& row : hardware_reference_table())
    if (std::string(row.loop) == loop && row.axis == axis && row.controller == c) return row.std;
  return std::nan("");
}

}  // namespace

TEST(MeanStd, KnownValues) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const AxisStats s = mean_std(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.std, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.std, 0.8165, 5e-5);
}

TEST(ErrorStats, ConstantError) {
  const auto log = synthetic(ControllerKind::pid, 4.0, [](double) { return 2.0 * kDeg; });
  const ErrorStats s = error_stats(log, 0.0, 4.0);
  EXPECT_NEAR(s.attitude_deg[1].mean, 2.0, 1e-12);
  EXPECT_NEAR(s.attitude_deg[1].std, 0.0, 1e-12);
  EXPECT_NEAR(s.position_cm[1].mean, 200.0 * kDeg, 1e-12);
  EXPECT_EQ(s.samples, 401u);
  EXPECT_EQ(s.attitude_deg[0].mean, 0.0);
}

TEST(ErrorStats, AlternatingSignUsesMagnitude) {
  const double e = 0.03;
  const auto log = synthetic(ControllerKind::pid, 1.0, [e](double t) {
    return (std::lround(t / 0.01) % 2 == 0) ? e : -e;
  });
  const ErrorStats s = error_stats(log, 0.0, 1.0);
  EXPECT_NEAR(s.position_cm[1].mean, 3.0, 1e-12);
  EXPECT_NEAR(s.position_cm[1].std, 0.0, 1e-12);
}

TEST(ErrorStats, WindowSelectsSamples) {
  const auto log = synthetic(ControllerKind::pid, 10.0, [](double t) { return t < 5.0 ? 0.0 : 0.01; });
  const ErrorStats s = error_stats(log, 5.0, 10.0);
  EXPECT_EQ(s.samples, 501u);
  EXPECT_NEAR(s.position_cm[1].mean, 1.0, 1e-12);
  EXPECT_THROW(error_stats(log, -1.0, 3.0), ConfigError);
  EXPECT_THROW(error_stats(log, 2.0, 11.0), ConfigError);
  EXPECT_THROW(error_stats(log, 3.0, 2.0), ConfigError);
  EXPECT_THROW(error_stats(TrajectoryLog{}, 0.0, 1.0), ConfigError);
}

TEST(MeanStd, PermutationInvariantAndShiftRules) {
  Rng rng(60);
  for (int i = 0; i < kSweep; ++i) {
    std::vector<double> v(static_cast<std::size_t>(rng.uniform(1, 50)));
    for (auto& x : v) x = rng.uniform(0, 10);
    const AxisStats a = mean_std(v);
    std::vector<double> w = v;
    std::reverse(w.begin(), w.end());
    std::rotate(w.begin(), w.begin() + static_cast<long>(w.size() / 2), w.end());
    const AxisStats b = mean_std(w);
    ASSERT_NEAR(a.mean, b.mean, 1e-12);
    ASSERT_NEAR(a.std, b.std, 1e-12);
    const double c = rng.uniform(0, 5);
    for (auto& x : w) x += c;
    const AxisStats shifted = mean_std(w);
    ASSERT_NEAR(shifted.mean, a.mean + c, 1e-9);
    ASSERT_NEAR(shifted.std, a.std, 1e-9);
    ASSERT_GE(a.std, 0.0);
    ASSERT_LE(*std::min_element(v.begin(), v.end()), a.mean + 1e-12);
    ASSERT_GE(*std::max_element(v.begin(), v.end()), a.mean - 1e-12);
  }
}

TEST(PercentReduction, HardwareTableValues) {
  using C = ControllerKind;
  const auto att = [](C c) { return reference_mean("attitude", 1, c); };
  const auto att_sd = [](C c) { return reference_std("attitude", 1, c); };
  EXPECT_NEAR(percent_reduction(att(C::cascaded_ehgo), att(C::standard_ehgo)), 25.1, 0.05);
  EXPECT_NEAR(percent_reduction(att(C::cascaded_ehgo), att(C::pid)), 67.6, 0.05);
  EXPECT_NEAR(percent_reduction(att_sd(C::cascaded_ehgo), att_sd(C::standard_ehgo)), 79.3, 0.05);
  EXPECT_NEAR(percent_reduction(att_sd(C::cascaded_ehgo), att_sd(C::pid)), 83.6, 0.05);

  const auto pos = [](C c) { return reference_mean("position", 1, c); };
  const auto pos_sd = [](C c) { return reference_std("position", 1, c); };
  EXPECT_NEAR(percent_reduction(pos(C::cascaded_ehgo), pos(C::standard_ehgo)), 17.7, 0.05);
  EXPECT_NEAR(percent_reduction(pos(C::cascaded_ehgo), pos(C::pid)), 21.4, 0.05);
  EXPECT_NEAR(percent_reduction(pos_sd(C::cascaded_ehgo), pos_sd(C::standard_ehgo)), 22.31, 0.005);
  EXPECT_NEAR(percent_reduction(pos_sd(C::cascaded_ehgo), pos_sd(C::pid)), 33.3, 0.05);
  EXPECT_EQ(hardware_reference_table().size(), 18u);
}

TEST(Compare, IdenticalRunsGiveZeroReduction) {
  Scenario sc;
  sc.duration = 4.0;
  sc.metrics.window = std::make_pair(1.0, 3.0);
  auto a = synthetic(ControllerKind::cascaded_ehgo, 4.0, [](double t) { return 0.01 * t; });
  auto b = a;
  b.controller = ControllerKind::pid;
  const std::vector<TrajectoryLog> logs{a, b};
  const ComparisonReport r = compare_logs(sc, logs);
  ASSERT_EQ(r.results.size(), 2u);
  ASSERT_EQ(r.reductions.size(), 2u);
  const auto* red = r.find(ControllerKind::cascaded_ehgo, ControllerKind::pid);
  ASSERT_NE(red, nullptr);
  EXPECT_EQ(red->attitude_mean[1], 0.0);
  EXPECT_EQ(red->position_mean[1], 0.0);
  EXPECT_NEAR(r.find(ControllerKind::pid)->peak_position_error, 0.04, 1e-12);
}

TEST(Compare, FaultedRunIsDnf) {
  Scenario sc;
  sc.duration = 4.0;
  auto a = synthetic(ControllerKind::cascaded_ehgo, 4.0, [](double) { return 0.01; });
  auto b = synthetic(ControllerKind::standard_ehgo, 2.0, [](double) { return 0.02; });
  b.fault = Fault{2.0, "tilt_limit", "demanded tilt"};
  const std::vector<TrajectoryLog> logs{a, b};
  const ComparisonReport r = compare_logs(sc, logs);
  EXPECT_TRUE(r.find(ControllerKind::cascaded_ehgo)->stats.has_value());
  EXPECT_FALSE(r.find(ControllerKind::standard_ehgo)->stats.has_value());
  EXPECT_TRUE(r.reductions.empty());
}

TEST(MetricsWindow, DefaultsToDisturbanceIntervalWidened) {
  Scenario sc;
  sc.duration = 20.0;
  EXPECT_EQ(metrics_window(sc), std::make_pair(0.0, 20.0));
  DisturbancePrimitive p;
  p.kind = PrimitiveKind::gust_window;
  p.amplitude = 1.0;
  p.start = 6.0;
  p.end = 10.0;
  p.smoothing = 0.3;
  sc.disturbance.force.push_back(p);
  EXPECT_EQ(metrics_window(sc), std::make_pair(4.0, 12.0));
  sc.disturbance.force.back().start = 1.0;
  sc.disturbance.force.back().end = 19.0;
  EXPECT_EQ(metrics_window(sc), std::make_pair(0.0, 20.0));
  sc.metrics.window = std::make_pair(2.0, 3.0);
  EXPECT_EQ(metrics_window(sc), std::make_pair(2.0, 3.0));
}

TEST(Compare, PerchPresetStatsAreSelfConsistent) {
  const Scenario sc = load_scenario(ehgo::testing::scenario_path("perch_impact.json"));
  const auto run = compare(sc, sc.controllers);
  ASSERT_EQ(run.logs.size(), sc.controllers.size());
  for (const auto& res : run.report.results) {
    ASSERT_TRUE(res.stats.has_value()) << to_string(res.controller);
    // A sub-window mean cannot exceed the peak over the run.
    EXPECT_LE(res.stats->attitude_deg[1].mean, res.peak_attitude_error / kDeg + 1e-9);
    EXPECT_LE(res.stats->position_cm[1].mean, res.peak_position_error * 100.0 + 1e-9);
  }
}
