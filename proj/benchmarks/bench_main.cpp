#include "ehgo/metrics.hpp"
#include "ehgo/observers.hpp"
#include "ehgo/scenario_io.hpp"
#include "ehgo/sim_engine.hpp"

#include <benchmark/benchmark.h>

using namespace ehgo;

static void BM_CascadedObserverStep(benchmark::State& st) {
  const CascadedGains g(2.0, 2.0, 0.02);
  auto s = make_cascaded_ehgo(g, Mat3::Identity() / 2.7);
  const Vec3 y(0.1, -0.2, 1.0), u(0.0, 0.0, 26.5);
  for (auto _ : st) {
    auto [next, est] = cascaded_ehgo_step(s, y, u, 0.001);
    benchmark::DoNotOptimize(est);
    s = next;
  }
}
BENCHMARK(BM_CascadedObserverStep);

static void BM_StandardObserverStep(benchmark::State& st) {
  const StandardGains g({6.0, 11.0, 6.0}, 0.03);
  auto s = make_standard_ehgo(g, Mat3::Identity() / 2.7);
  const Vec3 y(0.1, -0.2, 1.0), u(0.0, 0.0, 26.5);
  for (auto _ : st) {
    auto [next, est] = standard_ehgo_step(s, y, u, 0.001);
    benchmark::DoNotOptimize(est);
    s = next;
  }
}
BENCHMARK(BM_StandardObserverStep);

static void BM_PlantStep(benchmark::State& st) {
  const VehicleParams p;
  RigidBodyState s;
  s.attitude = {0.05, -0.03, 0.2};
  s.attitude_rate = {0.1, 0.2, -0.1};
  DisturbanceProfile d;
  DisturbancePrimitive pulse;
  pulse.kind = PrimitiveKind::smoothed_pulse;
  pulse.direction = Vec3::UnitY();
  pulse.amplitude = 0.8;
  pulse.center = 0.5;
  pulse.smoothing = 0.02;
  d.torque.push_back(pulse);
  for (auto _ : st) {
    RigidBodyState next = step_plant(s, p.mass * p.gravity, Vec3(0.001, 0.0, 0.0), d, p, 0.001);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_PlantStep);

static void BM_PerchImpactRun(benchmark::State& st) {
  const Scenario sc = load_scenario(EHGO_SCENARIO_DIR "/perch_impact.json");
  const auto kind = static_cast<ControllerKind>(st.range(0));
  for (auto _ : st) {
    TrajectoryLog log = run(sc, kind);
    benchmark::DoNotOptimize(log.records.data());
  }
  st.SetItemsProcessed(st.iterations() * sc.steps());
}
BENCHMARK(BM_PerchImpactRun)
    ->Arg(static_cast<int>(ControllerKind::cascaded_ehgo))
    ->Arg(static_cast<int>(ControllerKind::standard_ehgo))
    ->Arg(static_cast<int>(ControllerKind::pid))
    ->Unit(benchmark::kMillisecond);

static void BM_ScalingStudy(benchmark::State& st) {
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  for (auto _ : st) {
    ScalingReport rep = estimation_error_scaling(ObserverKind::cascaded, eps);
    benchmark::DoNotOptimize(rep.slope);
  }
}
BENCHMARK(BM_ScalingStudy)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
