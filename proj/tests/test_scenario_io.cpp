#include "ehgo/scenario_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace ehgo;
using ehgo::testing::scenario_path;
using nlohmann::json;

namespace {

// Smallest valid document plus the given keys.
json minimal(json extra = json::object()) {
  json doc{{"duration", 2.0}, {"controllers", {"pid"}}};
  doc.update(extra);
  return doc;
}

std::string config_error(const json& extra) {
  try {
    scenario_from_json(minimal(extra));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ScenarioIo, PresetsLoad) {
  for (const char* name : {"hover.json", "perch_impact.json", "wind_gust.json", "mismatch_gust.json",
                           "step_disturbance.json"}) {
    Scenario sc;
    ASSERT_NO_THROW(sc = load_scenario(scenario_path(name))) << name;
    EXPECT_FALSE(sc.name.empty());
    EXPECT_NO_THROW(sc.validate());
  }
}

TEST(ScenarioIo, PerchPresetContents) {
  const Scenario sc = load_scenario(scenario_path("perch_impact.json"));
  EXPECT_EQ(sc.name, "perch_impact");
  EXPECT_EQ(sc.seed, 7u);
  ASSERT_EQ(sc.controllers.size(), 3u);
  EXPECT_EQ(sc.reference.kind, ReferenceKind::line);
  ASSERT_EQ(sc.disturbance.torque.size(), 1u);
  EXPECT_EQ(sc.disturbance.torque[0].kind, PrimitiveKind::smoothed_pulse);
  EXPECT_DOUBLE_EQ(sc.disturbance.torque[0].center, 17.5);
  ASSERT_TRUE(sc.metrics.window);
  EXPECT_EQ(*sc.metrics.window, std::make_pair(15.5, 19.5));
}

TEST(ScenarioIo, DefaultsFollowNominalMass) {
  const Scenario sc = scenario_from_json(minimal({{"vehicle", {{"nominal_mass", 5.4}}}}));
  EXPECT_DOUBLE_EQ(sc.gains.position_sat.bound(), 2 * 5.4 * sc.vehicle.gravity);
  const Scenario def = scenario_from_json(minimal());
  EXPECT_DOUBLE_EQ(def.vehicle.mass, 2.7);
  EXPECT_DOUBLE_EQ(def.rates.plant_dt, 0.001);
}

TEST(ScenarioIo, UnknownTopLevelKeyNamed) {
  const std::string msg = config_error(json{{"ki_pos", 1.0}});
  EXPECT_NE(msg.find("ki_pos"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;
}

TEST(ScenarioIo, UnknownNestedKeyNamedWithPath) {
  const std::string msg = config_error(json{{"pid", {{"position", {{"ki_pos", {1, 2, 3}}}}}}});
  EXPECT_NE(msg.find("pid.position.ki_pos"), std::string::npos) << msg;
  const std::string arr = config_error(
      json{{"disturbance", {{"force", json::array({{{"kind", "constant"}, {"bogus", 1}}})}}}});
  EXPECT_NE(arr.find("bogus"), std::string::npos) << arr;
}

TEST(ScenarioIo, MissingRequiredKeyNamed) {
  try {
    scenario_from_json(json{{"controllers", {"pid"}}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("duration"), std::string::npos) << e.what();
  }
}

TEST(ScenarioIo, WrongTypeNamed) {
  const std::string msg = config_error(json{{"duration", "ten"}});
  EXPECT_NE(msg.find("duration"), std::string::npos) << msg;
  const std::string vec = config_error(json{{"vehicle", {{"inertia", {1, 2}}}}});
  EXPECT_NE(vec.find("vehicle.inertia"), std::string::npos) << vec;
}

TEST(ScenarioIo, SemanticErrors) {
  EXPECT_FALSE(config_error(json{{"controllers", {"lqr"}}}).empty());
  EXPECT_FALSE(config_error(json{{"gains", {{"position", {{"k1", 1.0}}}}}}).empty());
  EXPECT_FALSE(config_error(json{{"observer", {{"standard", {{"alpha", {1, -1, 1}}}}}}}).empty());
  // The stiffness guard applies only when that observer is used.
  EXPECT_TRUE(config_error(json{{"observer", {{"cascaded", {{"epsilon", 0.001}}}}}}).empty());
  EXPECT_FALSE(config_error(json{{"controllers", {"cascaded_ehgo"}},
                                 {"observer", {{"cascaded", {{"epsilon", 0.001}}}}}})
                   .empty());
  const std::string both = config_error(json{
      {"disturbance",
       {{"force", json::array({{{"kind", "constant"}, {"amplitude", 1.0}, {"wind_speed", 5.0}}})}}}});
  EXPECT_NE(both.find("wind_speed"), std::string::npos) << both;
}

TEST(ScenarioIo, WindSpeedSetsDragAmplitude) {
  const Scenario sc = scenario_from_json(minimal({
      {"disturbance",
       {{"force", json::array({{{"kind", "constant"}, {"wind_speed", 10.0}, {"air_density", 1.225},
                                {"drag_area", 0.046}}})}}}}));
  ASSERT_EQ(sc.disturbance.force.size(), 1u);
  EXPECT_NEAR(sc.disturbance.force[0].amplitude, 2.8175, 1e-12);
}

TEST(ScenarioIo, MissingFileIsConfigError) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST(ScenarioIo, SchemaDocListsEveryField) {
  const std::string doc = scenario_schema_doc();
  ASSERT_GT(scenario_schema().size(), 50u);
  for (const auto& f : scenario_schema()) {
    EXPECT_NE(doc.find(f.path), std::string::npos) << f.path;
    EXPECT_GT(std::string(f.description).size(), 0u) << f.path;
  }
}
