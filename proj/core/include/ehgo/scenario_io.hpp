#pragma once

// Scenario files are JSON documents validated against a fixed field table;
// unknown keys are rejected with the offending path in the message.

#include "ehgo/sim_engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace ehgo {

struct SchemaField {
  const char* path;  // dotted; "[]" marks array elements
  const char* type;
  const char* description;
};

/// Every accepted scenario key. Also drives unknown-key rejection.
std::span<const SchemaField> scenario_schema();

/// Human-readable schema listing.
std::string scenario_schema_doc();

/// Throws ConfigError naming the offending path.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace ehgo
