// Batch-friendly wrapper around the core attacks: one config in, one JSON
// report out.  The report embeds the config; feeding that config back (via
// --config) reproduces the report except for the timing fields.
#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace privleak::tools {

struct ScenarioConfig {
    std::string mode;
    std::string input;      // dataset or column CSV, mode-dependent
    std::string output;     // artifact path (CSV), mode-dependent
    std::string knowledge;  // knowledge CSV for nends-attack
    std::string method = "tree";  // nends cycle search: tree | zigzag
    int k = 4;
    int nh_size = 3;
    std::uint64_t seed = 0;
    int n = 8;
    int dim = 1;
    std::int64_t target_x = 0;
    std::int64_t t = 0;  // timestamp under attack
    int batch = 1;
};

extern const char* const kModeList[11];

nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);

// One run of cfg.mode; throws std::runtime_error on unusable inputs.
nlohmann::json run_scenario(const ScenarioConfig& cfg);

// Honors cfg.batch: one report, or an array of `batch` reports run
// concurrently with seeds seed, seed+1, ... and per-run artifact suffixes.
nlohmann::json run_batch(const ScenarioConfig& cfg);

// Empty when the report (or every report of a batch) achieved its goal;
// otherwise a one-line diagnostic.  Attacks that end in retry or infeasible,
// partial recoveries, and failed hiding checks all count as failures.
std::string failure_reason(const nlohmann::json& report);

}  // namespace privleak::tools
