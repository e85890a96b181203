#pragma once

// Run configuration: a TOML-style file of [section] tables with key = value
// lines (strings, numbers, booleans, inf), or the equivalent JSON object.

#include "bubble/eos.hpp"
#include "bubble/residual.hpp"
#include "bubble/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace bubble {

struct EosConfig {
    std::string kind = "isothermal";
    double c2 = 2.0;
    double K = 1.0;
    double gamma = 1.4;
    std::string path; // tabulated laws
};

struct OutputConfig {
    std::string branch = "branch.csv";
    std::string solve = "solve.csv";
    std::string diagnostics = "diagnostics.json";
    std::string report = "verify.json";
};

struct RunConfig {
    EosConfig eos;
    PhysicalParams physics;
    int degree = 32;
    int quad_pad = 8;
    SolverOptions solver;
    double g = 0.0; // fixed-g solves
    double g_max = 0.05;
    int steps = 50;
    OutputConfig output;
    std::uint64_t seed = 20240917;
    int samples = 0; // 0 keeps each suite's default
};

/// Parses the TOML subset into a JSON object of tables. Throws ConfigError
/// with the offending line number.
nlohmann::json parse_toml_subset(std::string_view text);

/// Strict conversion: unknown sections or keys and wrongly typed values are errors.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Reads a .json file as JSON and anything else as the TOML subset. A
/// relative tabulated-EOS path is resolved against the config's directory.
RunConfig load_config(const std::string& path);

/// Applies "section.key=value" (or "seed=value") on top of a config.
void apply_override(RunConfig& config, std::string_view assignment);

/// Checks every module precondition; throws ConfigError.
void validate_config(const RunConfig& config);

/// 16 hex digits of FNV-1a 64 over the canonical JSON form.
std::string config_hash(const RunConfig& config);

EosModel make_eos(const RunConfig& config);
Problem make_problem(const RunConfig& config);

} // namespace bubble
