#pragma once

// File formats: branch CSV, diagnostics and verification JSON, profile,
// field and point CSVs. Numbers are written with 17 significant digits so a
// write/read round trip is lossless.

#include "bubble/geometry.hpp"
#include "bubble/solver.hpp"
#include "bubble/weighted_spaces.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace bubble {

/// Shortest text that reads back to the same double ("inf", "-inf", "nan" for non-finite).
std::string format_double(double x);

struct BranchRow {
    double g = 0.0;
    double alpha = 0.0;
    double radius = 0.0;
    double residual_norm = 0.0;
    int newton_iters = 0;
    double monotonicity_margin = 0.0;
    double margin_eos = 0.0;
    double u_norm_h2 = 0.0;
    std::vector<double> coeffs;
};

BranchRow to_row(const BranchPoint& p);

/// Metadata carried in '#' comment lines above the column header.
struct BranchMeta {
    std::string config_hash;
    nlohmann::json config; // null when absent
    std::string halt_reason;
};

void write_branch_csv(std::ostream& out, const std::vector<BranchPoint>& points, const BranchMeta& meta);
void write_branch_csv(const std::string& path, const std::vector<BranchPoint>& points, const BranchMeta& meta);

struct BranchTable {
    BranchMeta meta;
    std::vector<BranchRow> rows;
};
/// Throws ConfigError for unreadable or malformed files.
BranchTable read_branch_csv(const std::string& path);

nlohmann::json to_json(const DiagnosticsReport& d);
nlohmann::json to_json(const InequalityReport& r);

/// Writes JSON with a trailing newline; 2-space indentation.
void write_json(const std::string& path, const nlohmann::json& j);

void write_profile_csv(const std::string& path, const std::vector<ProfileRow>& rows, const std::string& config_hash);
void write_fields_csv(const std::string& path, const std::vector<FieldSample>& samples,
                      const std::string& config_hash);
/// x, y, z rows with an optional header line.
std::vector<Vec3> read_points_csv(const std::string& path);

} // namespace bubble
