#include "bubble/io.hpp"

#include "bubble/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace bubble {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    return out;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& s, const std::string& where)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used == s.size())
            return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("malformed number '" + s + "' in " + where);
}

json finite_or_string(double x)
{
    if (std::isfinite(x))
        return x;
    return format_double(x);
}

} // namespace

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

BranchRow to_row(const BranchPoint& p)
{
    BranchRow r;
    r.g = p.g;
    r.alpha = p.alpha;
    r.radius = p.radius;
    r.residual_norm = p.residual_norm;
    r.newton_iters = p.newton_iters;
    r.monotonicity_margin = p.monotonicity_margin;
    r.margin_eos = p.margins.eos;
    r.u_norm_h2 = p.u_norm_h2;
    r.coeffs.assign(p.u.coeffs().begin(), p.u.coeffs().end());
    return r;
}

void write_branch_csv(std::ostream& out, const std::vector<BranchPoint>& points, const BranchMeta& meta)
{
    out << "# config_hash: " << meta.config_hash << '\n';
    if (!meta.config.is_null())
        out << "# config: " << meta.config.dump() << '\n';
    if (!meta.halt_reason.empty())
        out << "# halt_reason: " << meta.halt_reason << '\n';
    const int degree = points.empty() ? 0 : points.front().u.degree();
    out << "g,alpha,R_alpha,residual_norm,newton_iters,monotonicity_margin,margin_eos,u_norm_H2";
    for (int n = 0; n <= degree; ++n)
        out << ",u_coeff_" << n;
    out << '\n';
    for (const auto& p : points) {
        const BranchRow r = to_row(p);
        out << format_double(r.g) << ',' << format_double(r.alpha) << ',' << format_double(r.radius) << ','
            << format_double(r.residual_norm) << ',' << r.newton_iters << ',' << format_double(r.monotonicity_margin)
            << ',' << format_double(r.margin_eos) << ',' << format_double(r.u_norm_h2);
        for (double c : r.coeffs)
            out << ',' << format_double(c);
        out << '\n';
    }
}

void write_branch_csv(const std::string& path, const std::vector<BranchPoint>& points, const BranchMeta& meta)
{
    auto out = open_out(path);
    write_branch_csv(out, points, meta);
}

BranchTable read_branch_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open branch file '" + path + "'");
    BranchTable t;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto take = [&](const std::string& tag) -> std::optional<std::string> {
                if (line.rfind(tag, 0) == 0)
                    return line.substr(tag.size());
                return std::nullopt;
            };
            if (auto v = take("# config_hash: "))
                t.meta.config_hash = *v;
            else if (auto v2 = take("# config: ")) {
                try {
                    t.meta.config = json::parse(*v2);
                } catch (const json::parse_error& e) {
                    throw ConfigError("branch file '" + path + "': bad embedded config: " + e.what());
                }
            } else if (auto v3 = take("# halt_reason: "))
                t.meta.halt_reason = *v3;
            continue;
        }
        const auto cells = split_csv(line);
        if (!header) {
            if (cells.size() < 9 || cells[0] != "g")
                throw ConfigError("branch file '" + path + "': missing column header");
            header = true;
            continue;
        }
        if (cells.size() < 9)
            throw ConfigError("branch file '" + path + "': short row at line " + std::to_string(lineno));
        const std::string where = "'" + path + "' line " + std::to_string(lineno);
        BranchRow r;
        r.g = parse_double(cells[0], where);
        r.alpha = parse_double(cells[1], where);
        r.radius = parse_double(cells[2], where);
        r.residual_norm = parse_double(cells[3], where);
        r.newton_iters = static_cast<int>(parse_double(cells[4], where));
        r.monotonicity_margin = parse_double(cells[5], where);
        r.margin_eos = parse_double(cells[6], where);
        r.u_norm_h2 = parse_double(cells[7], where);
        for (std::size_t i = 8; i < cells.size(); ++i)
            r.coeffs.push_back(parse_double(cells[i], where));
        t.rows.push_back(std::move(r));
    }
    if (!header)
        throw ConfigError("branch file '" + path + "' has no data header");
    return t;
}

json to_json(const DiagnosticsReport& d)
{
    return {{"kernel_angle", d.kernel_angle},
            {"kernel_smallest_singular_value", d.kernel_smallest},
            {"kernel_gap", d.kernel_gap},
            {"kernel_angle_fd", d.kernel_angle_fd},
            {"kernel_gap_fd", d.kernel_gap_fd},
            {"near_zero_singular_values_before_pin", d.near_zero_before_pin},
            {"near_zero_singular_values_after_pin", d.near_zero_after_pin},
            {"transversality_value", d.transversality_value},
            {"transversality_value_exact_g", d.transversality_exact},
            {"transversality_formula", d.transversality_formula},
            {"transversality_relative_error", d.transversality_error},
            {"quadratic_fit", d.quadratic_fit},
            {"quadratic_spread", d.quadratic_spread},
            {"alpha_fit", d.alpha_fit},
            {"tangent_norm", d.tangent_norm},
            {"branch_last_g", d.branch_last_g},
            {"branch_complete", d.branch_complete},
            {"pass", d.pass}};
}

json to_json(const InequalityReport& r)
{
    json j = {{"name", r.name},
              {"samples", r.samples},
              {"skipped", r.skipped},
              {"worst_ratio", finite_or_string(r.worst_ratio)},
              {"stated_constant", r.stated_constant ? json(*r.stated_constant) : json("none")},
              {"pass", r.pass},
              {"seed", r.seed}};
    if (!r.extras.empty()) {
        json extras = json::object();
        for (const auto& [k, v] : r.extras)
            extras[k] = finite_or_string(v);
        j["extras"] = extras;
    }
    if (!r.notes.empty())
        j["notes"] = r.notes;
    return j;
}

void write_json(const std::string& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_profile_csv(const std::string& path, const std::vector<ProfileRow>& rows, const std::string& config_hash)
{
    auto out = open_out(path);
    out << "# config_hash: " << config_hash << '\n' << "zeta,lambda,dlambda\n";
    for (const auto& r : rows)
        out << format_double(r.zeta) << ',' << format_double(r.lambda) << ',' << format_double(r.dlambda) << '\n';
}

void write_fields_csv(const std::string& path, const std::vector<FieldSample>& samples, const std::string& config_hash)
{
    auto out = open_out(path);
    out << "# config_hash: " << config_hash << '\n' << "x,y,z,rho_int,P_int,P_ext\n";
    for (const auto& s : samples)
        out << format_double(s.position[0]) << ',' << format_double(s.position[1]) << ','
            << format_double(s.position[2]) << ',' << format_double(s.rho_int) << ',' << format_double(s.p_int)
            << ',' << format_double(s.p_ext) << '\n';
}

std::vector<Vec3> read_points_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open points file '" + path + "'");
    std::vector<Vec3> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const auto cells = split_csv(line);
        if (cells.size() < 3)
            throw ConfigError("points file '" + path + "': need x,y,z at line " + std::to_string(lineno));
        if (pts.empty() && (cells[0] == "x" || cells[0] == "X"))
            continue;
        const std::string where = "'" + path + "' line " + std::to_string(lineno);
        pts.push_back({parse_double(cells[0], where), parse_double(cells[1], where), parse_double(cells[2], where)});
    }
    return pts;
}

} // namespace bubble
