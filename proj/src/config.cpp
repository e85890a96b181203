#include "bubble/config.hpp"

#include "bubble/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace bubble {

using nlohmann::json;

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing comment, ignoring '#' inside quotes.
std::string strip_comment(std::string_view line)
{
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote)
                quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return std::string(line.substr(0, i));
        }
    }
    return std::string(line);
}

bool valid_key(std::string_view k)
{
    if (k.empty())
        return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

// Non-finite numbers are kept as strings since JSON has no spelling for them.
json parse_scalar(const std::string& v, int lineno)
{
    const auto fail = [&](const std::string& why) {
        throw ConfigError("config line " + std::to_string(lineno) + ": " + why);
    };
    if (v.empty())
        fail("missing value");
    if (v.front() == '"' || v.front() == '\'') {
        if (v.size() < 2 || v.back() != v.front())
            fail("unterminated string " + v);
        return v.substr(1, v.size() - 2);
    }
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    if (v == "inf" || v == "+inf")
        return "inf";
    if (v == "-inf")
        return "-inf";
    if (v == "nan" || v == "+nan" || v == "-nan")
        fail("nan is not an admissible value");
    std::string digits;
    for (char c : v)
        if (c != '_')
            digits.push_back(c);
    const bool integral = digits.find_first_of(".eE") == std::string::npos;
    std::size_t used = 0;
    try {
        if (integral) {
            const long long x = std::stoll(digits, &used);
            if (used == digits.size())
                return x;
        } else {
            const double x = std::stod(digits, &used);
            if (used == digits.size())
                return x;
        }
    } catch (const std::exception&) {
    }
    fail("cannot parse value '" + v + "'");
    return {};
}

double get_number(const json& v, const std::string& key)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
    }
    throw ConfigError("config key '" + key + "' must be a number");
}

int get_int(const json& v, const std::string& key)
{
    if (v.is_number_integer())
        return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::abs(d) < 1e9)
            return static_cast<int>(d);
    }
    throw ConfigError("config key '" + key + "' must be an integer");
}

std::string get_string(const json& v, const std::string& key)
{
    if (!v.is_string())
        throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

json number_json(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

} // namespace

json parse_toml_subset(std::string_view text)
{
    json root = json::object();
    json* table = &root;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed table header");
            const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!valid_key(name))
                throw ConfigError("config line " + std::to_string(lineno) + ": bad table name '" + name + "'");
            if (root.contains(name))
                throw ConfigError("config line " + std::to_string(lineno) + ": table [" + name + "] repeated");
            root[name] = json::object();
            table = &root[name];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (!valid_key(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": bad key '" + key + "'");
        if (table->contains(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key + "' repeated");
        (*table)[key] = parse_scalar(trim(std::string_view(line).substr(eq + 1)), lineno);
    }
    return root;
}

RunConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be an object of tables");
    RunConfig c;
    for (const auto& [section, body] : j.items()) {
        if (section == "seed") {
            if (!body.is_number_integer() || body.get<long long>() < 0)
                throw ConfigError("config key 'seed' must be a non-negative integer");
            c.seed = body.get<std::uint64_t>();
            continue;
        }
        if (!body.is_object())
            throw ConfigError("config section '" + section + "' must be a table");
        for (const auto& [key, v] : body.items()) {
            const std::string name = section + "." + key;
            const auto unknown = [&] { throw ConfigError("unknown config key '" + name + "'"); };
            if (section == "eos") {
                if (key == "kind")
                    c.eos.kind = get_string(v, name);
                else if (key == "c2")
                    c.eos.c2 = get_number(v, name);
                else if (key == "K")
                    c.eos.K = get_number(v, name);
                else if (key == "gamma")
                    c.eos.gamma = get_number(v, name);
                else if (key == "path")
                    c.eos.path = get_string(v, name);
                else
                    unknown();
            } else if (section == "physics") {
                if (key == "sigma")
                    c.physics.sigma = get_number(v, name);
                else if (key == "rho_ext")
                    c.physics.rho_ext = get_number(v, name);
                else if (key == "p_ext_star")
                    c.physics.p_ext_star = get_number(v, name);
                else if (key == "r_max")
                    c.physics.r_max = get_number(v, name);
                else if (key == "r_slab")
                    c.physics.r_slab = get_number(v, name);
                else
                    unknown();
            } else if (section == "discretization") {
                if (key == "N")
                    c.degree = get_int(v, name);
                else if (key == "quad_pad")
                    c.quad_pad = get_int(v, name);
                else
                    unknown();
            } else if (section == "solver") {
                if (key == "newton_tol")
                    c.solver.newton_tol = get_number(v, name);
                else if (key == "max_iter")
                    c.solver.max_iter = get_int(v, name);
                else if (key == "damping")
                    c.solver.max_damping = get_int(v, name);
                else if (key == "step_halvings")
                    c.solver.max_step_halvings = get_int(v, name);
                else
                    unknown();
            } else if (section == "continuation") {
                if (key == "g_max")
                    c.g_max = get_number(v, name);
                else if (key == "steps")
                    c.steps = get_int(v, name);
                else if (key == "g")
                    c.g = get_number(v, name);
                else
                    unknown();
            } else if (section == "output") {
                if (key == "branch")
                    c.output.branch = get_string(v, name);
                else if (key == "solve")
                    c.output.solve = get_string(v, name);
                else if (key == "diagnostics")
                    c.output.diagnostics = get_string(v, name);
                else if (key == "report")
                    c.output.report = get_string(v, name);
                else
                    unknown();
            } else if (section == "verify") {
                if (key == "samples")
                    c.samples = get_int(v, name);
                else
                    unknown();
            } else {
                throw ConfigError("unknown config section '" + section + "'");
            }
        }
    }
    return c;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["eos"] = {{"kind", c.eos.kind}};
    if (c.eos.kind == "isothermal")
        j["eos"]["c2"] = c.eos.c2;
    else if (c.eos.kind == "polytropic") {
        j["eos"]["K"] = c.eos.K;
        j["eos"]["gamma"] = c.eos.gamma;
    } else
        j["eos"]["path"] = c.eos.path;
    j["physics"] = {{"sigma", number_json(c.physics.sigma)},
                    {"rho_ext", number_json(c.physics.rho_ext)},
                    {"p_ext_star", number_json(c.physics.p_ext_star)},
                    {"r_max", number_json(c.physics.r_max)},
                    {"r_slab", number_json(c.physics.r_slab)}};
    j["discretization"] = {{"N", c.degree}, {"quad_pad", c.quad_pad}};
    j["solver"] = {{"newton_tol", c.solver.newton_tol},
                   {"max_iter", c.solver.max_iter},
                   {"damping", c.solver.max_damping},
                   {"step_halvings", c.solver.max_step_halvings}};
    j["continuation"] = {{"g_max", c.g_max}, {"steps", c.steps}, {"g", c.g}};
    j["output"] = {{"branch", c.output.branch},
                   {"solve", c.output.solve},
                   {"diagnostics", c.output.diagnostics},
                   {"report", c.output.report}};
    j["verify"] = {{"samples", c.samples}};
    j["seed"] = c.seed;
    return j;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    if (std::filesystem::path(path).extension() == ".json") {
        try {
            j = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw ConfigError("config '" + path + "': " + e.what());
        }
    } else {
        j = parse_toml_subset(buf.str());
    }
    RunConfig c = config_from_json(j);
    if (!c.eos.path.empty() && std::filesystem::path(c.eos.path).is_relative())
        c.eos.path = (std::filesystem::path(path).parent_path() / c.eos.path).lexically_normal().string();
    return c;
}

void apply_override(RunConfig& config, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const json value = parse_scalar(trim(assignment.substr(eq + 1)), 0);
    json j = config_to_json(config);
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        if (key != "seed")
            throw ConfigError("override key '" + key + "' needs a section, e.g. physics.sigma");
        j["seed"] = value;
    } else {
        const std::string section = key.substr(0, dot);
        const std::string name = key.substr(dot + 1);
        if (!j.contains(section))
            throw ConfigError("unknown config section '" + section + "'");
        j[section][name] = value;
    }
    config = config_from_json(j);
}

void validate_config(const RunConfig& c)
{
    if (c.degree < 2)
        throw ConfigError("discretization.N must be at least 2");
    if (c.quad_pad < 0)
        throw ConfigError("discretization.quad_pad must be non-negative");
    if (!(c.solver.newton_tol > 0.0))
        throw ConfigError("solver.newton_tol must be positive");
    if (c.solver.max_iter < 1 || c.solver.max_damping < 0 || c.solver.max_step_halvings < 0)
        throw ConfigError("solver iteration limits must be non-negative (max_iter >= 1)");
    if (c.steps < 1)
        throw ConfigError("continuation.steps must be at least 1");
    if (!std::isfinite(c.g_max) || !std::isfinite(c.g))
        throw ConfigError("continuation g values must be finite");
    if (c.samples < 0)
        throw ConfigError("verify.samples must be non-negative");
    validate_params(make_eos(c), c.physics);
}

std::string config_hash(const RunConfig& config)
{
    const std::string text = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EosModel make_eos(const RunConfig& c)
{
    if (c.eos.kind == "isothermal")
        return EosModel(IsothermalLaw{c.eos.c2}, c.physics.rho_ext);
    if (c.eos.kind == "polytropic")
        return EosModel(PolytropicLaw{c.eos.K, c.eos.gamma}, c.physics.rho_ext);
    if (c.eos.kind == "tabulated") {
        if (c.eos.path.empty())
            throw ConfigError("tabulated EOS needs eos.path");
        return EosModel(load_tabulated_law(c.eos.path), c.physics.rho_ext);
    }
    throw ConfigError("unknown EOS kind '" + c.eos.kind + "' (expected isothermal, polytropic or tabulated)");
}

Problem make_problem(const RunConfig& config)
{
    validate_config(config);
    return Problem(make_eos(config), config.physics, config.degree, config.quad_pad);
}

} // namespace bubble
