#include "bubble/cli.hpp"

#include "bubble/config.hpp"
#include "bubble/errors.hpp"
#include "bubble/geometry.hpp"
#include "bubble/io.hpp"
#include "bubble/solver.hpp"
#include "bubble/weighted_spaces.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace bubble::cli {

using nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
};

RunConfig resolve_config(const Common& common, const json* embedded = nullptr)
{
    RunConfig config;
    if (!common.config_path.empty())
        config = load_config(common.config_path);
    else if (embedded && !embedded->is_null())
        config = config_from_json(*embedded);
    for (const auto& o : common.overrides)
        apply_override(config, o);
    validate_config(config);
    return config;
}

BranchMeta meta_for(const RunConfig& config)
{
    BranchMeta meta;
    meta.config_hash = config_hash(config);
    meta.config = config_to_json(config);
    return meta;
}

json point_summary(const BranchPoint& p)
{
    return {{"g", p.g},
            {"alpha", p.alpha},
            {"R_alpha", p.radius},
            {"residual_norm", p.residual_norm},
            {"newton_iters", p.newton_iters},
            {"monotonicity_margin", p.monotonicity_margin},
            {"u_norm_H2", p.u_norm_h2}};
}

int cmd_solve(const Common& common, std::optional<double> g_flag, double alpha0, const std::string& out_flag,
              std::ostream& out)
{
    RunConfig config = resolve_config(common);
    if (g_flag)
        config.g = *g_flag;
    if (!out_flag.empty())
        config.output.solve = out_flag;
    const Problem problem = make_problem(config);
    const BranchPoint p = newton_solve(problem, config.g, alpha0, SpectralFunction(problem.degree()), config.solver);
    write_branch_csv(config.output.solve, {p}, meta_for(config));
    json summary = point_summary(p);
    summary["config_hash"] = config_hash(config);
    summary["output"] = config.output.solve;
    out << summary.dump(2) << '\n';
    return kExitOk;
}

int cmd_continue(const Common& common, std::optional<double> g_max, std::optional<int> steps,
                 const std::string& out_flag, std::ostream& out, std::ostream& err)
{
    RunConfig config = resolve_config(common);
    if (g_max)
        config.g_max = *g_max;
    if (steps)
        config.steps = *steps;
    if (!out_flag.empty())
        config.output.branch = out_flag;
    validate_config(config);
    const Problem problem = make_problem(config);
    const Branch branch = continue_branch(problem, config.g_max, config.steps, config.solver);
    BranchMeta meta = meta_for(config);
    meta.halt_reason = branch.halt_reason;
    write_branch_csv(config.output.branch, branch.points, meta);
    out << json{{"config_hash", meta.config_hash},
                {"output", config.output.branch},
                {"points", branch.points.size()},
                {"complete", branch.complete},
                {"last_valid_g", branch.last_valid_g},
                {"halt_reason", branch.halt_reason}}
               .dump(2)
        << '\n';
    if (!branch.complete) {
        err << "continuation halted: " << branch.halt_reason << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_verify(const Common& common, const std::string& suite, std::optional<std::uint64_t> seed,
               std::optional<int> samples, const std::string& out_flag, std::ostream& out)
{
    RunConfig config = resolve_config(common);
    if (seed)
        config.seed = *seed;
    if (samples)
        config.samples = *samples;
    if (!out_flag.empty())
        config.output.report = out_flag;
    const auto reports = run_verification_suite(suite, config.seed, config.samples);
    json j = {{"suite", suite}, {"config_hash", config_hash(config)}, {"seed", config.seed}};
    bool pass = true;
    j["reports"] = json::array();
    for (const auto& r : reports) {
        j["reports"].push_back(to_json(r));
        pass = pass && r.pass;
    }
    j["pass"] = pass;
    write_json(config.output.report, j);
    out << j.dump(2) << '\n';
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_certify(const Common& common, std::optional<double> g_max, std::optional<int> steps,
                const std::string& out_flag, std::ostream& out)
{
    RunConfig config = resolve_config(common);
    if (g_max)
        config.g_max = *g_max;
    if (steps)
        config.steps = *steps;
    if (!out_flag.empty())
        config.output.diagnostics = out_flag;
    validate_config(config);
    const Problem problem = make_problem(config);
    CertifyOptions options;
    options.g_max = config.g_max;
    options.steps = config.steps;
    options.solver = config.solver;
    const DiagnosticsReport d = certify_bifurcation(problem, options);
    json j = to_json(d);
    j["config_hash"] = config_hash(config);
    if (config.g_max != 0.0) {
        const BranchPoint end = newton_solve(problem, d.branch_last_g, 0.0, SpectralFunction(problem.degree()),
                                             config.solver);
        j["laplace_young_defect"] = laplace_young_defect(problem, end);
        j["promotion_distance"] = promotion_distance(problem, end, 2).distance;
    }
    write_json(config.output.diagnostics, j);
    out << j.dump(2) << '\n';
    return d.pass ? kExitOk : kExitCheckFailed;
}

struct ExportArgs {
    std::string branch;
    int index = -1;
    std::string mesh;
    std::string profile;
    std::string fields;
    std::string fields_out;
    int n_theta = 64;
    int n_zeta = 64;
    int profile_points = kProfileGrid;
};

int cmd_export(const Common& common, const ExportArgs& a, std::ostream& out)
{
    const BranchTable table = read_branch_csv(a.branch);
    if (table.rows.empty())
        throw ConfigError("branch file '" + a.branch + "' has no rows");
    const RunConfig config = resolve_config(common, &table.meta.config);
    const int index = a.index < 0 ? static_cast<int>(table.rows.size()) - 1 : a.index;
    if (index >= static_cast<int>(table.rows.size()))
        throw ConfigError("--index " + std::to_string(index) + " out of range (branch has "
                          + std::to_string(table.rows.size()) + " rows)");
    const BranchRow& row = table.rows[static_cast<std::size_t>(index)];
    const EosModel eos = make_eos(config);
    validate_params(eos, config.physics);

    BubbleGeometry geometry;
    geometry.g = row.g;
    geometry.alpha = row.alpha;
    geometry.lambda = full_profile(SpectralFunction(row.coeffs), radius_of_alpha(row.alpha, eos, config.physics));
    require_exportable(geometry, config.physics);

    const std::string hash = config_hash(config);
    json summary = {{"config_hash", hash}, {"index", index}, {"g", row.g}, {"alpha", row.alpha}};
    if (!a.mesh.empty()) {
        const Mesh mesh = surface_mesh(geometry, a.n_theta, a.n_zeta);
        std::ofstream f(a.mesh, std::ios::binary);
        if (!f)
            throw ConfigError("cannot write '" + a.mesh + "'");
        f << "# config_hash: " << hash << '\n';
        write_mesh(f, mesh);
        summary["mesh"] = {{"path", a.mesh},
                           {"vertices", mesh.vertices.size()},
                           {"faces", mesh.faces.size()},
                           {"volume", mesh_volume(mesh)}};
    }
    if (!a.profile.empty()) {
        write_profile_csv(a.profile, profile(geometry, a.profile_points), hash);
        summary["profile"] = a.profile;
    }
    if (!a.fields.empty()) {
        const auto points = read_points_csv(a.fields);
        std::string target = a.fields_out;
        if (target.empty()) {
            const std::filesystem::path p(a.fields);
            target = (p.parent_path() / (p.stem().string() + "_fields.csv")).string();
        }
        write_fields_csv(target, sample_fields(geometry, eos, config.physics, points), hash);
        summary["fields"] = target;
    }
    out << summary.dump(2) << '\n';
    return kExitOk;
}

void add_common(CLI::App* sub, Common& common)
{
    sub->add_option("--config", common.config_path, "Run configuration (.toml or .json)")->check(CLI::ExistingFile);
    sub->add_option("--set", common.overrides, "Override a config key, e.g. --set physics.sigma=2");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Axisymmetric compressible bubbles under gravity: Legendre spectral solver and certificates", "bubble"};
    app.require_subcommand(1);

    Common common;

    auto* solve = app.add_subcommand("solve", "Newton solve at a fixed gravity g");
    add_common(solve, common);
    std::optional<double> solve_g;
    double alpha0 = 0.0;
    std::string solve_out;
    solve->add_option("--g", solve_g, "Gravity parameter");
    solve->add_option("--alpha0", alpha0, "Seed for alpha");
    solve->add_option("--out", solve_out, "Output CSV");

    auto* cont = app.add_subcommand("continue", "Continuation in g from the sphere");
    add_common(cont, common);
    std::optional<double> g_max;
    std::optional<int> steps;
    std::string cont_out;
    cont->add_option("--g-max", g_max, "Final gravity value");
    cont->add_option("--steps", steps, "Number of uniform steps")->check(CLI::PositiveNumber);
    cont->add_option("--out", cont_out, "Branch CSV");

    auto* verify = app.add_subcommand("verify", "Sampled checks of the weighted-space inequalities");
    add_common(verify, common);
    std::string suite = "all";
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::string verify_out;
    verify->add_option("--suite", suite, "hardy, norms, algebra, embedding, composition or all")
        ->check(CLI::IsMember({"hardy", "norms", "algebra", "embedding", "composition", "all"}));
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--samples", samples, "Samples per check (0 keeps defaults)");
    verify->add_option("--out", verify_out, "Report JSON");

    auto* certify = app.add_subcommand("certify", "Kernel, transversality and asymptotics at the bifurcation point");
    add_common(certify, common);
    std::string certify_out;
    certify->add_option("--g-max", g_max, "Branch length used for the quadratic fit");
    certify->add_option("--steps", steps, "Continuation steps")->check(CLI::PositiveNumber);
    certify->add_option("--out", certify_out, "Diagnostics JSON");

    auto* exp = app.add_subcommand("export", "Geometry and fields of one branch point");
    add_common(exp, common);
    ExportArgs ea;
    exp->add_option("--branch", ea.branch, "Branch CSV")->required()->check(CLI::ExistingFile);
    exp->add_option("--index", ea.index, "Row index (default: last)");
    exp->add_option("--mesh", ea.mesh, "Surface mesh output");
    exp->add_option("--profile", ea.profile, "Profile CSV output");
    exp->add_option("--fields", ea.fields, "Points CSV (x,y,z)")->check(CLI::ExistingFile);
    exp->add_option("--fields-out", ea.fields_out, "Fields CSV output");
    exp->add_option("--n-theta", ea.n_theta, "Mesh longitude count");
    exp->add_option("--n-zeta", ea.n_zeta, "Mesh latitude bands");
    exp->add_option("--profile-points", ea.profile_points, "Profile sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "bubble: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (*solve)
            return cmd_solve(common, solve_g, alpha0, solve_out, out);
        if (*cont)
            return cmd_continue(common, g_max, steps, cont_out, out, err);
        if (*verify)
            return cmd_verify(common, suite, seed, samples, verify_out, out);
        if (*certify)
            return cmd_certify(common, g_max, steps, certify_out, out);
        if (*exp)
            return cmd_export(common, ea, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const StateInvalidError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const InconsistencyError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"bubble"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace bubble::cli
