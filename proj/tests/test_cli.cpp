#include "bubble/cli.hpp"
#include "bubble/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using bubble::cli::run;
using nlohmann::json;

namespace {

const std::string kBench = std::string(BUBBLE_CONFIG_DIR) + "/bench.toml";

fs::path scratch_dir()
{
    const auto dir = fs::temp_directory_path() / "bubble_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string path_in(const std::string& name) { return (scratch_dir() / name).string(); }

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("usage errors")
{
    CHECK(call({}).code == bubble::cli::kExitUsage);
    CHECK(call({"frobnicate"}).code == bubble::cli::kExitUsage);
    CHECK(call({"continue", "--no-such-flag"}).code == bubble::cli::kExitUsage);
    CHECK(call({"verify", "--suite", "bogus"}).code == bubble::cli::kExitUsage);
    CHECK(call({"export"}).code == bubble::cli::kExitUsage);
    CHECK(call({"--help"}).code == bubble::cli::kExitOk);
}

TEST_CASE("configuration errors exit with 2")
{
    const auto r = call({"solve", "--config", kBench, "--set", "physics.p_ext_star=5", "--out", path_in("x.csv")});
    CHECK(r.code == bubble::cli::kExitConfig);
    CHECK(r.err.find("configuration error") != std::string::npos);
    CHECK(call({"solve", "--config", kBench, "--set", "physics.colour=1"}).code == bubble::cli::kExitConfig);
    const auto bad = path_in("bad.toml");
    {
        std::ofstream(bad) << "[eos\n";
    }
    CHECK(call({"certify", "--config", bad}).code == bubble::cli::kExitConfig);
}

TEST_CASE("continue writes the benchmark branch")
{
    const auto csv = path_in("branch.csv");
    const auto r = call({"continue", "--config", kBench, "--g-max", "0.05", "--steps", "50", "--out", csv});
    REQUIRE(r.code == bubble::cli::kExitOk);
    const auto table = bubble::read_branch_csv(csv);
    REQUIRE(table.rows.size() == 51);
    CHECK(table.rows.front().g == 0.0);
    CHECK(table.rows.front().alpha == 0.0);
    CHECK(table.rows.back().g == doctest::Approx(0.05));
    CHECK(table.meta.config_hash.size() == 16);
    CHECK(json::parse(r.out)["config_hash"] == table.meta.config_hash);

    const std::string text = slurp(csv);
    CHECK(text.find("g,alpha,R_alpha,residual_norm,newton_iters,monotonicity_margin,margin_eos,u_norm_H2,u_coeff_0,")
          != std::string::npos);
    CHECK(text.find("u_coeff_32\n") != std::string::npos);

    // Byte-identical rerun.
    REQUIRE(call({"continue", "--config", kBench, "--out", csv}).code == 0);
    CHECK(slurp(csv) == text);
}

TEST_CASE("solver failures exit with 3 and keep the partial branch")
{
    const auto csv = path_in("halted.csv");
    const auto r = call({"continue", "--config", kBench, "--g-max", "3", "--steps", "6", "--out", csv});
    CHECK(r.code == bubble::cli::kExitSolver);
    CHECK(r.err.find("halted") != std::string::npos);
    const auto table = bubble::read_branch_csv(csv);
    CHECK(!table.rows.empty());
    CHECK(!table.meta.halt_reason.empty());
}

TEST_CASE("solve at a fixed gravity")
{
    const auto csv = path_in("solve.csv");
    const auto r = call({"solve", "--config", kBench, "--g", "0.01", "--out", csv});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["residual_norm"].get<double>() < 1e-11);
    CHECK(bubble::read_branch_csv(csv).rows.size() == 1);
}

TEST_CASE("verify hardy passes and is reproducible")
{
    const auto a = path_in("verify_a.json");
    const auto b = path_in("verify_b.json");
    const auto r = call({"verify", "--suite", "hardy", "--out", a});
    const std::string first = slurp(a);
    REQUIRE(r.code == 0);
    const auto j = json::parse(slurp(a));
    CHECK(j["pass"] == true);
    CHECK(j["suite"] == "hardy");
    CHECK(j["reports"].size() == 5);
    for (const auto& rep : j["reports"]) {
        CHECK(rep.contains("name"));
        CHECK(rep.contains("samples"));
        CHECK(rep.contains("worst_ratio"));
        CHECK(rep.contains("stated_constant"));
        CHECK(rep.contains("pass"));
        CHECK(rep.contains("seed"));
    }
    REQUIRE(call({"verify", "--suite", "hardy", "--out", a}).code == 0);
    CHECK(slurp(a) == first);
    CHECK(call({"verify", "--suite", "hardy", "--seed", "3", "--out", b}).code == 0);
    CHECK(json::parse(slurp(b))["seed"] == 3);
}

TEST_CASE("certify on the benchmark")
{
    const auto out = path_in("diagnostics.json");
    const auto r = call({"certify", "--config", kBench, "--out", out});
    REQUIRE(r.code == 0);
    const auto j = json::parse(slurp(out));
    CHECK(j["transversality_value"].get<double>() == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(j["transversality_formula"].get<double>() == doctest::Approx(4.0));
    CHECK(j["kernel_angle"].get<double>() < 1e-8);
    CHECK(j["laplace_young_defect"].get<double>() < 1e-8);
    CHECK(j["pass"] == true);
    CHECK(j.contains("config_hash"));
}

TEST_CASE("export from a branch file")
{
    const auto csv = path_in("export_branch.csv");
    REQUIRE(call({"continue", "--config", kBench, "--g-max", "0.05", "--steps", "10", "--out", csv}).code == 0);
    const auto points = path_in("points.csv");
    {
        std::ofstream(points) << "x,y,z\n0,0,0\n0,0,1\n2.5,0,0\n";
    }
    const auto mesh = path_in("bubble.mesh");
    const auto prof = path_in("profile.csv");
    const auto r = call({"export", "--branch", csv, "--index", "10", "--mesh", mesh, "--profile", prof, "--fields",
                         points, "--n-theta", "16", "--n-zeta", "12", "--profile-points", "33"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["mesh"]["vertices"] == 16 * 11 + 2);
    CHECK(j["mesh"]["faces"] == 16 * 10 + 2 * 16);

    const std::string m = slurp(mesh);
    CHECK(m.rfind("# config_hash: ", 0) == 0);
    CHECK(m.find("\nv ") != std::string::npos);
    CHECK(m.find("\nf ") != std::string::npos);

    std::istringstream p(slurp(prof));
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(p, line)) {
        if (line.rfind('#', 0) == 0)
            continue;
        if (line == "zeta,lambda,dlambda") {
            header = true;
            continue;
        }
        ++rows;
    }
    CHECK(header);
    CHECK(rows == 33);

    const std::string fields = slurp(path_in("points_fields.csv"));
    CHECK(fields.find("x,y,z,rho_int,P_int,P_ext") != std::string::npos);
    CHECK(fields.find("nan") != std::string::npos);

    CHECK(call({"export", "--branch", csv, "--index", "99"}).code == bubble::cli::kExitConfig);
    {
        std::ofstream(points) << "x,y,z\n0,0,3.5\n";
    }
    CHECK(call({"export", "--branch", csv, "--fields", points}).code == bubble::cli::kExitConfig);
}
