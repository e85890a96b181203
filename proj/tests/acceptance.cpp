// Acceptance run on the isothermal benchmark: one PASS/FAIL line per
// criterion, nonzero exit when any criterion fails.

#include "bubble/errors.hpp"
#include "bubble/geometry.hpp"
#include "bubble/residual.hpp"
#include "bubble/solver.hpp"
#include "bubble/weighted_spaces.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

using namespace bubble;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit > 0.0 && secs >= time_limit) {
        o.pass = false;
        o.detail += " (time limit " + std::to_string(time_limit) + " s exceeded)";
    }
    if (!o.pass)
        ++failures;
    std::printf("%s criterion %d %s: %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

Problem benchmark(int degree = 32)
{
    PhysicalParams params; // sigma = 1, rho_ext = 1, P* = 1, R_max = inf, r = 3
    return Problem(EosModel(IsothermalLaw{2.0}, params.rho_ext), params, degree);
}

constexpr double kGMax = 0.05;
constexpr int kSteps = 50;

} // namespace

int main()
{
    const Problem problem = benchmark();
    const double sigma = problem.params().sigma;

    criterion(1, "trivial branch exactness", 1.0, [&] {
        // 20 alphas spread over an admissible window above the lower bound.
        const AlphaRange range = alpha_range(problem.eos(), problem.params());
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double alpha = range.lo + 0.1 + 3.0 * i / 19.0;
            const auto xi = residual(problem, alpha, 0.0, SpectralFunction(problem.degree()));
            worst = std::max(worst, l2_norm(xi));
        }
        return Outcome{worst < 1e-12, "max |Xi(alpha,0,0)| = " + num(worst) + " (< 1e-12)"};
    });

    criterion(2, "kernel structure", 1.0, [&] {
        const KernelAnalysis k = analyze_kernel(problem);
        int near_zero = 0;
        for (double s : k.singular_values)
            near_zero += s < 1e-10 * sigma;
        const double second = k.singular_values.at(1);
        const bool ok = near_zero == 1 && k.angle < 1e-8 && second >= 2.0 * sigma;
        return Outcome{ok, "near-zero count " + std::to_string(near_zero) + ", angle to p_1 " + num(k.angle)
                               + " (< 1e-8), second singular value " + num(second) + " (>= 2 sigma)"};
    });

    criterion(3, "transversality", 1.0, [&] {
        const double value = transversality(problem, 1e-2, 1e-6);
        const double expected = transversality_formula(problem);
        const double rel = std::abs(value - expected) / std::abs(expected);
        const bool ok = rel < 1e-6 && std::abs(expected - 4.0) < 1e-12;
        return Outcome{ok, "value " + num(value) + " vs Pfrak''(0) R_0^3 = " + num(expected) + ", relative error "
                               + num(rel) + " (< 1e-6)"};
    });

    Branch branch;
    criterion(4, "branch computation", 30.0, [&] {
        branch = continue_branch(problem, kGMax, kSteps);
        bool ok = branch.complete && branch.points.size() == kSteps + 1;
        int worst_iters = 0;
        double worst_res = 0.0, worst_pin = 0.0, min_inj = std::numeric_limits<double>::infinity(), top = 0.0;
        for (const auto& p : branch.points) {
            worst_iters = std::max(worst_iters, p.newton_iters);
            worst_res = std::max(worst_res, p.residual_norm);
            worst_pin = std::max(worst_pin, std::abs(p.u[1]));
            min_inj = std::min(min_inj, p.monotonicity_margin);
            top = std::max(top, p.max_lambda);
        }
        ok = ok && worst_iters <= 10 && worst_res < 1e-11 && worst_pin == 0.0 && min_inj > 0.0
             && top <= problem.params().r_slab;
        return Outcome{ok, std::to_string(branch.points.size()) + " points, max Newton iterations "
                               + std::to_string(worst_iters) + " (<= 10), max residual " + num(worst_res)
                               + " (< 1e-11), max |u(1)| " + num(worst_pin) + ", min injectivity margin "
                               + num(min_inj) + " (> 0), max lambda " + num(top) + " (<= 3)"};
    });

    criterion(5, "quadratic asymptotics", 0.0, [&] {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& p : branch.points)
            if (p.g >= kGMax / 4.0 * (1.0 - 1e-12)) {
                const double q = p.u_norm_h2 / (p.g * p.g);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        const double spread = hi > 0.0 ? (hi - lo) / hi : std::numeric_limits<double>::infinity();

        const double h = 1e-4;
        const SpectralFunction zero(problem.degree());
        const auto plus = newton_solve(problem, h, 0.0, zero);
        const auto minus = newton_solve(problem, -h, 0.0, zero);
        const double du = norm_calligraphic_integral((plus.u - minus.u) * (0.5 / h), 2, problem.basis().rule());
        const double dalpha = (plus.alpha - minus.alpha) / (2.0 * h);
        const double tangent = std::hypot(du, dalpha);
        return Outcome{spread < 0.2 && tangent < 1e-6,
                       "|u|_H2/g^2 spread " + num(spread) + " (< 0.2), tangent norm " + num(tangent) + " (< 1e-6)"};
    });

    criterion(6, "reflection symmetry", 0.0, [&] {
        const Branch mirror = continue_branch(problem, -kGMax, kSteps);
        if (!mirror.complete || mirror.points.size() != branch.points.size())
            return Outcome{false, "mirrored branch incomplete: " + mirror.halt_reason};
        double coeff = 0.0, alpha = 0.0;
        for (std::size_t i = 0; i < branch.points.size(); ++i) {
            const auto r = reflect(branch.points[i].u);
            const auto& m = mirror.points[i].u;
            for (int n = 0; n <= problem.degree(); ++n)
                coeff = std::max(coeff, std::abs(r[n] - m[n]));
            alpha = std::max(alpha, std::abs(branch.points[i].alpha - mirror.points[i].alpha));
        }
        return Outcome{coeff < 1e-9 && alpha < 1e-10,
                       "max coefficient discrepancy " + num(coeff) + " (< 1e-9), max |A(-g) - A(g)| " + num(alpha)
                           + " (< 1e-10)"};
    });

    criterion(7, "Laplace-Young verification", 0.0, [&] {
        const auto& last = branch.points.at(kSteps);
        const double defect = laplace_young_defect(problem, last, 64);
        return Outcome{defect < 1e-8, "relative jump defect at g = " + num(last.g) + ": " + num(defect) + " (< 1e-8)"};
    });

    criterion(8, "Hardy suites", 5.0, [&] {
        const auto reports = run_verification_suite("hardy", 20240917);
        bool ok = !reports.empty();
        std::string detail;
        for (const auto& r : reports) {
            ok = ok && r.samples >= 50 && r.stated_constant && r.worst_ratio <= *r.stated_constant;
            detail += r.name + " worst " + num(r.worst_ratio) + " <= " + num(r.stated_constant.value_or(0.0)) + " over "
                      + std::to_string(r.samples) + "; ";
        }
        const auto one = SpectralFunction::constant(1.0);
        const auto hl = hardy_log_integrals(one);
        const double log_ratio = hl.lhs / hl.rhs;
        const double log_expected = 2.0 / std::numbers::ln2;
        const auto hp = hardy_power_integrals(one, 1.0);
        const double pow_ratio = hp.lhs / hp.rhs;
        ok = ok && std::abs(log_ratio - log_expected) < 1e-6 && std::abs(pow_ratio - 3.0) < 1e-6
             && std::abs(hardy_power_constant(1.0) - 32.0) < 1e-12;
        detail += "f = 1: log ratio " + num(log_ratio) + " (2/log 2), power ratio " + num(pow_ratio) + " vs constant "
                  + num(hardy_power_constant(1.0));
        return Outcome{ok, detail};
    });

    criterion(9, "norm equivalence", 0.0, [&] {
        bool ok = true;
        std::string detail;
        for (int k : {2, 3, 4}) {
            const auto a = verify_norm_equivalence(k, 200, 16, 20240917);
            const auto b = verify_norm_equivalence(k, 200, 16, 987654321);
            const double ca = a.worst_ratio, cb = b.worst_ratio;
            const double drift = std::abs(ca - cb) / std::max(ca, cb);
            const bool bounded = a.samples == 200 && std::isfinite(ca) && a.extras.at("lower") > 0.0;
            ok = ok && bounded && drift < 0.15;
            detail += "k=" + std::to_string(k) + " [" + num(a.extras.at("lower")) + ", " + num(a.extras.at("upper"))
                      + "] constant " + num(ca) + " refit " + num(cb) + " drift " + num(drift) + "; ";
        }
        return Outcome{ok, detail + "(drift < 0.15)"};
    });

    criterion(10, "spectral self-convergence", 0.0, [&] {
        const auto& coarse = branch.points.at(kSteps);
        const Problem fine_problem = problem.with_degree(64);
        // Independent continuation at the finer degree, not seeded from N = 32.
        const Branch fine_branch = continue_branch(fine_problem, kGMax, kSteps);
        if (!fine_branch.complete)
            return Outcome{false, "N=64 branch halted: " + fine_branch.halt_reason};
        const auto& fine = fine_branch.points.back();
        const double da = std::abs(fine.alpha - coarse.alpha);
        const double dn = std::abs(fine.u_norm_h2 - coarse.u_norm_h2);
        return Outcome{da < 1e-8 && dn < 1e-8,
                       "N=32 -> 64 at g = " + num(coarse.g) + ": |d alpha| " + num(da) + ", |d |u|_H2| " + num(dn)
                           + " (< 1e-8)"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
