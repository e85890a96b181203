#include "bubble/solver.hpp"

#include "bubble/errors.hpp"
#include "bubble/geometry.hpp"
#include "bubble/legendre_operator.hpp"
#include "bubble/parallel.hpp"
#include "bubble/weighted_spaces.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace bubble {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Column c of the Newton system: 0 is alpha, 1 is u(0), c >= 2 is u(c).
int mode_of_column(int c) { return c == 1 ? 0 : c; }

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

struct Iterate {
    double alpha;
    SpectralFunction u;
};

Iterate predictor(const std::vector<Iterate>& history, const std::vector<double>& gs, double g)
{
    const std::size_t n = history.size();
    if (n < 2)
        return history.back();
    const double t = (g - gs[n - 1]) / (gs[n - 1] - gs[n - 2]);
    Iterate p;
    p.alpha = history[n - 1].alpha + t * (history[n - 1].alpha - history[n - 2].alpha);
    p.u = history[n - 1].u + t * (history[n - 1].u - history[n - 2].u);
    return p;
}

double fourth_order_derivative(const std::function<double(double)>& f, double h)
{
    return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
}

} // namespace

BranchPoint describe_point(const Problem& problem, double g, double alpha, const SpectralFunction& u)
{
    BranchPoint p;
    p.g = g;
    p.alpha = alpha;
    p.u = u.resized(problem.degree());
    const auto state = make_state(problem, alpha, g, p.u);
    p.radius = state.radius;
    p.margins = state.margins;
    const auto lambda = full_profile(p.u, p.radius);
    p.monotonicity_margin = check_injective(lambda);
    p.max_lambda = max_radius(lambda);
    p.u_norm_h2 = norm_calligraphic_integral(p.u, 2, problem.basis().rule());
    return p;
}

std::vector<double> newton_jacobian(const Problem& problem, const ResidualState& state)
{
    const int n = problem.degree() + 1;
    std::vector<double> jac(static_cast<std::size_t>(n) * n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t c) {
        const SpectralFunction col = c == 0
                                         ? linearization_alpha(problem, state)
                                         : linearization_u(problem, state,
                                                           SpectralFunction::basis(mode_of_column(static_cast<int>(c)),
                                                                                   problem.degree()));
        for (int r = 0; r < n; ++r)
            jac[static_cast<std::size_t>(r) * n + c] = col[static_cast<std::size_t>(r)];
    });
    return jac;
}

BranchPoint newton_solve(const Problem& problem, double g, double alpha0, const SpectralFunction& u0,
                         const SolverOptions& options)
{
    const int n = problem.degree() + 1;
    double alpha = alpha0;
    SpectralFunction u = u0.resized(problem.degree());
    u[1] = 0.0;

    auto state = make_state(problem, alpha, g, u);
    auto f = residual(problem, state);
    double norm = l2_norm(f);
    std::vector<double> trace{norm};
    int iters = 0;
    while (!(norm < options.newton_tol)) {
        if (iters == options.max_iter)
            throw SolverError("Newton did not converge in " + std::to_string(iters) + " iterations at g = " + fmt(g)
                                  + " (residual " + fmt(norm) + ")",
                              trace);
        const auto jac = newton_jacobian(problem, state);
        const Eigen::Map<const Matrix> J(jac.data(), n, n);
        const Eigen::Map<const Eigen::VectorXd> rhs(f.coeffs().data(), n);
        const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-rhs);

        bool accepted = false;
        double t = 1.0;
        for (int damp = 0; damp <= options.max_damping; ++damp, t *= 0.5) {
            const double a_try = alpha + t * step[0];
            SpectralFunction u_try = u;
            for (int c = 1; c < n; ++c)
                u_try[static_cast<std::size_t>(mode_of_column(c))] += t * step[c];
            try {
                auto s_try = make_state(problem, a_try, g, u_try);
                if (!(s_try.margins.state_min() > 0.0))
                    continue;
                auto f_try = residual(problem, s_try);
                const double n_try = l2_norm(f_try);
                if (!(n_try < norm))
                    continue;
                alpha = a_try;
                u = std::move(u_try);
                state = std::move(s_try);
                f = std::move(f_try);
                norm = n_try;
                accepted = true;
                break;
            } catch (const DomainError&) {
                continue; // alpha left its admissible range
            }
        }
        ++iters;
        trace.push_back(norm);
        if (!accepted)
            throw SolverError("Newton stalled at g = " + fmt(g) + ": residual " + fmt(norm) + " did not decrease after "
                                  + std::to_string(options.max_damping) + " halvings",
                              trace);
    }
    BranchPoint p = describe_point(problem, g, alpha, u);
    p.residual_norm = norm;
    p.newton_iters = iters;
    return p;
}

Branch continue_branch(const Problem& problem, double g_max, int steps, const SolverOptions& options)
{
    if (steps < 1)
        throw ConfigError("continuation needs at least one step");
    if (!std::isfinite(g_max))
        throw ConfigError("g_max must be finite");
    Branch branch;
    branch.points.push_back(newton_solve(problem, 0.0, 0.0, SpectralFunction(problem.degree()), options));

    std::vector<Iterate> history{{0.0, SpectralFunction(problem.degree())}};
    std::vector<double> gs{0.0};

    const auto halt = [&](std::string reason) {
        branch.complete = false;
        branch.halt_reason = std::move(reason);
    };

    for (int k = 1; k <= steps; ++k) {
        const double g_target = g_max * k / steps;
        const double g_from = gs.back();
        std::optional<BranchPoint> reached;
        std::string failure;
        for (int level = 0; level <= options.max_step_halvings && !reached; ++level) {
            const int pieces = 1 << level;
            auto h_try = history;
            auto g_try = gs;
            try {
                BranchPoint p;
                for (int piece = 1; piece <= pieces; ++piece) {
                    const double g = piece == pieces ? g_target : g_from + (g_target - g_from) * piece / pieces;
                    const Iterate seed = predictor(h_try, g_try, g);
                    p = newton_solve(problem, g, seed.alpha, seed.u, options);
                    h_try.push_back({p.alpha, p.u});
                    g_try.push_back(g);
                }
                reached = p;
                history = std::move(h_try);
                gs = std::move(g_try);
            } catch (const SolverError& e) {
                failure = e.what();
            } catch (const StateInvalidError& e) {
                failure = e.what();
            } catch (const DomainError& e) {
                failure = e.what();
            }
        }
        if (!reached) {
            if (k == 1)
                throw SolverError("continuation could not leave the sphere: " + failure);
            halt("Newton failed after " + std::to_string(options.max_step_halvings) + " step halvings near g = "
                 + fmt(g_target) + ": " + failure);
            break;
        }
        const BranchPoint& p = *reached;
        if (!(p.monotonicity_margin > 0.0)) {
            halt("injectivity margin " + fmt(p.monotonicity_margin) + " at g = " + fmt(p.g));
            break;
        }
        if (!(p.max_lambda <= problem.params().r_slab)) {
            halt("profile leaves the slab (max lambda " + fmt(p.max_lambda) + ") at g = " + fmt(p.g));
            break;
        }
        if (!(p.margins.slab > 0.0)) {
            halt("enthalpy range no longer covers the slab at g = " + fmt(p.g));
            break;
        }
        branch.points.push_back(p);
    }
    branch.last_valid_g = branch.points.back().g;
    return branch;
}

KernelAnalysis analyze_kernel(const Problem& problem, bool finite_difference, bool pinned)
{
    const int n = problem.degree() + 1;
    const auto state = make_state(problem, 0.0, 0.0, SpectralFunction(problem.degree()));
    std::vector<int> modes;
    for (int m = 0; m < n; ++m)
        if (!(pinned && m == 1))
            modes.push_back(m);
    Eigen::MatrixXd block(n, static_cast<Eigen::Index>(modes.size()));
    for (std::size_t c = 0; c < modes.size(); ++c) {
        const auto e = SpectralFunction::basis(modes[c], problem.degree());
        const auto col = finite_difference ? linearization_u_fd(problem, state, e, 1e-6)
                                           : linearization_u_trivial(problem, 0.0, e);
        for (int r = 0; r < n; ++r)
            block(r, static_cast<Eigen::Index>(c)) = col[static_cast<std::size_t>(r)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues(); // descending
    KernelAnalysis out;
    for (Eigen::Index i = sv.size(); i-- > 0;)
        out.singular_values.push_back(sv[i]);
    const auto v = svd.matrixV().col(sv.size() - 1);
    out.kernel_vector.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t c = 0; c < modes.size(); ++c)
        out.kernel_vector[static_cast<std::size_t>(modes[c])] = v[static_cast<Eigen::Index>(c)];
    double off = 0.0;
    for (int m = 0; m < n; ++m)
        if (m != 1)
            off += out.kernel_vector[static_cast<std::size_t>(m)] * out.kernel_vector[static_cast<std::size_t>(m)];
    out.angle = std::atan2(std::sqrt(off), std::abs(out.kernel_vector[1]));
    return out;
}

double transversality(const Problem& problem, double alpha_step, double g_step, bool exact_g)
{
    const double zeta_p1 = std::sqrt(2.0 / 3.0);
    const auto coefficient = [&](double alpha) {
        const auto state = make_state(problem, alpha, 0.0, SpectralFunction(problem.degree()));
        const auto d = exact_g ? linearization_g_exact(problem, state) : linearization_g(problem, state, g_step);
        return d[1];
    };
    return fourth_order_derivative(coefficient, alpha_step) / zeta_p1;
}

double transversality_formula(const Problem& problem)
{
    const double r0 = problem.trivial_radius();
    return problem.eos().pfrak_d2(0.0) * r0 * r0 * r0;
}

DiagnosticsReport certify_bifurcation(const Problem& problem, const CertifyOptions& options)
{
    DiagnosticsReport d;
    const double sigma = problem.params().sigma;
    const double zero_tol = 1e-10 * sigma;

    const auto exact = analyze_kernel(problem);
    d.kernel_angle = exact.angle;
    d.kernel_smallest = exact.singular_values[0];
    d.kernel_gap = exact.singular_values[1];
    d.near_zero_before_pin = static_cast<int>(
        std::count_if(exact.singular_values.begin(), exact.singular_values.end(), [&](double s) { return s < zero_tol; }));
    const auto fd = analyze_kernel(problem, true);
    d.kernel_angle_fd = fd.angle;
    d.kernel_gap_fd = fd.singular_values[1];
    const auto pinned = analyze_kernel(problem, false, true);
    d.near_zero_after_pin = static_cast<int>(
        std::count_if(pinned.singular_values.begin(), pinned.singular_values.end(), [&](double s) { return s < zero_tol; }));

    d.transversality_formula = transversality_formula(problem);
    d.transversality_value = transversality(problem, options.alpha_step, options.g_step);
    d.transversality_exact = transversality(problem, options.alpha_step, options.g_step, true);
    d.transversality_error = std::abs(d.transversality_value - d.transversality_formula) / std::abs(d.transversality_formula);

    const Branch branch = continue_branch(problem, options.g_max, options.steps, options.solver);
    d.branch_complete = branch.complete;
    d.branch_last_g = branch.last_valid_g;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& p : branch.points) {
        if (p.g == 0.0)
            continue;
        const double q = p.u_norm_h2 / (p.g * p.g);
        d.quadratic_fit = std::max(d.quadratic_fit, q);
        d.alpha_fit = std::max(d.alpha_fit, std::abs(p.alpha) / (p.g * p.g));
        if (std::abs(p.g) >= std::abs(options.g_max) / 4.0 * (1.0 - 1e-12)) {
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
    }
    d.quadratic_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;

    const double h = options.tangent_step;
    const auto plus = newton_solve(problem, h, 0.0, SpectralFunction(problem.degree()), options.solver);
    const auto minus = newton_solve(problem, -h, 0.0, SpectralFunction(problem.degree()), options.solver);
    d.tangent_norm = norm_calligraphic_integral((plus.u - minus.u) * (0.5 / h), 2, problem.basis().rule());

    // Singular values are compared with a relative slack of 1e-12: the gap
    // equals 2 sigma exactly in exact arithmetic.
    d.pass = d.near_zero_before_pin == 1 && d.near_zero_after_pin == 0 && d.kernel_angle < 1e-8
             && d.kernel_gap >= 2.0 * sigma * (1.0 - 1e-12) && d.transversality_error < 1e-6 && d.tangent_norm < 1e-6;
    return d;
}

Promotion promotion_distance(const Problem& problem, const BranchPoint& point, int k_target)
{
    const Problem fine = problem.with_degree(2 * problem.degree());
    const auto state = make_state(fine, point.alpha, point.g, point.u.resized(fine.degree()));
    auto parts = residual_parts(fine, state);
    SpectralFunction forcing = parts.nonlinear;
    forcing[0] += 2.0 * problem.params().sigma * state.radius * std::numbers::sqrt2;
    Promotion out;
    out.k = k_target;
    out.promoted = solve_M(forcing * -1.0, problem.params().sigma);
    const auto diff = out.promoted - point.u.resized(fine.degree());
    out.distance = l2_norm(diff);
    out.distance_hk = norm_calligraphic_spectral(diff, k_target);
    return out;
}

Promotion elliptic_promote(const Problem& problem, const BranchPoint& point, int k_target, double tol)
{
    auto out = promotion_distance(problem, point, k_target);
    if (!(out.distance < tol))
        throw InconsistencyError("promoted solution differs from the Newton solution by " + fmt(out.distance)
                                     + "; the truncation degree is too coarse",
                                 out.distance);
    return out;
}

double laplace_young_defect(const Problem& problem, const BranchPoint& point, int samples)
{
    const auto& p = problem.params();
    const auto lambda = full_profile(point.u, point.radius);
    const auto d1 = differentiate(lambda);
    const auto d2 = differentiate(d1);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double z = std::cos(std::numbers::pi * (i + 0.5) / samples);
        const double l = lambda(z);
        const double k = total_curvature(z, l, d1(z), d2(z));
        const double height = point.g * l * z;
        const double jump = problem.eos().pfrak(point.alpha - height) - (p.p_ext_star - p.rho_ext * height);
        worst = std::max(worst, std::abs(p.sigma * k - jump) / std::max(1.0, p.sigma * std::abs(k)));
    }
    return worst;
}

UniquenessReport check_local_uniqueness(const Problem& problem, const BranchPoint& point, double radius, int trials,
                                        std::uint64_t seed, const SolverOptions& options)
{
    UniquenessReport rep;
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        ++rep.trials;
        double alpha = point.alpha + radius * dist(engine);
        SpectralFunction u = point.u;
        for (int n = 0; n <= u.degree(); ++n)
            if (n != 1)
                u[static_cast<std::size_t>(n)] += radius * dist(engine) / ((1.0 + n) * (1.0 + n));
        try {
            const auto q = newton_solve(problem, point.g, alpha, u, options);
            double dist_to = 0.0;
            if (point.g == 0.0) {
                dist_to = l2_norm(q.u);
            } else {
                dist_to = std::max(std::abs(q.alpha - point.alpha), l2_norm(q.u - point.u));
            }
            rep.worst_distance = std::max(rep.worst_distance, dist_to);
            if (dist_to < 1e-9)
                ++rep.collapsed;
        } catch (const std::exception&) {
            rep.worst_distance = std::numeric_limits<double>::infinity();
        }
    }
    rep.pass = rep.collapsed == rep.trials;
    return rep;
}

} // namespace bubble
