#pragma once

// Newton solver and continuation in g for Xi(alpha, g, u) = 0 with the
// phase condition u(1) = 0, plus numerical certificates of the bifurcation
// structure at (alpha, g, u) = (0, 0, 0).

#include "bubble/residual.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bubble {

struct SolverOptions {
    double newton_tol = 1e-11;
    int max_iter = 25;
    int max_damping = 8;       // step halvings per Newton iteration
    int max_step_halvings = 6; // continuation step subdivisions
};

struct BranchPoint {
    double g = 0.0;
    double alpha = 0.0;
    double radius = 0.0;
    SpectralFunction u; // u(1) = 0
    double residual_norm = 0.0;
    int newton_iters = 0;
    ValidityMargins margins;
    double monotonicity_margin = 0.0;
    double max_lambda = 0.0;
    double u_norm_h2 = 0.0; // integral form, k = 2
};

/// Fills radius, margins, monotonicity, max lambda and the H^2 norm.
BranchPoint describe_point(const Problem& problem, double g, double alpha, const SpectralFunction& u);

/// Jacobian of the (N+1) residual modes with respect to (alpha, u(0), u(2..N)),
/// row-major. Columns are assembled independently (in parallel when enabled).
std::vector<double> newton_jacobian(const Problem& problem, const ResidualState& state);

/// Damped Newton at fixed g from the seed (alpha0, u0); u0(1) is zeroed.
/// Throws SolverError with the residual trace on failure and StateInvalidError
/// if the seed itself is inadmissible.
BranchPoint newton_solve(const Problem& problem, double g, double alpha0, const SpectralFunction& u0,
                         const SolverOptions& options = {});

struct Branch {
    std::vector<BranchPoint> points;
    bool complete = true;
    std::string halt_reason;
    double last_valid_g = 0.0;
};

/// Marches g = k g_max / steps for k = 0..steps with a secant predictor.
/// Failed steps are subdivided; the branch halts early, keeping the valid
/// prefix, when Newton fails or a converged point loses admissibility,
/// injectivity or slab containment. Throws SolverError if the first step fails.
Branch continue_branch(const Problem& problem, double g_max, int steps, const SolverOptions& options = {});

struct CertifyOptions {
    double g_max = 0.05;
    int steps = 50;
    double alpha_step = 1e-2;   // stencil width for the mixed derivative in alpha
    double g_step = 1e-6;       // finite-difference step in g
    double tangent_step = 1e-4; // half-width for the branch tangent at g = 0
    SolverOptions solver;
};

struct DiagnosticsReport {
    double kernel_angle = 0.0;
    double kernel_smallest = 0.0;
    double kernel_gap = 0.0;
    double kernel_angle_fd = 0.0;
    double kernel_gap_fd = 0.0;
    int near_zero_before_pin = 0;
    int near_zero_after_pin = 0;
    double transversality_value = 0.0;
    double transversality_exact = 0.0; // same stencil on the analytic g-derivative
    double transversality_formula = 0.0;
    double transversality_error = 0.0; // relative
    double quadratic_fit = 0.0;        // max |u|_{H^2} / g^2
    double quadratic_spread = 0.0;     // relative spread of |u|/g^2 on [g_max/4, g_max]
    double alpha_fit = 0.0;            // max |A(g)| / g^2
    double tangent_norm = 0.0;
    double branch_last_g = 0.0;
    bool branch_complete = false;
    bool pass = false;
};

/// Singular values of the u-block of the linearization at (0, 0, 0), ascending,
/// together with the right singular vector of the smallest.
struct KernelAnalysis {
    std::vector<double> singular_values;
    std::vector<double> kernel_vector;
    double angle = 0.0; // to p_1
};
KernelAnalysis analyze_kernel(const Problem& problem, bool finite_difference = false, bool pinned = false);

/// p_1-projection of d/dalpha dXi/dg at (0, 0, 0), divided by the p_1 coefficient
/// of zeta, using a fourth-order stencil of width h in alpha.
double transversality(const Problem& problem, double alpha_step, double g_step, bool exact_g = false);

/// Pfrak''(0) R_0^3.
double transversality_formula(const Problem& problem);

DiagnosticsReport certify_bifurcation(const Problem& problem, const CertifyOptions& options = {});

/// One application of u -> -M^{-1}(Phi + 2 sigma R_alpha) at degree 2N.
struct Promotion {
    SpectralFunction promoted;
    double distance = 0.0;    // l2 distance to the Newton solution
    double distance_hk = 0.0; // same in the spectral H^k norm
    int k = 0;
};
Promotion promotion_distance(const Problem& problem, const BranchPoint& point, int k_target);

/// As above; throws InconsistencyError when the l2 distance exceeds tol.
Promotion elliptic_promote(const Problem& problem, const BranchPoint& point, int k_target, double tol = 1e-9);

/// max over samples of |sigma K - (Pfrak(alpha - g lambda zeta) - (P* - rho g lambda zeta))| / max(1, sigma |K|),
/// with K from the raw curvature quotient at zeta_i = cos(pi (i + 1/2) / samples).
double laplace_young_defect(const Problem& problem, const BranchPoint& point, int samples = 64);

/// Newton from perturbed seeds around a converged point. For g = 0 every
/// iterate must return to the sphere family (u = 0); otherwise to the point.
struct UniquenessReport {
    int trials = 0;
    int collapsed = 0;
    double worst_distance = 0.0;
    bool pass = false;
};
UniquenessReport check_local_uniqueness(const Problem& problem, const BranchPoint& point, double radius,
                                        int trials, std::uint64_t seed, const SolverOptions& options = {});

} // namespace bubble
