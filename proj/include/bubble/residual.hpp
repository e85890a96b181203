#pragma once

// Residual of the axisymmetric Laplace-Young equation for a star-shaped
// bubble surface x -> lambda(x_3) x, with lambda = R_alpha + u on [-1, 1]:
//
//   Xi(alpha, g, u) = sigma [L u + 2 lambda] + Phi(alpha, g, lambda),
//   Phi = sigma lambda^{-2} [zeta (1-zeta^2) lambda'^3 + 3 (1-zeta^2) lambda lambda'^2]
//       + lambda^{-1} S^{3/2} [(P* - rho_ext g lambda zeta) - Pfrak(alpha - g lambda zeta)],
//   S = lambda^2 + (1-zeta^2) lambda'^2.
//
// This is the curvature balance sigma K = P_int - P_ext multiplied through by
// S^{3/2} / lambda, which keeps every term bounded at the poles.

#include "bubble/eos.hpp"
#include "bubble/spectral.hpp"

#include <span>
#include <vector>

namespace bubble {

/// Everything fixed during a solve: the EOS, the constants and the discretization.
class Problem {
public:
    /// Throws ConfigError for invalid parameters or degree < 2.
    Problem(EosModel eos, PhysicalParams params, int degree, int quad_pad = 8);

    const EosModel& eos() const noexcept { return eos_; }
    const PhysicalParams& params() const noexcept { return params_; }
    int degree() const noexcept { return degree_; }
    int quad_pad() const noexcept { return quad_pad_; }
    const SpectralBasis& basis() const noexcept { return basis_; }
    std::span<const double> nodes() const noexcept { return basis_.nodes(); }

    double radius(double alpha) const { return radius_of_alpha(alpha, eos_, params_); }
    double trivial_radius() const { return bubble::trivial_radius(eos_, params_); }

    /// Same physics at another truncation degree.
    Problem with_degree(int degree) const { return Problem(eos_, params_, degree, quad_pad_); }

private:
    EosModel eos_;
    PhysicalParams params_;
    int degree_;
    int quad_pad_;
    SpectralBasis basis_;
};

/// A point (alpha, g, u) with lambda and D lambda cached at the quadrature nodes.
struct ResidualState {
    double alpha = 0.0;
    double g = 0.0;
    double radius = 0.0; // R_alpha
    SpectralFunction u;
    std::vector<double> lambda;
    std::vector<double> dlambda;
    ValidityMargins margins;
};

/// Builds the state. DomainError if alpha is outside the admissible range;
/// margins are computed but not enforced here.
ResidualState make_state(const Problem& problem, double alpha, double g, const SpectralFunction& u);

/// Pointwise Phi for given lambda, D lambda at zeta.
double nonlinear_term(const Problem& problem, double alpha, double g, double zeta, double lambda, double dlambda);

/// Xi truncated to degree N. Throws StateInvalidError when a margin is <= 0.
SpectralFunction residual(const Problem& problem, const ResidualState& state);
SpectralFunction residual(const Problem& problem, double alpha, double g, const SpectralFunction& u);

/// The two pieces of Xi: the linear part sigma (L u + 2 lambda) and Phi.
struct ResidualParts {
    SpectralFunction linear;
    SpectralFunction nonlinear;
};
ResidualParts residual_parts(const Problem& problem, const ResidualState& state);

/// Directional derivative of Xi in u. At trivial states (g = 0, u = 0) this is
/// the closed form sigma (L + 2) v + 2 R_alpha (P* - Pfrak(alpha)) v; otherwise
/// a central difference with h = 1e-6 max(1, |u|) / max(1, |v|).
SpectralFunction linearization_u(const Problem& problem, const ResidualState& state, const SpectralFunction& v);

/// The closed form above, valid at (alpha, 0, 0).
SpectralFunction linearization_u_trivial(const Problem& problem, double alpha, const SpectralFunction& v);

/// Central difference of v -> Xi(alpha, g, u + t v) at t = 0, step h.
SpectralFunction linearization_u_fd(const Problem& problem, const ResidualState& state, const SpectralFunction& v,
                                    double h);

/// dXi/dg by central difference with step h (default 1e-6).
SpectralFunction linearization_g(const Problem& problem, const ResidualState& state, double h = 1e-6);

/// dXi/dg from the g-dependence of Phi: S^{3/2} zeta (eta^{-1}(alpha - g lambda zeta) - rho_ext).
SpectralFunction linearization_g_exact(const Problem& problem, const ResidualState& state);

/// (Pfrak'(alpha) - rho_ext) R_alpha^3 zeta, the g-derivative at (alpha, 0, 0).
SpectralFunction linearization_g_trivial(const Problem& problem, double alpha);

/// dXi/dalpha by central difference with step h, default 1e-6 max(1, |alpha|).
/// R_alpha moves with alpha while u is held fixed.
SpectralFunction linearization_alpha(const Problem& problem, const ResidualState& state, double h = 0.0);

/// Total curvature of the surface x -> lambda(x_3) x at zeta, normalized so
/// the unit sphere has curvature 2.
double total_curvature(double zeta, double lambda, double dlambda, double d2lambda);

} // namespace bubble
