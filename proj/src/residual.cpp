#include "bubble/residual.hpp"

#include "bubble/errors.hpp"
#include "bubble/legendre_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bubble {

namespace {

SpectralBasis make_basis(int degree, int quad_pad)
{
    if (degree < 2)
        throw ConfigError("truncation degree must be at least 2, got " + std::to_string(degree));
    if (quad_pad < 0)
        throw ConfigError("quadrature padding must be non-negative, got " + std::to_string(quad_pad));
    return SpectralBasis(gauss_legendre(default_quadrature_order(degree, quad_pad)), degree);
}

void require_valid(const ResidualState& state)
{
    const double m = state.margins.state_min();
    if (!(m > 0.0))
        throw StateInvalidError(std::string("state outside the admissible set: ") + state.margins.weakest()
                                    + " margin is " + std::to_string(m),
                                state.margins.weakest(), m);
}

double norm_or_one(const SpectralFunction& u) { return std::max(1.0, l2_norm(u)); }

// Applies f(nodal Phi-like values) -> coefficients, using the problem's basis.
template <class F>
SpectralFunction nodal_map(const Problem& problem, const ResidualState& state, F&& f)
{
    const auto nodes = problem.nodes();
    std::vector<double> values(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        values[i] = f(nodes[i], state.lambda[i], state.dlambda[i]);
    return problem.basis().from_nodes(values);
}

} // namespace

Problem::Problem(EosModel eos, PhysicalParams params, int degree, int quad_pad)
    : eos_(std::move(eos)), params_(params), degree_(degree), quad_pad_(quad_pad),
      basis_(make_basis(degree, quad_pad))
{
    validate_params(eos_, params_);
}

ResidualState make_state(const Problem& problem, double alpha, double g, const SpectralFunction& u)
{
    if (u.degree() > problem.degree())
        throw ConfigError("perturbation degree " + std::to_string(u.degree()) + " exceeds truncation degree "
                          + std::to_string(problem.degree()));
    ResidualState s;
    s.alpha = alpha;
    s.g = g;
    s.radius = problem.radius(alpha);
    s.u = u.resized(problem.degree());
    s.lambda = problem.basis().to_nodes(s.u);
    for (double& l : s.lambda)
        l += s.radius;
    s.dlambda = problem.basis().to_nodes(differentiate(s.u));
    s.margins = check_validity(alpha, g, problem.nodes(), s.lambda, s.dlambda, problem.eos(), problem.params());
    return s;
}

double nonlinear_term(const Problem& problem, double alpha, double g, double zeta, double lambda, double dlambda)
{
    const auto& p = problem.params();
    const double w = 1.0 - zeta * zeta;
    const double d2 = dlambda * dlambda;
    const double capillary = p.sigma * (zeta * w * d2 * dlambda + 3.0 * w * lambda * d2) / (lambda * lambda);
    const double s = lambda * lambda + w * d2;
    const double height = g * lambda * zeta;
    const double jump = (p.p_ext_star - p.rho_ext * height) - problem.eos().pfrak(alpha - height);
    return capillary + s * std::sqrt(s) / lambda * jump;
}

ResidualParts residual_parts(const Problem& problem, const ResidualState& state)
{
    require_valid(state);
    ResidualParts parts;
    parts.linear = apply_M(state.u, problem.params().sigma);
    parts.linear[0] += 2.0 * problem.params().sigma * state.radius * std::numbers::sqrt2;
    parts.nonlinear = nodal_map(problem, state, [&](double z, double l, double dl) {
        return nonlinear_term(problem, state.alpha, state.g, z, l, dl);
    });
    return parts;
}

SpectralFunction residual(const Problem& problem, const ResidualState& state)
{
    auto parts = residual_parts(problem, state);
    return parts.linear += parts.nonlinear;
}

SpectralFunction residual(const Problem& problem, double alpha, double g, const SpectralFunction& u)
{
    return residual(problem, make_state(problem, alpha, g, u));
}

SpectralFunction linearization_u_trivial(const Problem& problem, double alpha, const SpectralFunction& v)
{
    const auto& p = problem.params();
    const double radius = problem.radius(alpha);
    SpectralFunction out = apply_M(v.resized(problem.degree()), p.sigma);
    const double shift = 2.0 * radius * (p.p_ext_star - problem.eos().pfrak(alpha));
    for (int n = 0; n <= out.degree(); ++n)
        out[static_cast<std::size_t>(n)] += shift * v[static_cast<std::size_t>(n)];
    return out;
}

SpectralFunction linearization_u_fd(const Problem& problem, const ResidualState& state, const SpectralFunction& v,
                                    double h)
{
    const auto plus = residual(problem, state.alpha, state.g, state.u + h * v.resized(problem.degree()));
    const auto minus = residual(problem, state.alpha, state.g, state.u - h * v.resized(problem.degree()));
    return (plus - minus) * (0.5 / h);
}

SpectralFunction linearization_u(const Problem& problem, const ResidualState& state, const SpectralFunction& v)
{
    require_valid(state);
    if (state.g == 0.0 && l2_norm(state.u) == 0.0)
        return linearization_u_trivial(problem, state.alpha, v);
    const double h = 1e-6 * norm_or_one(state.u) / norm_or_one(v);
    return linearization_u_fd(problem, state, v, h);
}

SpectralFunction linearization_g(const Problem& problem, const ResidualState& state, double h)
{
    require_valid(state);
    const auto plus = residual(problem, state.alpha, state.g + h, state.u);
    const auto minus = residual(problem, state.alpha, state.g - h, state.u);
    return (plus - minus) * (0.5 / h);
}

SpectralFunction linearization_g_exact(const Problem& problem, const ResidualState& state)
{
    require_valid(state);
    const double rho = problem.params().rho_ext;
    return nodal_map(problem, state, [&](double z, double l, double dl) {
        const double s = l * l + (1.0 - z * z) * dl * dl;
        return s * std::sqrt(s) * z * (problem.eos().pfrak_d1(state.alpha - state.g * l * z) - rho);
    });
}

SpectralFunction linearization_g_trivial(const Problem& problem, double alpha)
{
    const double radius = problem.radius(alpha);
    const double coeff = (problem.eos().pfrak_d1(alpha) - problem.params().rho_ext) * radius * radius * radius;
    // zeta = sqrt(2/3) p_1
    SpectralFunction out(problem.degree());
    out[1] = coeff * std::sqrt(2.0 / 3.0);
    return out;
}

SpectralFunction linearization_alpha(const Problem& problem, const ResidualState& state, double h)
{
    require_valid(state);
    if (h <= 0.0)
        h = 1e-6 * std::max(1.0, std::abs(state.alpha));
    const auto plus = residual(problem, state.alpha + h, state.g, state.u);
    const auto minus = residual(problem, state.alpha - h, state.g, state.u);
    return (plus - minus) * (0.5 / h);
}

double total_curvature(double zeta, double lambda, double dlambda, double d2lambda)
{
    const double w = 1.0 - zeta * zeta;
    const double s = lambda * lambda + w * dlambda * dlambda;
    const double root = std::sqrt(s);
    const double meridian = (zeta * dlambda + lambda) / (lambda * root);
    const double azimuthal = (-w * lambda * d2lambda + 2.0 * w * dlambda * dlambda + zeta * lambda * dlambda
                              + lambda * lambda)
                             / (s * root);
    return meridian + azimuthal;
}

} // namespace bubble
