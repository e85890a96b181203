#include "bubble/errors.hpp"
#include "bubble/residual.hpp"
#include "bubble/weighted_spaces.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bubble;

namespace {

Problem benchmark(int degree = 32)
{
    PhysicalParams params;
    return Problem(EosModel(IsothermalLaw{2.0}, 1.0), params, degree);
}

double max_abs(const SpectralFunction& u)
{
    double m = 0.0;
    for (double c : u.coeffs())
        m = std::max(m, std::abs(c));
    return m;
}

double max_diff(const SpectralFunction& a, const SpectralFunction& b)
{
    return max_abs(a - b);
}

// A small smooth perturbation with u(1) = 0 content removed.
SpectralFunction bump(int degree, double scale, std::uint64_t seed)
{
    RandomFunctionGenerator gen(seed);
    auto u = gen.next(degree) * scale;
    u[1] = 0.0;
    return u;
}

} // namespace

TEST_CASE("problem construction")
{
    CHECK_THROWS_AS(Problem(EosModel(IsothermalLaw{2.0}, 1.0), PhysicalParams{}, 1), ConfigError);
    PhysicalParams bad;
    bad.p_ext_star = 3.0;
    CHECK_THROWS_AS(Problem(EosModel(IsothermalLaw{2.0}, 1.0), bad, 8), ConfigError);
    const auto p = benchmark();
    CHECK(p.nodes().size() == 56);
    CHECK(p.trivial_radius() == doctest::Approx(2.0));
    CHECK(p.with_degree(64).degree() == 64);
}

TEST_CASE("the residual vanishes on the spherical branch")
{
    const auto p = benchmark();
    const SpectralFunction zero(p.degree());
    for (int i = 0; i < 20; ++i) {
        const double alpha = -1.2 + 0.17 * i;
        CAPTURE(alpha);
        const auto xi = residual(p, alpha, 0.0, zero);
        CHECK(max_abs(xi) < 1e-12);

        const auto state = make_state(p, alpha, 0.0, zero);
        const auto parts = residual_parts(p, state);
        const double r = state.radius;
        CHECK(std::abs(parts.linear[0] - 2.0 * r * std::numbers::sqrt2) < 1e-12 * r);
        CHECK(std::abs(parts.nonlinear[0] + 2.0 * r * std::numbers::sqrt2) < 1e-12 * r);
        const double competing = r * r * (p.params().p_ext_star - p.eos().pfrak(alpha));
        CHECK(std::abs(competing + 2.0 * p.params().sigma * r) < 1e-12 * r);
    }
}

TEST_CASE("sphere curvature")
{
    for (double r : {0.5, 1.0, 2.0, 7.0})
        for (double z : {-1.0, -0.3, 0.0, 0.8, 1.0})
            CHECK(total_curvature(z, r, 0.0, 0.0) == doctest::Approx(2.0 / r).epsilon(1e-15));
}

TEST_CASE("closed-form u-linearization at the bifurcation point")
{
    const auto p = benchmark();
    const auto k = linearization_u_trivial(p, 0.0, SpectralFunction::basis(1, p.degree()));
    CHECK(max_abs(k) < 1e-14);
    const auto two = linearization_u_trivial(p, 0.0, SpectralFunction::basis(2, p.degree()));
    CHECK(std::abs(two[2] - 4.0 * p.params().sigma) < 1e-13);
    for (int n = 0; n <= p.degree(); ++n)
        if (n != 2)
            CHECK(std::abs(two[n]) < 1e-14);
}

TEST_CASE("closed-form blocks agree with finite differences")
{
    const auto p = benchmark();
    const SpectralFunction zero(p.degree());
    for (double alpha : {-0.7, 0.0, 0.4, 1.3}) {
        CAPTURE(alpha);
        const auto state = make_state(p, alpha, 0.0, zero);
        for (std::uint64_t seed : {1u, 2u}) {
            const auto v = bump(p.degree(), 1.0, seed);
            const auto closed = linearization_u(p, state, v);
            const auto fd = linearization_u_fd(p, state, v, 1e-6);
            CHECK(max_diff(closed, fd) <= 1e-6 * max_abs(closed));
        }
        const auto g_fd = linearization_g(p, state);
        const auto g_closed = linearization_g_trivial(p, alpha);
        const auto g_exact = linearization_g_exact(p, state);
        const double scale = std::max(max_abs(g_closed), 1e-300);
        if (alpha == 0.0) {
            CHECK(max_abs(g_fd) < 1e-8);
            CHECK(max_abs(g_closed) < 1e-14);
        } else {
            CHECK(max_diff(g_fd, g_closed) <= 1e-6 * scale);
            CHECK(max_diff(g_exact, g_closed) <= 1e-10 * scale);
            // Only the zeta mode is populated.
            CHECK(std::abs(g_closed[1]) == doctest::Approx(max_abs(g_closed)));
        }
        CHECK(max_abs(linearization_alpha(p, state)) < 1e-6);
    }
}

TEST_CASE("mixed alpha-g derivative at the bifurcation point")
{
    const auto p = benchmark();
    const double h = 1e-3;
    const auto plus = linearization_g_trivial(p, h);
    const auto minus = linearization_g_trivial(p, -h);
    const double mixed = (plus[1] - minus[1]) / (2.0 * h) / std::sqrt(2.0 / 3.0);
    CHECK(mixed == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("linearizations at a state with gravity")
{
    const auto p = benchmark();
    const auto u = bump(p.degree(), 0.01, 5);
    const double alpha = 0.05, g = 0.04;
    const auto state = make_state(p, alpha, g, u);

    // u-derivative: default FD step against a smaller one.
    const auto v = bump(p.degree(), 1.0, 6);
    const auto a = linearization_u(p, state, v);
    const auto b = linearization_u_fd(p, state, v, 1e-5);
    CHECK(max_diff(a, b) <= 1e-6 * max_abs(a));

    // g-derivative: finite difference against the analytic form.
    const auto gd = linearization_g(p, state);
    const auto ge = linearization_g_exact(p, state);
    CHECK(max_diff(gd, ge) <= 1e-6 * max_abs(ge));

    // alpha-derivative against a fourth-order difference.
    const double hh = 1e-3;
    const auto at = [&](double da) { return residual(p, alpha + da, g, u); };
    const auto oracle = (at(-2 * hh) - at(2 * hh) + 8.0 * (at(hh) - at(-hh))) * (1.0 / (12.0 * hh));
    const auto da = linearization_alpha(p, state);
    CHECK(max_diff(da, oracle) <= 1e-4 * max_abs(oracle));

    // Richardson: halving h cuts the central-difference error by about 4.
    const double coarse = max_diff(linearization_alpha(p, state, 2e-3), oracle);
    const double fine = max_diff(linearization_alpha(p, state, 1e-3), oracle);
    CHECK(fine < coarse / 3.0);
    CHECK(fine > coarse / 5.0);
}

TEST_CASE("reflection equivariance")
{
    const auto p = benchmark();
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const auto u = bump(p.degree(), 0.02, seed);
        for (double g : {0.01, -0.03, 0.05}) {
            const auto lhs = residual(p, 0.1, -g, reflect(u));
            const auto rhs = reflect(residual(p, 0.1, g, u));
            CHECK(max_diff(lhs, rhs) < 1e-11);
        }
    }
}

TEST_CASE("inadmissible states are rejected")
{
    const auto p = benchmark();
    const auto sink = SpectralFunction::constant(-3.0, p.degree());
    try {
        residual(p, 0.0, 0.0, sink);
        FAIL("expected a state error");
    } catch (const StateInvalidError& e) {
        CHECK(e.margin() == "positivity");
        CHECK(e.value() < 0.0);
    }
    CHECK_THROWS_AS(make_state(p, -5.0, 0.0, SpectralFunction(p.degree())), DomainError);
}

TEST_CASE("raw curvature quotient agrees with the cleared form")
{
    // For a converged-looking smooth profile the linear part plus the
    // capillary part of Phi equals K S^{3/2} / lambda pointwise.
    const auto p = benchmark();
    const auto u = bump(p.degree(), 0.05, 9);
    const double alpha = 0.0;
    const auto lambda = u + SpectralFunction::constant(p.radius(alpha), p.degree());
    const auto dl = differentiate(lambda);
    const auto d2l = differentiate(dl);
    const double sigma = p.params().sigma;
    for (double z : {-0.9, -0.4, 0.0, 0.3, 0.85}) {
        const double l = lambda(z), d = dl(z), dd = d2l(z);
        const double w = 1.0 - z * z;
        const double s = l * l + w * d * d;
        // sigma (L lambda + 2 lambda) with L lambda = -(w lambda')' = -w lambda'' + 2 z lambda'.
        const double linear = sigma * (-w * dd + 2.0 * z * d + 2.0 * l);
        const double capillary = sigma / (l * l) * (z * w * d * d * d + 3.0 * w * l * d * d);
        const double k = total_curvature(z, l, d, dd);
        CHECK((linear + capillary) == doctest::Approx(sigma * k * std::pow(s, 1.5) / l).epsilon(1e-12));
    }
}
