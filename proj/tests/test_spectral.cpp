#include "bubble/errors.hpp"
#include "bubble/spectral.hpp"
#include "bubble/weighted_spaces.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

using namespace bubble;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("gauss_legendre small rules")
{
    const auto one = gauss_legendre(1);
    REQUIRE(one.nodes.size() == 1);
    CHECK(one.nodes[0] == 0.0);
    CHECK(one.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    const auto two = gauss_legendre(2);
    CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
}

TEST_CASE("gauss_legendre integrates the monomial zeta^30 with 16 nodes")
{
    const auto rule = gauss_legendre(16);
    double s = 0.0;
    for (int i = 0; i < rule.order; ++i)
        s += rule.weights[i] * std::pow(rule.nodes[i], 30);
    CHECK(std::abs(s - 2.0 / 31.0) < 1e-14);
}

TEST_CASE("quadrature invariants across orders")
{
    for (int order : {1, 2, 3, 5, 8, 16, 33, 56, 100, 200}) {
        CAPTURE(order);
        const auto rule = gauss_legendre(order);
        REQUIRE(rule.order == order);
        for (int i = 0; i + 1 < order; ++i)
            CHECK(rule.nodes[i] < rule.nodes[i + 1]);
        for (int i = 0; i < order; ++i) {
            CHECK(std::abs(rule.nodes[i] + rule.nodes[order - 1 - i]) <= 1e-14);
            CHECK(rule.weights[i] > 0.0);
            CHECK(rule.nodes[i] > -1.0);
            CHECK(rule.nodes[i] < 1.0);
        }
        CHECK(std::abs(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0) - 2.0) <= 1e-13);
        if (order <= 33) {
            for (int m = 0; m <= 2 * order - 1; ++m) {
                double s = 0.0;
                for (int i = 0; i < order; ++i)
                    s += rule.weights[i] * std::pow(rule.nodes[i], m);
                const double exact = m % 2 ? 0.0 : 2.0 / (m + 1);
                CHECK(std::abs(s - exact) <= 1e-14);
            }
        }
    }
}

TEST_CASE("default quadrature order pads 3N/2")
{
    CHECK(default_quadrature_order(32) == 56);
    CHECK(default_quadrature_order(33) == 58);
    CHECK(default_quadrature_order(4, 0) == 6);
}

TEST_CASE("eval_basis values")
{
    for (double z : {-1.0, -0.3, 0.0, 0.7, 1.0})
        CHECK(eval_basis(0, z) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(eval_basis(1, 0.5) == doctest::Approx(0.612372435695794).epsilon(1e-14));
    for (int n = 0; n <= 40; ++n)
        CHECK(eval_basis(n, 1.0) == doctest::Approx(std::sqrt((2.0 * n + 1.0) / 2.0)).epsilon(1e-13));

    std::vector<double> all(11);
    eval_basis_all(10, 0.37, all);
    for (int n = 0; n <= 10; ++n)
        CHECK(all[n] == doctest::Approx(eval_basis(n, 0.37)).epsilon(1e-15));
}

TEST_CASE("analyze examples")
{
    const auto rule = gauss_legendre(12);
    std::vector<double> zeta(rule.nodes.begin(), rule.nodes.end());
    const auto u = analyze(zeta, rule, 10);
    CHECK(std::abs(u[1] - std::sqrt(2.0 / 3.0)) < 1e-14);
    for (int n = 0; n <= 10; ++n)
        if (n != 1)
            CHECK(std::abs(u[n]) < 1e-14);

    const std::vector<double> zero(rule.nodes.size(), 0.0);
    const auto z = analyze(zero, rule, 10);
    for (double c : z.coeffs())
        CHECK(c == 0.0);

    std::vector<double> p3(rule.nodes.size());
    for (std::size_t i = 0; i < p3.size(); ++i)
        p3[i] = eval_basis(3, rule.nodes[i]);
    const auto c3 = analyze(p3, rule, 10);
    CHECK(std::abs(c3[3] - 1.0) < 1e-13);
    for (int n = 0; n <= 10; ++n)
        if (n != 3)
            CHECK(std::abs(c3[n]) <= 1e-13);

    CHECK_THROWS_AS(analyze(zero, rule, 12), ConfigError);
}

TEST_CASE("synthesize and analyze are inverse when the rule resolves the degree")
{
    RandomFunctionGenerator gen(3);
    for (int degree : {0, 1, 5, 16, 32}) {
        const auto u = gen.next(degree);
        const auto rule = gauss_legendre(degree + 1);
        const auto values = synthesize(u, rule.nodes);
        const auto back = analyze(values, rule, degree);
        CHECK(max_abs_diff(u.coeffs(), back.coeffs()) < 1e-12);

        const SpectralBasis basis(gauss_legendre(default_quadrature_order(degree)), degree);
        const auto nodal = basis.to_nodes(u);
        CHECK(max_abs_diff(nodal, synthesize(u, basis.nodes())) < 1e-13);
        CHECK(max_abs_diff(basis.from_nodes(nodal).coeffs(), u.coeffs()) < 1e-13);
    }
}

TEST_CASE("pointwise evaluation matches the basis sum")
{
    RandomFunctionGenerator gen(5);
    const auto u = gen.next(9);
    for (double z : {-1.0, -0.5, 0.1, 0.9, 1.0}) {
        double s = 0.0;
        for (int n = 0; n <= 9; ++n)
            s += u[n] * eval_basis(n, z);
        CHECK(u(z) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("differentiate")
{
    const auto dc = differentiate(SpectralFunction::constant(3.0, 0));
    CHECK(dc.degree() == 0);
    CHECK(dc[0] == 0.0);

    const auto d1 = differentiate(SpectralFunction::basis(1, 1));
    CHECK(std::abs(d1[0] - std::sqrt(3.0)) < 1e-14);

    // Second derivative of degree <= 2 functions against a centred difference.
    RandomFunctionGenerator gen(9);
    const auto rule = gauss_legendre(6);
    for (int trial = 0; trial < 5; ++trial) {
        const auto u = gen.next(2);
        const auto d2 = differentiate(differentiate(u));
        const double h = 1e-3;
        for (double z : rule.nodes) {
            const double fd = (u(z + h) - 2.0 * u(z) + u(z - h)) / (h * h);
            CHECK(std::abs(d2(z) - fd) < 1e-8);
        }
    }

    // Higher degree: derivative of a random function against the analytic
    // derivative of each classical Legendre term, checked at sample points.
    const auto u = gen.next(20);
    const auto du = differentiate(u);
    CHECK(du.degree() == 19);
    for (double z : {-0.8, -0.2, 0.4, 0.95}) {
        const double h = 1e-5;
        const double fd = (u(z + h) - u(z - h)) / (2.0 * h);
        CHECK(std::abs(du(z) - fd) < 1e-7);
    }
}

TEST_CASE("multiply examples")
{
    RandomFunctionGenerator gen(17);
    const auto v = gen.next(6);
    const auto rule = gauss_legendre(12);
    const auto pv = multiply(SpectralFunction::basis(0, 0), v, rule);
    for (int n = 0; n <= 6; ++n)
        CHECK(std::abs(pv[n] - v[n] / std::sqrt(2.0)) < 1e-14);

    const auto zeta = SpectralFunction::basis(1, 1) * std::sqrt(2.0 / 3.0);
    const auto sq = multiply(zeta, zeta, rule);
    std::vector<double> z2(rule.nodes.size());
    for (std::size_t i = 0; i < z2.size(); ++i)
        z2[i] = rule.nodes[i] * rule.nodes[i];
    const auto oracle = analyze(z2, rule, 2);
    CHECK(max_abs_diff(sq.coeffs(), oracle.coeffs()) < 1e-14);
    CHECK(std::abs(sq[0] - std::sqrt(2.0) / 3.0) < 1e-14);
    CHECK(std::abs(sq[2] - 2.0 / (3.0 * std::sqrt(2.5))) < 1e-14);

    const auto a = gen.next(8);
    const auto b = gen.next(8);
    const auto r17 = gauss_legendre(17);
    const auto ab = multiply(a, b, r17);
    const auto va = synthesize(a, r17.nodes);
    const auto vb = synthesize(b, r17.nodes);
    const auto vab = synthesize(ab, r17.nodes);
    for (std::size_t i = 0; i < va.size(); ++i)
        CHECK(std::abs(vab[i] - va[i] * vb[i]) < 1e-12);

    CHECK_THROWS_AS(multiply(a, b, gauss_legendre(16)), ConfigError);
}

TEST_CASE("orthonormality under quadrature")
{
    const auto rule = gauss_legendre(40);
    for (int n = 0; n < 40; ++n)
        for (int m = 0; m <= n && n + m <= 79; ++m) {
            double s = 0.0;
            for (int i = 0; i < rule.order; ++i)
                s += rule.weights[i] * eval_basis(n, rule.nodes[i]) * eval_basis(m, rule.nodes[i]);
            CHECK(std::abs(s - (n == m ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("parity of coefficients")
{
    const auto rule = gauss_legendre(40);
    std::vector<double> even(rule.nodes.size()), odd(rule.nodes.size());
    for (std::size_t i = 0; i < even.size(); ++i) {
        even[i] = std::cosh(rule.nodes[i]) + rule.nodes[i] * rule.nodes[i];
        odd[i] = std::sin(2.0 * rule.nodes[i]);
    }
    const auto ce = analyze(even, rule, 30);
    const auto co = analyze(odd, rule, 30);
    for (int n = 0; n <= 30; ++n) {
        if (n % 2)
            CHECK(std::abs(ce[n]) <= 1e-13);
        else
            CHECK(std::abs(co[n]) <= 1e-13);
    }

    RandomFunctionGenerator gen(2);
    const auto u = gen.next(7);
    const auto r = reflect(u);
    for (double z : {-0.7, 0.2, 0.9})
        CHECK(r(z) == doctest::Approx(u(-z)).epsilon(1e-14));
}

TEST_CASE("spectral accuracy for exp on [-1, 1]")
{
    std::vector<double> errors;
    std::vector<double> grid(401);
    for (int i = 0; i <= 400; ++i)
        grid[i] = -1.0 + i / 200.0;
    for (int degree : {4, 8, 16, 24}) {
        const auto rule = gauss_legendre(degree + 1);
        std::vector<double> f(rule.nodes.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = std::exp(rule.nodes[i]);
        const auto u = analyze(f, rule, degree);
        const auto v = synthesize(u, grid);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(v[i] - std::exp(grid[i])));
        errors.push_back(err);
    }
    // 4 -> 8 -> 16 shrinks by orders of magnitude; 24 sits at roundoff.
    CHECK(errors[1] < 1e-3 * errors[0]);
    CHECK(errors[2] < 1e-6 * errors[1]);
    CHECK(errors[3] < 5e-14);
}

TEST_CASE("arithmetic on spectral functions")
{
    SpectralFunction a(std::vector<double>{1.0, 2.0});
    SpectralFunction b(std::vector<double>{0.5, 0.0, 3.0});
    const auto s = a + b;
    CHECK(s.degree() == 2);
    CHECK(s[0] == 1.5);
    CHECK(s[2] == 3.0);
    const auto d = b - a;
    CHECK(d[1] == -2.0);
    CHECK((2.0 * a)[1] == 4.0);
    CHECK(a.resized(4).degree() == 4);
    CHECK(b.resized(1).degree() == 1);
    CHECK(std::as_const(a)[7] == 0.0);
    CHECK_THROWS(a[7] = 1.0);
    CHECK(l2_norm(SpectralFunction(std::vector<double>{3.0, 4.0})) == doctest::Approx(5.0));
}
