#include "bubble/spectral.hpp"

#include "bubble/errors.hpp"
#include "bubble/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bubble {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kNodeTolerance = 1e-15;

inline double normalization(int n) { return std::sqrt((2.0 * n + 1.0) / 2.0); }

// Classical P_n(x) and P_{n-1}(x).
inline void legendre_pair(int n, double x, double& pn, double& pnm1)
{
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        pn = 1.0;
        pnm1 = 0.0;
        return;
    }
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    pnm1 = p0;
}

} // namespace

QuadratureRule gauss_legendre(int order)
{
    if (order < 1)
        throw ConfigError("gauss_legendre: order must be >= 1, got " + std::to_string(order));

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.assign(order, 0.0);
    rule.weights.assign(order, 0.0);

    const double n = order;
    const int half = order / 2;
    for (int k = 1; k <= half; ++k) {
        double x = (1.0 - 1.0 / (8.0 * n * n) + 1.0 / (8.0 * n * n * n))
                   * std::cos(std::numbers::pi * (4.0 * k - 1.0) / (4.0 * n + 2.0));
        double pn = 0.0, pnm1 = 0.0, dp = 0.0;
        int it = 0;
        for (; it < kMaxNewtonIterations; ++it) {
            legendre_pair(order, x, pn, pnm1);
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) <= kNodeTolerance)
                break;
        }
        if (it == kMaxNewtonIterations)
            throw SolverError("gauss_legendre: Newton iteration for node " + std::to_string(k)
                              + " did not converge");
        legendre_pair(order, x, pn, pnm1);
        dp = n * (x * pn - pnm1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // k-th largest root; mirror so the rule is exactly symmetric.
        rule.nodes[order - k] = x;
        rule.nodes[k - 1] = -x;
        rule.weights[order - k] = w;
        rule.weights[k - 1] = w;
    }
    if (order % 2 == 1) {
        double pn = 0.0, pnm1 = 0.0;
        legendre_pair(order, 0.0, pn, pnm1);
        const double dp = n * (0.0 * pn - pnm1) / (0.0 - 1.0);
        rule.nodes[half] = 0.0;
        rule.weights[half] = 2.0 / (dp * dp);
    }
    return rule;
}

int default_quadrature_order(int degree, int pad)
{
    return (3 * degree + 1) / 2 + pad;
}

SpectralFunction::SpectralFunction(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        coeffs_.push_back(0.0);
}

SpectralFunction SpectralFunction::basis(int n, int degree)
{
    SpectralFunction u(std::max(n, degree));
    u.coeffs_[n] = 1.0;
    return u;
}

SpectralFunction SpectralFunction::constant(double value, int degree)
{
    SpectralFunction u(degree);
    u.coeffs_[0] = value * std::numbers::sqrt2;
    return u;
}

double SpectralFunction::operator()(double zeta) const
{
    // Clenshaw would do as well; the forward sweep keeps p_n(-z) = (-1)^n p_n(z) bitwise.
    double p0 = 1.0;
    double p1 = zeta;
    double acc = coeffs_[0] * normalization(0);
    if (coeffs_.size() > 1)
        acc += coeffs_[1] * normalization(1) * zeta;
    for (std::size_t k = 1; k + 1 < coeffs_.size(); ++k) {
        const double p2 = ((2.0 * k + 1.0) * zeta * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
        acc += coeffs_[k + 1] * normalization(static_cast<int>(k + 1)) * p2;
    }
    return acc;
}

SpectralFunction SpectralFunction::resized(int degree) const
{
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
    return SpectralFunction(std::move(c));
}

SpectralFunction& SpectralFunction::operator+=(const SpectralFunction& other)
{
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralFunction& SpectralFunction::operator-=(const SpectralFunction& other)
{
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
        coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralFunction& SpectralFunction::operator*=(double s)
{
    for (double& c : coeffs_)
        c *= s;
    return *this;
}

double eval_basis(int n, double zeta)
{
    double pn = 0.0, pnm1 = 0.0;
    legendre_pair(n, zeta, pn, pnm1);
    return normalization(n) * pn;
}

void eval_basis_all(int degree, double zeta, std::span<double> out)
{
    double p0 = 1.0;
    double p1 = zeta;
    out[0] = normalization(0);
    if (degree >= 1)
        out[1] = normalization(1) * zeta;
    for (int k = 1; k < degree; ++k) {
        const double p2 = ((2.0 * k + 1.0) * zeta * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
        out[k + 1] = normalization(k + 1) * p2;
    }
}

SpectralFunction analyze(std::span<const double> values, const QuadratureRule& rule, int degree)
{
    if (degree < 0)
        throw ConfigError("analyze: negative truncation degree");
    if (rule.order < degree + 1)
        throw ConfigError("analyze: truncation degree " + std::to_string(degree)
                          + " exceeds capacity of a " + std::to_string(rule.order) + "-point rule");
    if (values.size() != rule.nodes.size())
        throw ConfigError("analyze: value count does not match the quadrature rule");
    SpectralBasis basis(rule, degree);
    return basis.from_nodes(values);
}

std::vector<double> synthesize(const SpectralFunction& u, std::span<const double> points)
{
    std::vector<double> out(points.size());
    const int degree = u.degree();
    std::vector<double> row(static_cast<std::size_t>(degree) + 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        eval_basis_all(degree, points[i], row);
        out[i] = kernels::dot(row, u.coeffs());
    }
    return out;
}

SpectralFunction differentiate(const SpectralFunction& u)
{
    const int n = u.degree();
    if (n == 0)
        return SpectralFunction(0);
    // u'_k = (2k+1)/c_k * sum_{m>k, m-k odd} c_m u_m, accumulated backwards per parity.
    SpectralFunction du(n - 1);
    double running[2] = {0.0, 0.0};
    for (int k = n - 1; k >= 0; --k) {
        running[(k + 1) % 2] += normalization(k + 1) * u[static_cast<std::size_t>(k + 1)];
        du[static_cast<std::size_t>(k)] = (2.0 * k + 1.0) / normalization(k) * running[(k + 1) % 2];
    }
    return du;
}

SpectralFunction multiply(const SpectralFunction& u, const SpectralFunction& v, const QuadratureRule& rule)
{
    const int degree = u.degree() + v.degree();
    if (rule.order < degree + 1)
        throw ConfigError("multiply: a " + std::to_string(rule.order)
                          + "-point rule aliases a product of degree " + std::to_string(degree));
    const auto uv = synthesize(u, rule.nodes);
    const auto vv = synthesize(v, rule.nodes);
    std::vector<double> prod(uv.size());
    kernels::hadamard(uv, vv, prod);
    return analyze(prod, rule, degree);
}

SpectralFunction reflect(const SpectralFunction& u)
{
    SpectralFunction r = u;
    for (int n = 1; n <= r.degree(); n += 2)
        r[static_cast<std::size_t>(n)] = -r[static_cast<std::size_t>(n)];
    return r;
}

double l2_norm(const SpectralFunction& u)
{
    return std::sqrt(kernels::dot(u.coeffs(), u.coeffs()));
}

SpectralBasis::SpectralBasis(QuadratureRule rule, int degree) : rule_(std::move(rule)), degree_(degree)
{
    if (degree < 0)
        throw ConfigError("SpectralBasis: negative degree");
    if (rule_.order < degree + 1)
        throw ConfigError("SpectralBasis: degree " + std::to_string(degree) + " exceeds capacity of a "
                          + std::to_string(rule_.order) + "-point rule");
    const std::size_t q = rule_.nodes.size();
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    synthesis_.resize(q * m);
    analysis_.resize(m * q);
    for (std::size_t i = 0; i < q; ++i) {
        std::span<double> row(synthesis_.data() + i * m, m);
        eval_basis_all(degree, rule_.nodes[i], row);
        for (std::size_t n = 0; n < m; ++n)
            analysis_[n * q + i] = rule_.weights[i] * row[n];
    }
}

void SpectralBasis::to_nodes(const SpectralFunction& u, std::span<double> out) const
{
    if (u.degree() > degree_)
        throw ConfigError("SpectralBasis::to_nodes: input degree exceeds basis degree");
    const std::size_t m = static_cast<std::size_t>(degree_) + 1;
    if (u.degree() == degree_) {
        kernels::matvec(synthesis_, num_nodes(), m, u.coeffs(), out);
    } else {
        const SpectralFunction padded = u.resized(degree_);
        kernels::matvec(synthesis_, num_nodes(), m, padded.coeffs(), out);
    }
}

std::vector<double> SpectralBasis::to_nodes(const SpectralFunction& u) const
{
    std::vector<double> out(num_nodes());
    to_nodes(u, out);
    return out;
}

SpectralFunction SpectralBasis::from_nodes(std::span<const double> values) const
{
    if (values.size() != num_nodes())
        throw ConfigError("SpectralBasis::from_nodes: value count does not match the rule");
    SpectralFunction u(degree_);
    kernels::matvec(analysis_, static_cast<std::size_t>(degree_) + 1, num_nodes(), values, u.coeffs());
    return u;
}

} // namespace bubble
