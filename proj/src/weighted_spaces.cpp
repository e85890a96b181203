#include "bubble/weighted_spaces.hpp"

#include "bubble/errors.hpp"
#include "bubble/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bubble {

namespace {

const QuadratureRule& panel_rule()
{
    static const QuadratureRule rule = gauss_legendre(16);
    return rule;
}

template <class F>
double composite_gauss(F&& f, double a, double b, int panels)
{
    const auto& rule = panel_rule();
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < rule.order; ++i)
            acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

bool is_nonnegative_integer(double x) { return x >= 0.0 && x == std::floor(x); }

// Gauss sum of w(z) (D^j u)^2 over a rule, with w = (1-z^2)^power.
double gauss_weighted_square(const SpectralFunction& d, int power, const QuadratureRule& rule)
{
    const auto values = synthesize(d, rule.nodes);
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = std::pow(1.0 - rule.nodes[i] * rule.nodes[i], power);
        acc += rule.weights[i] * w * values[i] * values[i];
    }
    return acc;
}

std::vector<double> fine_grid(int points)
{
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (points - 1);
    return grid;
}

} // namespace

double integrate_power_weight(const std::function<double(double)>& f, double beta, int panels)
{
    if (!(beta > -1.0))
        throw DomainError("integrate_power_weight: exponent must exceed -1, got " + std::to_string(beta));
    // x = e^{-t}: x^beta dx = e^{-(beta+1) t} dt; e^{-40} is below double resolution.
    const double rate = beta + 1.0;
    const double t_max = 40.0 / rate;
    return composite_gauss([&](double t) { return std::exp(-rate * t) * f(std::exp(-t)); }, 0.0, t_max,
                           panels);
}

double integrate_log_weight(const std::function<double(double)>& f, int panels)
{
    // s = 1/log(2/x) gives ds = dx / (x log^2(2/x)); x = 2 e^{-1/s}.
    const double s_max = 1.0 / std::numbers::ln2;
    return composite_gauss(
        [&](double s) {
            const double x = std::min(1.0, 2.0 * std::exp(-1.0 / s));
            return f(x);
        },
        0.0, s_max, panels);
}

double integrate_uniform_weight(const std::function<double(double)>& f, double delta, int panels)
{
    if (delta < -1.0)
        throw DomainError("weight exponent must be >= -1, got " + std::to_string(delta));
    if (delta == -1.0) {
        // Smooth core on [-1/2, 1/2].
        const double core = composite_gauss(
            [&](double z) {
                const double y = 1.0 - z * z;
                const double l = std::log(2.0 / y);
                return f(z) / (y * l * l);
            },
            -0.5, 0.5, 16);
        // Tails: s = 1/log(2/(1-z^2)) has ds = 2z w(z) dz, z = sqrt(1 - 2e^{-1/s}).
        const double s_half = 1.0 / std::log(8.0 / 3.0);
        const double tails = composite_gauss(
            [&](double s) {
                const double z = std::sqrt(std::max(0.0, 1.0 - 2.0 * std::exp(-1.0 / s)));
                return (f(z) + f(-z)) / (2.0 * z);
            },
            0.0, s_half, panels);
        return core + tails;
    }
    // x = 1 - |z| on each half: (1-z^2)^delta = x^delta (2-x)^delta.
    return integrate_power_weight(
        [&](double x) { return std::pow(2.0 - x, delta) * (f(1.0 - x) + f(x - 1.0)); }, delta, panels);
}

double norm_uniform(const SpectralFunction& u, int k, double delta, const QuadratureRule& rule)
{
    if (delta < -1.0)
        throw DomainError("norm_uniform: delta must be >= -1, got " + std::to_string(delta));
    if (k < 0)
        throw DomainError("norm_uniform: negative order");
    double total = 0.0;
    SpectralFunction d = u;
    for (int j = 0; j <= k; ++j) {
        if (is_nonnegative_integer(delta)) {
            const int power = static_cast<int>(delta);
            if (rule.order < d.degree() + power + 1)
                throw ConfigError("norm_uniform: a " + std::to_string(rule.order)
                                  + "-point rule cannot integrate this weighted square exactly");
            total += gauss_weighted_square(d, power, rule);
        } else {
            total += integrate_uniform_weight([&](double z) { const double v = d(z); return v * v; }, delta);
        }
        d = differentiate(d);
    }
    return std::sqrt(total);
}

double norm_calligraphic_integral(const SpectralFunction& u, int k, const QuadratureRule& rule)
{
    if (k < 0)
        throw DomainError("norm_calligraphic_integral: negative order");
    if (rule.order < u.degree() + 1)
        throw ConfigError("norm_calligraphic_integral: rule order " + std::to_string(rule.order)
                          + " too small for degree " + std::to_string(u.degree()));
    double total = 0.0;
    SpectralFunction d = u;
    for (int j = 0; j <= k; ++j) {
        total += gauss_weighted_square(d, j, rule);
        d = differentiate(d);
    }
    return std::sqrt(total);
}

double norm_calligraphic_spectral(const SpectralFunction& u, int k, double lambda)
{
    if (!(lambda > 0.0))
        throw DomainError("norm_calligraphic_spectral: shift must be positive, got " + std::to_string(lambda));
    double total = 0.0;
    for (int n = 0; n <= u.degree(); ++n) {
        const double c = u[static_cast<std::size_t>(n)];
        total += std::pow(static_cast<double>(n) * (n + 1) + lambda, k) * c * c;
    }
    return std::sqrt(total);
}

SpectralFunction RandomFunctionGenerator::next(int degree)
{
    SpectralFunction u(degree);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int n = 0; n <= degree; ++n)
        u[static_cast<std::size_t>(n)] = dist(engine_) / ((1.0 + n) * (1.0 + n));
    return u;
}

double RandomFunctionGenerator::uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int RandomFunctionGenerator::uniform_int(int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

SpectralFunction unit_interval_polynomial(std::span<const double> monomials)
{
    const int degree = std::max<int>(0, static_cast<int>(monomials.size()) - 1);
    const auto rule = gauss_legendre(degree + 1);
    std::vector<double> values(rule.nodes.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = 0.5 * (1.0 + rule.nodes[i]);
        double acc = 0.0;
        for (std::size_t m = monomials.size(); m-- > 0;)
            acc = acc * x + monomials[m];
        values[i] = acc;
    }
    return analyze(values, rule, degree);
}

double hardy_power_constant(double alpha)
{
    if (!(alpha > 0.0))
        throw DomainError("hardy_power_constant: alpha must be positive");
    return std::max(std::pow(2.0, alpha + 4.0) / alpha, (4.0 + alpha * std::pow(2.0, alpha + 2.0)) / (alpha * alpha));
}

double hardy_log_constant() { return 16.0 / std::numbers::ln2; }

HardyIntegrals hardy_log_integrals(const SpectralFunction& f)
{
    HardyIntegrals out;
    out.lhs = integrate_log_weight([&](double x) { const double v = f(2.0 * x - 1.0); return v * v; });
    // int_0^1 x (f^2 + f'^2) dx exactly; f'(x) = 2 Df(2x-1), dx = dz/2.
    const auto df = differentiate(f);
    const auto rule = gauss_legendre(f.degree() + 2);
    const auto fv = synthesize(f, rule.nodes);
    const auto dv = synthesize(df, rule.nodes);
    double acc = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        const double x = 0.5 * (1.0 + rule.nodes[i]);
        acc += rule.weights[i] * x * (fv[i] * fv[i] + 4.0 * dv[i] * dv[i]);
    }
    out.rhs = 0.5 * acc;
    return out;
}

HardyIntegrals hardy_power_integrals(const SpectralFunction& f, double alpha)
{
    if (!(alpha > 0.0))
        throw DomainError("hardy_power_integrals: alpha must be positive");
    const auto df = differentiate(f);
    HardyIntegrals out;
    out.lhs = integrate_power_weight([&](double x) { const double v = f(2.0 * x - 1.0); return v * v; },
                                     alpha - 1.0);
    out.rhs = integrate_power_weight(
        [&](double x) {
            const double v = f(2.0 * x - 1.0);
            const double dv = 2.0 * df(2.0 * x - 1.0);
            return v * v + dv * dv;
        },
        alpha + 1.0);
    return out;
}

namespace {

template <class Integrals>
InequalityReport hardy_report(std::string name, const std::vector<SpectralFunction>& family, double constant,
                              std::uint64_t seed, Integrals&& integrals)
{
    InequalityReport report;
    report.name = std::move(name);
    report.seed = seed;
    report.stated_constant = constant;
    std::vector<double> ratios(family.size(), -1.0);
    parallel_for(family.size(), [&](std::size_t i) {
        const HardyIntegrals h = integrals(family[i]);
        if (h.rhs > 0.0)
            ratios[i] = h.lhs / h.rhs;
    });
    for (double r : ratios) {
        if (r < 0.0) {
            ++report.skipped;
            continue;
        }
        ++report.samples;
        report.worst_ratio = std::max(report.worst_ratio, r);
    }
    report.pass = report.samples > 0 && report.worst_ratio <= constant;
    return report;
}

} // namespace

InequalityReport verify_hardy_log(const std::vector<SpectralFunction>& family, std::uint64_t seed)
{
    return hardy_report("hardy_log", family, hardy_log_constant(), seed,
                        [](const SpectralFunction& f) { return hardy_log_integrals(f); });
}

InequalityReport verify_hardy_power(const std::vector<SpectralFunction>& family, double alpha, std::uint64_t seed)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "hardy_power_alpha=%g", alpha);
    auto report = hardy_report(buf, family, hardy_power_constant(alpha), seed,
                               [alpha](const SpectralFunction& f) { return hardy_power_integrals(f, alpha); });
    report.extras["alpha"] = alpha;
    report.notes.emplace_back("constant read as max{2^(alpha+4)/alpha, (4 + alpha*2^(alpha+2))/alpha^2}; "
                              "the printed source has an unbalanced brace");
    return report;
}

std::vector<SpectralFunction> random_unit_interval_family(std::uint64_t seed, int count, int max_degree)
{
    RandomFunctionGenerator gen(seed);
    std::vector<SpectralFunction> family;
    family.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int degree = gen.uniform_int(0, max_degree);
        family.push_back(gen.next(degree));
    }
    return family;
}

InequalityReport verify_norm_equivalence(int k, int samples, int degree, std::uint64_t seed, double lambda)
{
    InequalityReport report;
    report.name = "norm_equivalence_k=" + std::to_string(k);
    report.seed = seed;
    RandomFunctionGenerator gen(seed);
    std::vector<SpectralFunction> us;
    for (int i = 0; i < samples; ++i)
        us.push_back(gen.next(degree));
    const auto rule = gauss_legendre(degree + 1);
    std::vector<double> ratios(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        ratios[i] = norm_calligraphic_integral(us[i], k, rule) / norm_calligraphic_spectral(us[i], k, lambda);
    });
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    for (double r : ratios) {
        lower = std::min(lower, r);
        upper = std::max(upper, r);
    }
    report.samples = samples;
    report.worst_ratio = std::max(upper, 1.0 / lower);
    report.extras["lower"] = lower;
    report.extras["upper"] = upper;
    report.extras["lambda"] = lambda;
    report.extras["degree"] = degree;
    report.pass = std::isfinite(report.worst_ratio) && lower > 0.0;
    return report;
}

double algebra_ratio(const SpectralFunction& u, const SpectralFunction& v, int k)
{
    const int degree = u.degree() + v.degree();
    const auto rule = gauss_legendre(degree + 2);
    const double nu = norm_calligraphic_integral(u, k, rule);
    const double nv = norm_calligraphic_integral(v, k, rule);
    if (nu == 0.0 || nv == 0.0)
        return 0.0;
    const auto uv = multiply(u, v, rule);
    return norm_calligraphic_integral(uv, k, rule) / (nu * nv);
}

InequalityReport verify_algebra(int k, int samples, int degree, std::uint64_t seed)
{
    InequalityReport report;
    report.name = "algebra_k=" + std::to_string(k);
    report.seed = seed;
    RandomFunctionGenerator gen(seed);
    std::vector<std::pair<SpectralFunction, SpectralFunction>> pairs;
    for (int i = 0; i < samples; ++i) {
        auto u = gen.next(degree);
        auto v = gen.next(degree);
        pairs.emplace_back(std::move(u), std::move(v));
    }
    std::vector<double> coarse(pairs.size()), fine(pairs.size());
    const auto fine_rule = gauss_legendre(2 * degree + 16);
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto& [u, v] = pairs[i];
        coarse[i] = algebra_ratio(u, v, k);
        const double nu = norm_calligraphic_integral(u, k, fine_rule);
        const double nv = norm_calligraphic_integral(v, k, fine_rule);
        fine[i] = norm_calligraphic_integral(multiply(u, v, fine_rule), k, fine_rule) / (nu * nv);
    });
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        worst_coarse = std::max(worst_coarse, coarse[i]);
        worst_fine = std::max(worst_fine, fine[i]);
    }
    report.samples = samples;
    report.worst_ratio = worst_coarse;
    const double change = std::abs(worst_fine - worst_coarse) / worst_coarse;
    report.extras["refined_worst_ratio"] = worst_fine;
    report.extras["refinement_change"] = change;
    report.pass = std::isfinite(worst_coarse) && change <= 0.10;
    report.notes.emplace_back("no explicit constant; worst ratio is the fitted constant");
    return report;
}

InequalityReport verify_embedding_chain(int k, int samples, int degree, std::uint64_t seed)
{
    if (k < 1)
        throw DomainError("verify_embedding_chain: k must be >= 1");
    InequalityReport report;
    report.name = "embedding_k=" + std::to_string(k);
    report.seed = seed;
    RandomFunctionGenerator gen(seed);
    std::vector<SpectralFunction> us;
    for (int i = 0; i < samples; ++i)
        us.push_back(gen.next(degree));
    const auto rule = gauss_legendre(degree + k + 2);
    std::vector<std::vector<double>> ratios(us.size(), std::vector<double>(static_cast<std::size_t>(k)));
    parallel_for(us.size(), [&](std::size_t i) {
        const double den = norm_calligraphic_integral(us[i], k, rule);
        SpectralFunction d = us[i];
        for (int j = 0; j < k; ++j) {
            const double weight = std::max(-1, 2 * j - k);
            ratios[i][static_cast<std::size_t>(j)] = norm_uniform(d, 0, weight, rule) / den;
            d = differentiate(d);
        }
    });
    std::vector<double> worst_j(static_cast<std::size_t>(k), 0.0);
    for (const auto& r : ratios)
        for (int j = 0; j < k; ++j)
            worst_j[static_cast<std::size_t>(j)] = std::max(worst_j[static_cast<std::size_t>(j)], r[static_cast<std::size_t>(j)]);
    report.samples = samples;
    for (int j = 0; j < k; ++j) {
        report.extras["worst_j=" + std::to_string(j)] = worst_j[static_cast<std::size_t>(j)];
        report.worst_ratio = std::max(report.worst_ratio, worst_j[static_cast<std::size_t>(j)]);
    }
    report.pass = std::isfinite(report.worst_ratio);
    report.notes.emplace_back("no explicit constant; worst ratio is the fitted constant");
    return report;
}

double ck_norm(const ScalarMap& f, int k, double lo, double hi)
{
    constexpr int kPoints = 2001;
    double best = 0.0;
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i < kPoints; ++i) {
            const double z = lo + (hi - lo) * i / (kPoints - 1);
            best = std::max(best, std::abs(f.derivative(j, z)));
        }
    return best;
}

namespace {

struct CompositionSample {
    bool skipped = true;
    double coarse = 0.0;
    double fine = 0.0;
};

double composed_norm(const ScalarMap& f, const SpectralFunction& u, int k, int degree)
{
    const auto rule = gauss_legendre(degree + 8);
    const auto uv = synthesize(u, rule.nodes);
    std::vector<double> fv(uv.size());
    for (std::size_t i = 0; i < uv.size(); ++i)
        fv[i] = f.derivative(0, uv[i]);
    return norm_calligraphic_integral(analyze(fv, rule, degree), k, rule);
}

} // namespace

InequalityReport verify_composition_bound(const ScalarMap& f, int k, int samples, double range_lo,
                                          double range_hi, int degree, std::uint64_t seed)
{
    if (k < 0)
        throw DomainError("verify_composition_bound: negative order");
    InequalityReport report;
    report.name = "composition_" + f.name + "_k=" + std::to_string(k);
    report.seed = seed;
    RandomFunctionGenerator gen(seed);
    const auto grid = fine_grid(2001);
    std::vector<SpectralFunction> us;
    for (int i = 0; i < samples; ++i) {
        SpectralFunction u = gen.next(degree);
        const auto vals = synthesize(u, grid);
        const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        const double span = *mx - *mn;
        if (span > 0.0) {
            u *= (range_hi - range_lo) / span;
            u[0] += (range_lo - *mn * (range_hi - range_lo) / span) * std::numbers::sqrt2;
        } else {
            u = SpectralFunction::constant(0.5 * (range_lo + range_hi), degree);
        }
        us.push_back(std::move(u));
    }
    const int coarse_degree = 3 * degree + 24;
    const int fine_degree = coarse_degree + 16;
    std::vector<CompositionSample> results(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        const auto& u = us[i];
        const auto vals = synthesize(u, grid);
        const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        if (!(*mn > f.domain_lo && *mx < f.domain_hi))
            return;
        // Node values must also stay inside the domain of f.
        const auto rule = gauss_legendre(fine_degree + 8);
        for (double v : synthesize(u, rule.nodes))
            if (!(v > f.domain_lo && v < f.domain_hi))
                return;
        const auto urule = gauss_legendre(u.degree() + 1);
        const double un = norm_calligraphic_integral(u, k, urule);
        const double scale = ck_norm(f, k, *mn, *mx) * std::pow(1.0 + un, k);
        results[i].skipped = false;
        results[i].coarse = composed_norm(f, u, k, coarse_degree) / scale;
        results[i].fine = composed_norm(f, u, k, fine_degree) / scale;
    });
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (const auto& r : results) {
        if (r.skipped) {
            ++report.skipped;
            continue;
        }
        ++report.samples;
        worst_coarse = std::max(worst_coarse, r.coarse);
        worst_fine = std::max(worst_fine, r.fine);
    }
    report.worst_ratio = worst_coarse;
    const double change = worst_coarse > 0.0 ? std::abs(worst_fine - worst_coarse) / worst_coarse : 0.0;
    report.extras["refined_worst_ratio"] = worst_fine;
    report.extras["refinement_change"] = change;
    report.extras["range_lo"] = range_lo;
    report.extras["range_hi"] = range_hi;
    report.pass = report.samples > 0 && std::isfinite(worst_coarse) && change <= 0.10;
    report.notes.emplace_back("no explicit constant; worst ratio is the fitted constant");
    return report;
}

std::vector<InequalityReport> run_verification_suite(std::string_view suite, std::uint64_t seed, int samples)
{
    std::vector<InequalityReport> out;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "hardy") {
        known = true;
        const int count = samples > 0 ? samples : 50;
        auto family = random_unit_interval_family(seed, count, 12);
        const double one[] = {1.0};
        const double x[] = {0.0, 1.0};
        family.insert(family.begin(), unit_interval_polynomial(x));
        family.insert(family.begin(), unit_interval_polynomial(one));
        out.push_back(verify_hardy_log(family, seed));
        for (double alpha : {0.5, 1.0, 2.0, 3.0})
            out.push_back(verify_hardy_power(family, alpha, seed));
    }
    if (all || suite == "norms") {
        known = true;
        for (int k : {2, 3, 4})
            out.push_back(verify_norm_equivalence(k, samples > 0 ? samples : 200, 16, seed));
    }
    if (all || suite == "algebra") {
        known = true;
        for (int k : {2, 3})
            out.push_back(verify_algebra(k, samples > 0 ? samples : 100, 12, seed));
    }
    if (all || suite == "embedding") {
        known = true;
        for (int k : {1, 2, 3, 4})
            out.push_back(verify_embedding_chain(k, samples > 0 ? samples : 100, 16, seed));
    }
    if (all || suite == "composition") {
        known = true;
        const int count = samples > 0 ? samples : 50;
        const ScalarMap identity{"identity", [](int j, double z) { return j == 0 ? z : (j == 1 ? 1.0 : 0.0); }};
        const ScalarMap square{"square", [](int j, double z) { return j == 0 ? z * z : (j == 1 ? 2.0 * z : (j == 2 ? 2.0 : 0.0)); }};
        const ScalarMap reciprocal{"reciprocal",
                                   [](int j, double z) {
                                       double fact = 1.0;
                                       for (int i = 2; i <= j; ++i)
                                           fact *= i;
                                       return (j % 2 ? -1.0 : 1.0) * fact / std::pow(z, j + 1);
                                   },
                                   0.0, std::numeric_limits<double>::infinity()};
        out.push_back(verify_composition_bound(identity, 2, count, -1.0, 1.0, 8, seed));
        out.push_back(verify_composition_bound(square, 2, count, 1.0, 2.0, 8, seed));
        out.push_back(verify_composition_bound(reciprocal, 2, count, 0.5, 3.0, 8, seed));
    }
    if (!known)
        throw ConfigError("unknown verification suite '" + std::string(suite)
                          + "' (expected hardy, norms, algebra, embedding, composition or all)");
    return out;
}

} // namespace bubble
