#include "bubble/eos.hpp"

#include "bubble/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bubble {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Index i with rho[i] <= z < rho[i+1]; the last index means linear extension.
std::size_t segment(const TabulatedLaw& t, double z)
{
    const auto it = std::upper_bound(t.rho.begin(), t.rho.end(), z);
    if (it == t.rho.begin())
        return 0;
    return static_cast<std::size_t>(it - t.rho.begin()) - 1;
}

// P on segment i as a cubic in s = z - rho[i].
struct Cubic {
    double a0, a1, a2, a3;
};

Cubic segment_cubic(const TabulatedLaw& t, std::size_t i)
{
    const double h = t.rho[i + 1] - t.rho[i];
    const double delta = (t.pressure[i + 1] - t.pressure[i]) / h;
    const double m0 = t.slope[i];
    const double m1 = t.slope[i + 1];
    return {t.pressure[i], m0, (3.0 * delta - 2.0 * m0 - m1) / h, (m0 + m1 - 2.0 * delta) / (h * h)};
}

// P'(z) on segment i written as b0 + b1 z + b2 z^2.
std::array<double, 3> derivative_in_z(const TabulatedLaw& t, std::size_t i)
{
    const Cubic c = segment_cubic(t, i);
    const double x = t.rho[i];
    // a1 + 2 a2 (z - x) + 3 a3 (z - x)^2
    return {c.a1 - 2.0 * c.a2 * x + 3.0 * c.a3 * x * x, 2.0 * c.a2 - 6.0 * c.a3 * x, 3.0 * c.a3};
}

// int_a^b (b0 + b1 t + b2 t^2) / t dt for 0 < a, b.
double piece_enthalpy(const std::array<double, 3>& b, double lo, double hi)
{
    return b[0] * std::log(hi / lo) + b[1] * (hi - lo) + 0.5 * b[2] * (hi * hi - lo * lo);
}

} // namespace

TabulatedLaw make_tabulated_law(std::span<const double> rho, std::span<const double> pressure)
{
    if (rho.size() != pressure.size())
        throw ConfigError("tabulated EOS: rho and P columns differ in length");
    TabulatedLaw t;
    if (rho.empty() || rho.front() != 0.0) {
        t.rho.push_back(0.0);
        t.pressure.push_back(0.0);
    }
    t.rho.insert(t.rho.end(), rho.begin(), rho.end());
    t.pressure.insert(t.pressure.end(), pressure.begin(), pressure.end());
    if (t.rho.size() < 3)
        throw ConfigError("tabulated EOS: need at least two positive-density samples");
    if (t.pressure.front() != 0.0)
        throw ConfigError("tabulated EOS: P must vanish at zero density");
    for (std::size_t i = 1; i < t.rho.size(); ++i) {
        if (!(t.rho[i] > t.rho[i - 1]))
            throw ConfigError("tabulated EOS: rho must be strictly increasing (row " + std::to_string(i) + ")");
        if (!(t.pressure[i] > t.pressure[i - 1]))
            throw ConfigError("tabulated EOS: P must be strictly increasing (row " + std::to_string(i) + ")");
    }
    // Fritsch-Butland: harmonic mean of neighbouring secants inside, secants at the ends.
    const std::size_t n = t.rho.size();
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        delta[i] = (t.pressure[i + 1] - t.pressure[i]) / (t.rho[i + 1] - t.rho[i]);
    t.slope.assign(n, 0.0);
    t.slope.front() = delta.front();
    t.slope.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = t.rho[i] - t.rho[i - 1];
        const double h1 = t.rho[i + 1] - t.rho[i];
        const double w0 = 2.0 * h1 + h0;
        const double w1 = h1 + 2.0 * h0;
        t.slope[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
    }
    return t;
}

TabulatedLaw load_tabulated_law(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("tabulated EOS: cannot open '" + path + "'");
    std::vector<double> rho, p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) {
            if (rho.empty() && lineno == 1)
                continue; // header
            throw ConfigError("tabulated EOS: malformed line " + std::to_string(lineno) + " in '" + path + "'");
        }
        rho.push_back(a);
        p.push_back(b);
    }
    return make_tabulated_law(rho, p);
}

EosModel::EosModel(Law law, double rho_ext) : law_(std::move(law)), rho_ext_(rho_ext)
{
    if (!(rho_ext_ > 0.0) || !std::isfinite(rho_ext_))
        throw ConfigError("EOS: rho_ext must be positive and finite, got " + fmt(rho_ext_));
    std::visit(overloaded{
                   [&](const IsothermalLaw& l) {
                       if (!(l.c2 > 0.0))
                           throw ConfigError("isothermal EOS: c2 must be positive, got " + fmt(l.c2));
                   },
                   [&](const PolytropicLaw& l) {
                       if (!(l.K > 0.0))
                           throw ConfigError("polytropic EOS: K must be positive, got " + fmt(l.K));
                       if (!(l.gamma > 0.0))
                           throw ConfigError("polytropic EOS: gamma must be positive, got " + fmt(l.gamma));
                       if (l.gamma != 1.0) {
                           const double bound = -l.K * l.gamma / (l.gamma - 1.0) * std::pow(rho_ext_, l.gamma - 1.0);
                           (l.gamma > 1.0 ? eta_min_ : eta_max_) = bound;
                       }
                   },
                   [&](const TabulatedLaw& t) {
                       if (t.rho.size() < 3 || t.slope.size() != t.rho.size())
                           throw ConfigError("tabulated EOS: use make_tabulated_law to build the table");
                       // Enthalpy at samples, relative to sample 1 first, then shifted.
                       const std::size_t n = t.rho.size();
                       std::vector<double> eta(n, 0.0);
                       for (std::size_t i = 2; i < n; ++i)
                           eta[i] = eta[i - 1] + piece_enthalpy(derivative_in_z(t, i - 1), t.rho[i - 1], t.rho[i]);
                       const auto b0 = derivative_in_z(t, 0);
                       // The first piece reaches z = 0, where b0 log z diverges unless b0 vanishes.
                       eta[0] = std::abs(b0[0]) > 1e-14 * std::abs(b0[1]) * t.rho[1]
                                    ? -kInf
                                    : -(b0[1] * t.rho[1] + 0.5 * b0[2] * t.rho[1] * t.rho[1]);
                       eta_at_samples_ = eta;
                       const double shift = tabulated_enthalpy(t, rho_ext_);
                       for (double& e : eta_at_samples_)
                           e -= shift;
                       eta_min_ = eta_at_samples_[0];
                   },
               },
               law_);
}

std::string EosModel::kind() const
{
    return std::visit(overloaded{[](const IsothermalLaw&) { return std::string("isothermal"); },
                                 [](const PolytropicLaw&) { return std::string("polytropic"); },
                                 [](const TabulatedLaw&) { return std::string("tabulated"); }},
                      law_);
}

double EosModel::pressure(double z) const
{
    if (!(z > 0.0))
        throw DomainError("pressure: density must be positive, got " + fmt(z));
    return std::visit(overloaded{
                          [&](const IsothermalLaw& l) { return l.c2 * z; },
                          [&](const PolytropicLaw& l) { return l.K * std::pow(z, l.gamma); },
                          [&](const TabulatedLaw& t) {
                              const std::size_t i = segment(t, z);
                              if (i + 1 >= t.rho.size())
                                  return t.pressure.back() + t.slope.back() * (z - t.rho.back());
                              const Cubic c = segment_cubic(t, i);
                              const double s = z - t.rho[i];
                              return c.a0 + s * (c.a1 + s * (c.a2 + s * c.a3));
                          },
                      },
                      law_);
}

double EosModel::pressure_d1(double z) const
{
    if (!(z > 0.0))
        throw DomainError("pressure_d1: density must be positive, got " + fmt(z));
    return std::visit(overloaded{
                          [&](const IsothermalLaw& l) { return l.c2; },
                          [&](const PolytropicLaw& l) { return l.K * l.gamma * std::pow(z, l.gamma - 1.0); },
                          [&](const TabulatedLaw& t) {
                              const std::size_t i = segment(t, z);
                              if (i + 1 >= t.rho.size())
                                  return t.slope.back();
                              const Cubic c = segment_cubic(t, i);
                              const double s = z - t.rho[i];
                              return c.a1 + s * (2.0 * c.a2 + 3.0 * s * c.a3);
                          },
                      },
                      law_);
}

double EosModel::pressure_inverse(double p) const
{
    if (!(p > 0.0))
        throw DomainError("pressure_inverse: pressure must be positive, got " + fmt(p));
    return std::visit(overloaded{
                          [&](const IsothermalLaw& l) { return p / l.c2; },
                          [&](const PolytropicLaw& l) { return std::pow(p / l.K, 1.0 / l.gamma); },
                          [&](const TabulatedLaw& t) {
                              if (p >= t.pressure.back())
                                  return t.rho.back() + (p - t.pressure.back()) / t.slope.back();
                              const auto it = std::upper_bound(t.pressure.begin(), t.pressure.end(), p);
                              const std::size_t i = static_cast<std::size_t>(it - t.pressure.begin()) - 1;
                              double lo = t.rho[i], hi = t.rho[i + 1];
                              for (int k = 0; k < 200 && hi - lo > 1e-16 * hi; ++k) {
                                  const double mid = 0.5 * (lo + hi);
                                  (pressure(mid) < p ? lo : hi) = mid;
                              }
                              return 0.5 * (lo + hi);
                          },
                      },
                      law_);
}

double EosModel::tabulated_enthalpy(const TabulatedLaw& t, double z) const
{
    // Accumulates from sample 1 (eta_at_samples_ is relative until the constructor shifts it).
    const std::size_t i = segment(t, z);
    if (i + 1 >= t.rho.size())
        return eta_at_samples_.back() + t.slope.back() * std::log(z / t.rho.back());
    if (i == 0)
        return eta_at_samples_[1] - piece_enthalpy(derivative_in_z(t, 0), z, t.rho[1]);
    return eta_at_samples_[i] + piece_enthalpy(derivative_in_z(t, i), t.rho[i], z);
}

double EosModel::enthalpy(double z) const
{
    if (!(z > 0.0))
        throw DomainError("enthalpy: density must be positive, got " + fmt(z));
    return std::visit(overloaded{
                          [&](const IsothermalLaw& l) { return l.c2 * std::log(z / rho_ext_); },
                          [&](const PolytropicLaw& l) {
                              if (l.gamma == 1.0)
                                  return l.K * std::log(z / rho_ext_);
                              return l.K * l.gamma / (l.gamma - 1.0)
                                     * (std::pow(z, l.gamma - 1.0) - std::pow(rho_ext_, l.gamma - 1.0));
                          },
                          [&](const TabulatedLaw& t) { return tabulated_enthalpy(t, z); },
                      },
                      law_);
}

double EosModel::tabulated_enthalpy_inverse(const TabulatedLaw& t, double y) const
{
    const auto it = std::upper_bound(eta_at_samples_.begin(), eta_at_samples_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - eta_at_samples_.begin()) - 1;
    if (i + 1 >= t.rho.size())
        return t.rho.back() * std::exp((y - eta_at_samples_.back()) / t.slope.back());
    // Bracket [rho_i, rho_{i+1}]; bisection in log z, then Newton with eta' = P'/z.
    double lo = i == 0 ? t.rho[1] * 1e-300 : t.rho[i];
    double hi = t.rho[i + 1];
    for (int k = 0; k < 60 && hi / lo > 1.0 + 1e-6; ++k) {
        const double mid = i == 0 && k < 40 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        (tabulated_enthalpy(t, mid) < y ? lo : hi) = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int k = 0; k < 20; ++k) {
        const double f = tabulated_enthalpy(t, z) - y;
        const double step = f * z / pressure_d1(z);
        const double next = std::clamp(z - step, lo, hi);
        if (std::abs(next - z) <= 1e-15 * z) {
            z = next;
            break;
        }
        z = next;
    }
    return z;
}

double EosModel::enthalpy_inverse(double y) const
{
    if (!(y > eta_min_ && y < eta_max_))
        throw RangeError("enthalpy_inverse: " + fmt(y) + " outside (" + fmt(eta_min_) + ", " + fmt(eta_max_) + ")",
                         eta_min_, eta_max_);
    return std::visit(overloaded{
                          [&](const IsothermalLaw& l) { return rho_ext_ * std::exp(y / l.c2); },
                          [&](const PolytropicLaw& l) {
                              if (l.gamma == 1.0)
                                  return rho_ext_ * std::exp(y / l.K);
                              const double base = std::pow(rho_ext_, l.gamma - 1.0) + y * (l.gamma - 1.0) / (l.K * l.gamma);
                              return std::pow(base, 1.0 / (l.gamma - 1.0));
                          },
                          [&](const TabulatedLaw& t) { return tabulated_enthalpy_inverse(t, y); },
                      },
                      law_);
}

double EosModel::pfrak(double y) const
{
    if (const auto* l = std::get_if<IsothermalLaw>(&law_)) {
        if (!(y > eta_min_ && y < eta_max_))
            enthalpy_inverse(y); // throws the range error
        return l->c2 * rho_ext_ * std::exp(y / l->c2);
    }
    return pressure(enthalpy_inverse(y));
}

double EosModel::pfrak_d1(double y) const { return enthalpy_inverse(y); }

double EosModel::pfrak_d2(double y) const
{
    const double z = enthalpy_inverse(y);
    return z / pressure_d1(z);
}

double EosModel::pfrak_inverse(double p) const { return enthalpy(pressure_inverse(p)); }

double curvature_floor(const PhysicalParams& params)
{
    return std::isinf(params.r_max) ? 0.0 : 2.0 * params.sigma / params.r_max;
}

double trivial_radius(const EosModel& eos, const PhysicalParams& params)
{
    return 2.0 * params.sigma / (eos.pressure(eos.rho_ext()) - params.p_ext_star);
}

void validate_params(const EosModel& eos, const PhysicalParams& params)
{
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma))
        throw ConfigError("sigma must be positive and finite, got " + fmt(params.sigma));
    if (!(params.p_ext_star > 0.0) || !std::isfinite(params.p_ext_star))
        throw ConfigError("p_ext_star must be positive and finite, got " + fmt(params.p_ext_star));
    if (!(params.r_max > 0.0))
        throw ConfigError("r_max must be positive, got " + fmt(params.r_max));
    if (params.rho_ext != eos.rho_ext())
        throw ConfigError("rho_ext differs between physics (" + fmt(params.rho_ext) + ") and EOS ("
                          + fmt(eos.rho_ext()) + ")");
    const double p_ref = eos.pressure(eos.rho_ext());
    const double need = curvature_floor(params) + params.p_ext_star;
    if (!(need < p_ref))
        throw ConfigError("solvability condition 2*sigma/R_max + P*_ext < P_int(rho_ext) fails: " + fmt(need)
                          + " >= " + fmt(p_ref));
    const double r0 = trivial_radius(eos, params);
    if (!(params.r_slab > r0 && params.r_slab < params.r_max))
        throw ConfigError("slab half-height r = " + fmt(params.r_slab) + " must lie in (R_0, R_max) = (" + fmt(r0)
                          + ", " + fmt(params.r_max) + ")");
}

AlphaRange alpha_range(const EosModel& eos, const PhysicalParams& params)
{
    return {eos.pfrak_inverse(params.p_ext_star + curvature_floor(params)), eos.enthalpy_max()};
}

double radius_of_alpha(double alpha, const EosModel& eos, const PhysicalParams& params)
{
    const AlphaRange range = alpha_range(eos, params);
    if (!(alpha > range.lo))
        throw DomainError("radius_of_alpha: alpha = " + fmt(alpha) + " is not above the lower bound "
                          + fmt(range.lo) + " = Pfrak^{-1}(P* + 2 sigma / R_max)");
    if (!(alpha < range.hi))
        throw DomainError("radius_of_alpha: alpha = " + fmt(alpha) + " is not below the upper bound eta_max = "
                          + fmt(range.hi));
    return 2.0 * params.sigma / (eos.pfrak(alpha) - params.p_ext_star);
}

double ValidityMargins::state_min() const noexcept { return std::min({eos, positivity, w1}); }

const char* ValidityMargins::weakest() const noexcept
{
    if (eos <= positivity && eos <= w1)
        return "eos";
    return positivity <= w1 ? "positivity" : "w1";
}

ValidityMargins check_validity(double alpha, double g, std::span<const double> zeta,
                               std::span<const double> lambda, std::span<const double> dlambda,
                               const EosModel& eos, const PhysicalParams& params)
{
    ValidityMargins m;
    const double lo = eos.enthalpy_min();
    const double hi = eos.enthalpy_max();
    const bool bounded = std::isfinite(lo) || std::isfinite(hi);
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        const double z = zeta[i];
        const double l = lambda[i];
        const double dl = dlambda[i];
        if (bounded) {
            const double y = alpha - g * l * z;
            m.eos = std::min({m.eos, y - lo, hi - y});
        }
        m.positivity = std::min(m.positivity, l);
        m.w1 = std::min(m.w1, l * l + (1.0 - z * z) * dl * dl);
    }
    if (bounded) {
        const double reach = std::abs(g) * params.r_slab;
        m.slab = std::min(alpha - reach - lo, hi - (alpha + reach));
    }
    return m;
}

} // namespace bubble
