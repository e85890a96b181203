#pragma once

// Weighted Sobolev norms on (-1, 1) and sampled certification of the
// inequalities that hold between them.
//
// Two families of norms are provided:
//   * uniform weights  ||u||^2_{H^k_delta} = sum_{j<=k} int (1-z^2)^delta |D^j u|^2,
//     with delta = -1 meaning the logarithmic weight 1/((1-z^2) log^2(2/(1-z^2)));
//   * the Legendre scale ||u||^2_{H^k} = sum_{j<=k} int (1-z^2)^j |D^j u|^2, in
//     integral form and in the equivalent spectral form sum (n(n+1)+lambda)^k u(n)^2.
//
// Endpoint-singular weights are integrated by exact substitutions: x = e^{-t}
// for power weights and s = 1/log(2/x) for the logarithmic weight.

#include "bubble/spectral.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bubble {

inline constexpr int kSingularPanels = 200;

/// int_0^1 x^beta f(x) dx for beta > -1.
double integrate_power_weight(const std::function<double(double)>& f, double beta,
                              int panels = kSingularPanels);

/// int_0^1 f(x) / (x log^2(2/x)) dx.
double integrate_log_weight(const std::function<double(double)>& f, int panels = kSingularPanels);

/// int_{-1}^{1} w_delta(z) f(z) dz with the uniform-family weight for delta >= -1.
/// Integer delta >= 0 should go through an exact Gauss rule instead; this
/// routine handles every delta but is meant for the singular cases.
double integrate_uniform_weight(const std::function<double(double)>& f, double delta,
                                int panels = kSingularPanels);

/// ||u||_{H^k_delta}. Throws DomainError for delta < -1 and ConfigError when
/// an integer weight needs a larger rule than the one supplied.
double norm_uniform(const SpectralFunction& u, int k, double delta, const QuadratureRule& rule);

/// ||u||_{H^k} from its defining integrals; needs rule.order >= deg(u) + 1.
double norm_calligraphic_integral(const SpectralFunction& u, int k, const QuadratureRule& rule);

/// (sum_n (n(n+1) + lambda)^k u(n)^2)^{1/2}. Throws DomainError for lambda <= 0.
double norm_calligraphic_spectral(const SpectralFunction& u, int k, double lambda = 1.0);

/// Random coefficients u(n) ~ U(-1, 1) (1+n)^{-2} from a seeded engine.
class RandomFunctionGenerator {
public:
    explicit RandomFunctionGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {}
    std::uint64_t seed() const noexcept { return seed_; }
    SpectralFunction next(int degree);
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// f(x) = sum_m a_m x^m on [0, 1], held in the variable zeta = 2x - 1.
SpectralFunction unit_interval_polynomial(std::span<const double> monomials);

/// Outcome of one sampled inequality check.
struct InequalityReport {
    std::string name;
    int samples = 0;
    int skipped = 0;
    double worst_ratio = 0.0;
    std::optional<double> stated_constant;
    bool pass = false;
    std::uint64_t seed = 0;
    std::map<std::string, double> extras;
    std::vector<std::string> notes;
};

/// max{2^{alpha+4}/alpha, (4 + alpha 2^{alpha+2})/alpha^2}.
double hardy_power_constant(double alpha);
/// 16 / log 2.
double hardy_log_constant();

/// Left and right integrals of the two Hardy inequalities for a function on
/// [0, 1] (given in the variable zeta = 2x - 1).
struct HardyIntegrals {
    double lhs = 0.0;
    double rhs = 0.0;
};
HardyIntegrals hardy_log_integrals(const SpectralFunction& f);
HardyIntegrals hardy_power_integrals(const SpectralFunction& f, double alpha);

/// Family members are functions on [0, 1] written in zeta = 2x - 1.
InequalityReport verify_hardy_log(const std::vector<SpectralFunction>& family, std::uint64_t seed = 0);
InequalityReport verify_hardy_power(const std::vector<SpectralFunction>& family, double alpha,
                                    std::uint64_t seed = 0);

/// Random polynomials on [0, 1] for the Hardy suites, degrees drawn in [0, max_degree].
std::vector<SpectralFunction> random_unit_interval_family(std::uint64_t seed, int count, int max_degree);

/// Two-sided ratio ||u||_{H^k, integral} / ||u||_{H^k, spectral}; extras carry
/// "lower" and "upper", worst_ratio is max(upper, 1/lower).
InequalityReport verify_norm_equivalence(int k, int samples, int degree, std::uint64_t seed,
                                         double lambda = 1.0);

/// ||uv||_{H^k} / (||u||_{H^k} ||v||_{H^k}) in integral form; 0 when either factor vanishes.
double algebra_ratio(const SpectralFunction& u, const SpectralFunction& v, int k);

/// Worst ||uv|| / (||u|| ||v||) in H^k (integral form) over random pairs.
InequalityReport verify_algebra(int k, int samples, int degree, std::uint64_t seed);

/// Worst ||D^j u||_{H^0_{max(-1, 2j-k)}} / ||u||_{H^k} over j < k and samples.
InequalityReport verify_embedding_chain(int k, int samples, int degree, std::uint64_t seed);

/// A smooth scalar map with derivatives, defined on the open interval (lo, hi).
struct ScalarMap {
    std::string name;
    std::function<double(int order, double z)> derivative; // order 0 is the value
    double domain_lo = -std::numeric_limits<double>::infinity();
    double domain_hi = std::numeric_limits<double>::infinity();
};

/// max_{j<=k} sup_{[lo,hi]} |f^{(j)}|, by dense sampling.
double ck_norm(const ScalarMap& f, int k, double lo, double hi);

/// Worst ||f o u||_{H^k} / (||f||_{C^k_b(E)} (1 + ||u||_{H^k})^k) with each
/// random u rescaled so that its range closure E sits in [range_lo, range_hi].
/// Samples whose range leaves f's domain are skipped and counted.
InequalityReport verify_composition_bound(const ScalarMap& f, int k, int samples, double range_lo,
                                          double range_hi, int degree, std::uint64_t seed);

/// Named suites for the CLI: "hardy", "norms", "algebra", "embedding",
/// "composition", or "all". Throws ConfigError for unknown names.
std::vector<InequalityReport> run_verification_suite(std::string_view suite, std::uint64_t seed,
                                                     int samples = 0);

} // namespace bubble
