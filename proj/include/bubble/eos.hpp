#pragma once

// Barotropic equations of state for the bubble interior.
//
// For a pressure law P(z) with P' > 0 and P(0+) = 0 the enthalpy is
//   eta(z) = int_{rho_ext}^z P'(t)/t dt,
// normalized so that eta(rho_ext) = 0, and the pressure as a function of
// enthalpy is Pfrak = P o eta^{-1}, with Pfrak' = eta^{-1} and
// Pfrak'' = eta^{-1} / P'(eta^{-1}).

#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bubble {

struct IsothermalLaw {
    double c2 = 1.0; // P = c2 z
};

struct PolytropicLaw {
    double K = 1.0; // P = K z^gamma
    double gamma = 1.4;
};

/// Monotone cubic through (rho, P) samples. A (0, 0) sample is prepended if
/// missing; beyond the last sample the law continues linearly.
struct TabulatedLaw {
    std::vector<double> rho;
    std::vector<double> pressure;
    std::vector<double> slope; // interpolation derivatives at the samples
};

/// Builds a tabulated law, validating strict monotonicity of both columns.
TabulatedLaw make_tabulated_law(std::span<const double> rho, std::span<const double> pressure);

/// Reads a two-column CSV (rho, P) with an optional header line.
TabulatedLaw load_tabulated_law(const std::string& path);

class EosModel {
public:
    using Law = std::variant<IsothermalLaw, PolytropicLaw, TabulatedLaw>;

    /// Throws ConfigError for non-physical parameters.
    EosModel(Law law, double rho_ext);

    const Law& law() const noexcept { return law_; }
    double rho_ext() const noexcept { return rho_ext_; }
    std::string kind() const;

    double pressure(double z) const;
    double pressure_d1(double z) const;
    /// z with P(z) = p; DomainError for p outside (0, P_max).
    double pressure_inverse(double p) const;

    double enthalpy(double z) const;
    /// Throws RangeError outside (eta_min, eta_max).
    double enthalpy_inverse(double y) const;
    double enthalpy_min() const noexcept { return eta_min_; }
    double enthalpy_max() const noexcept { return eta_max_; }

    double pfrak(double y) const;
    double pfrak_d1(double y) const;
    double pfrak_d2(double y) const;
    /// y with Pfrak(y) = p.
    double pfrak_inverse(double p) const;

private:
    double tabulated_enthalpy(const TabulatedLaw& t, double z) const;
    double tabulated_enthalpy_inverse(const TabulatedLaw& t, double y) const;

    Law law_;
    double rho_ext_;
    double eta_min_ = -std::numeric_limits<double>::infinity();
    double eta_max_ = std::numeric_limits<double>::infinity();
    // Tabulated laws: enthalpy at each sample (entry 0 is the z -> 0 limit).
    std::vector<double> eta_at_samples_;
};

/// Fixed physical constants. The gravity parameter is not stored here: it is
/// the continuation variable and travels with each state.
struct PhysicalParams {
    double sigma = 1.0;
    double rho_ext = 1.0;
    double p_ext_star = 1.0;
    double r_max = std::numeric_limits<double>::infinity();
    double r_slab = 3.0;
};

/// 2 sigma / R_max, zero for an unbounded domain.
double curvature_floor(const PhysicalParams& params);

/// R_0 = 2 sigma / (P(rho_ext) - P*).
double trivial_radius(const EosModel& eos, const PhysicalParams& params);

/// Checks positivity, the solvability condition 2 sigma / R_max + P* < P(rho_ext),
/// eos/params agreement on rho_ext and R_0 < r < R_max. Throws ConfigError.
void validate_params(const EosModel& eos, const PhysicalParams& params);

/// Admissible alpha interval (Pfrak^{-1}(P* + 2 sigma / R_max), eta_max).
struct AlphaRange {
    double lo;
    double hi;
};
AlphaRange alpha_range(const EosModel& eos, const PhysicalParams& params);

/// R_alpha = 2 sigma / (Pfrak(alpha) - P*). DomainError names the violated bound.
double radius_of_alpha(double alpha, const EosModel& eos, const PhysicalParams& params);

/// Signed distances to the boundary of the admissible state set. A state is
/// usable by the residual when eos, positivity and w1 are all positive; the
/// slab margin additionally requires alpha - g [-r, r] to stay inside the
/// enthalpy range so that the interior density is defined on the whole slab.
struct ValidityMargins {
    double eos = std::numeric_limits<double>::infinity();
    double positivity = std::numeric_limits<double>::infinity();
    double w1 = std::numeric_limits<double>::infinity();
    double slab = std::numeric_limits<double>::infinity();

    /// Smallest of eos, positivity and w1, with its name.
    double state_min() const noexcept;
    const char* weakest() const noexcept;
};

/// Margins from nodal values of lambda and D lambda at the given zeta nodes.
ValidityMargins check_validity(double alpha, double g, std::span<const double> zeta,
                               std::span<const double> lambda, std::span<const double> dlambda,
                               const EosModel& eos, const PhysicalParams& params);

} // namespace bubble
