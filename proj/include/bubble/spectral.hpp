#pragma once

// Orthonormal Legendre basis on [-1, 1], Gauss-Legendre quadrature and the
// transforms between coefficient and nodal representations.
//
// Coefficients are always stored against the orthonormal basis
// p_n = sqrt((2n+1)/2) P_n, so that <p_n, p_m>_{L^2} = delta_{nm}.

#include <cstddef>
#include <span>
#include <vector>

namespace bubble {

struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;   // strictly increasing in (-1, 1)
    std::vector<double> weights; // positive, summing to 2
};

/// Gauss-Legendre rule with `order` nodes. Nodes come from Newton iteration
/// on the three-term recurrence started from Tricomi's asymptotic guess.
/// Throws ConfigError for order < 1 and SolverError if Newton stalls.
QuadratureRule gauss_legendre(int order);

/// Default over-integration order for a degree-N discretization, ceil(3N/2)+pad.
int default_quadrature_order(int degree, int pad = 8);

/// A function on [-1, 1] held by its orthonormal Legendre coefficients.
class SpectralFunction {
public:
    SpectralFunction() : coeffs_(1, 0.0) {}
    explicit SpectralFunction(int degree) : coeffs_(static_cast<std::size_t>(degree) + 1, 0.0) {}
    explicit SpectralFunction(std::vector<double> coeffs);

    static SpectralFunction basis(int n, int degree);
    static SpectralFunction constant(double value, int degree = 0);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }
    double operator[](std::size_t n) const noexcept { return n < coeffs_.size() ? coeffs_[n] : 0.0; }
    double& operator[](std::size_t n) { return coeffs_.at(n); }

    double operator()(double zeta) const;

    /// Zero-padded or truncated copy with the given degree.
    SpectralFunction resized(int degree) const;

    SpectralFunction& operator+=(const SpectralFunction& other);
    SpectralFunction& operator-=(const SpectralFunction& other);
    SpectralFunction& operator*=(double s);

    friend SpectralFunction operator+(SpectralFunction a, const SpectralFunction& b) { return a += b; }
    friend SpectralFunction operator-(SpectralFunction a, const SpectralFunction& b) { return a -= b; }
    friend SpectralFunction operator*(double s, SpectralFunction a) { return a *= s; }
    friend SpectralFunction operator*(SpectralFunction a, double s) { return a *= s; }

private:
    std::vector<double> coeffs_;
};

/// Orthonormal p_n(zeta) via the classical recurrence for P_n.
double eval_basis(int n, double zeta);

/// p_0(zeta), ..., p_degree(zeta) in one recurrence sweep.
void eval_basis_all(int degree, double zeta, std::span<double> out);

/// Coefficients u(n) = sum_i w_i f(zeta_i) p_n(zeta_i), n = 0..degree.
/// Throws ConfigError when rule.order < degree + 1.
SpectralFunction analyze(std::span<const double> values, const QuadratureRule& rule, int degree);

/// Point values sum_n u(n) p_n(zeta) at the given points.
std::vector<double> synthesize(const SpectralFunction& u, std::span<const double> points);

/// Exact derivative in coefficient space. Degree drops by one (a constant
/// maps to the zero function of degree 0).
SpectralFunction differentiate(const SpectralFunction& u);

/// Pseudo-spectral product: nodal multiply at the rule's nodes, then
/// re-analysis at degree deg(u) + deg(v). Throws ConfigError when the rule
/// cannot resolve the product without aliasing.
SpectralFunction multiply(const SpectralFunction& u, const SpectralFunction& v, const QuadratureRule& rule);

/// zeta -> -zeta: sign flip on odd modes.
SpectralFunction reflect(const SpectralFunction& u);

/// Euclidean norm of the coefficient vector (the L^2 norm on [-1, 1]).
double l2_norm(const SpectralFunction& u);

/// Cached synthesis/analysis matrices for a fixed rule and truncation degree.
/// This is what the nonlinear solver uses for repeated transforms.
class SpectralBasis {
public:
    SpectralBasis(QuadratureRule rule, int degree);

    int degree() const noexcept { return degree_; }
    const QuadratureRule& rule() const noexcept { return rule_; }
    std::size_t num_nodes() const noexcept { return rule_.nodes.size(); }
    std::span<const double> nodes() const noexcept { return rule_.nodes; }

    /// Values at the quadrature nodes. Inputs of lower degree are zero-padded;
    /// higher degree throws ConfigError.
    void to_nodes(const SpectralFunction& u, std::span<double> out) const;
    std::vector<double> to_nodes(const SpectralFunction& u) const;

    /// Coefficients 0..degree of the nodal data.
    SpectralFunction from_nodes(std::span<const double> values) const;

private:
    QuadratureRule rule_;
    int degree_;
    std::vector<double> synthesis_; // nodes x (degree+1), row-major
    std::vector<double> analysis_;  // (degree+1) x nodes, weights folded in
};

} // namespace bubble
