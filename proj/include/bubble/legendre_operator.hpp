#pragma once

#include "bubble/spectral.hpp"

#include <vector>

namespace bubble {

/// Absolute distance to an eigenvalue n(n+1) below which a resolvent is singular.
inline constexpr double kEigenvalueTolerance = 1e-10;

/// lambda_n = n(n+1), n = 0..degree.
std::vector<double> legendre_eigenvalues(int degree);

/// L u = -D((1 - zeta^2) D u); diagonal in the Legendre basis.
SpectralFunction apply_L(const SpectralFunction& u);

/// Solves (L - r I) u = f. Throws SingularOperatorError naming the nearest
/// mode when r is within kEigenvalueTolerance of some n(n+1).
SpectralFunction solve_resolvent(const SpectralFunction& f, double r);

/// M u = sigma (L + 2I) u.
SpectralFunction apply_M(const SpectralFunction& u, double sigma);

/// Solves M u = f. Throws DomainError for sigma <= 0.
SpectralFunction solve_M(const SpectralFunction& f, double sigma);

} // namespace bubble
