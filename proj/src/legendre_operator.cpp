#include "bubble/legendre_operator.hpp"

#include "bubble/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bubble {

std::vector<double> legendre_eigenvalues(int degree)
{
    std::vector<double> ev(static_cast<std::size_t>(degree) + 1);
    for (int n = 0; n <= degree; ++n)
        ev[static_cast<std::size_t>(n)] = static_cast<double>(n) * (n + 1);
    return ev;
}

SpectralFunction apply_L(const SpectralFunction& u)
{
    SpectralFunction out = u;
    for (int n = 0; n <= out.degree(); ++n)
        out[static_cast<std::size_t>(n)] *= static_cast<double>(n) * (n + 1);
    return out;
}

SpectralFunction solve_resolvent(const SpectralFunction& f, double r)
{
    // Nearest eigenvalue over all n, not only those present in f.
    const double n_star = std::max(0.0, std::round((-1.0 + std::sqrt(1.0 + 4.0 * std::max(r, 0.0))) / 2.0));
    for (double n : {n_star - 1.0, n_star, n_star + 1.0}) {
        if (n < 0)
            continue;
        if (std::abs(n * (n + 1) - r) <= kEigenvalueTolerance)
            throw SingularOperatorError("solve_resolvent: r = " + std::to_string(r)
                                            + " hits the Legendre eigenvalue of mode n = "
                                            + std::to_string(static_cast<int>(n)),
                                        static_cast<int>(n));
    }
    SpectralFunction u = f;
    for (int n = 0; n <= u.degree(); ++n)
        u[static_cast<std::size_t>(n)] /= static_cast<double>(n) * (n + 1) - r;
    return u;
}

SpectralFunction apply_M(const SpectralFunction& u, double sigma)
{
    SpectralFunction out = u;
    for (int n = 0; n <= out.degree(); ++n)
        out[static_cast<std::size_t>(n)] *= sigma * (static_cast<double>(n) * (n + 1) + 2.0);
    return out;
}

SpectralFunction solve_M(const SpectralFunction& f, double sigma)
{
    if (!(sigma > 0.0))
        throw DomainError("solve_M: surface tension must be positive, got " + std::to_string(sigma));
    SpectralFunction u = f;
    for (int n = 0; n <= u.degree(); ++n)
        u[static_cast<std::size_t>(n)] /= sigma * (static_cast<double>(n) * (n + 1) + 2.0);
    return u;
}

} // namespace bubble
