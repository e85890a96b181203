#include "bubble/geometry.hpp"

#include "bubble/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace bubble {

namespace {

std::vector<double> even_grid(int points)
{
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (points - 1);
    return grid;
}

} // namespace

SpectralFunction full_profile(const SpectralFunction& u, double radius)
{
    SpectralFunction lambda = u;
    lambda[0] += radius * std::numbers::sqrt2;
    return lambda;
}

double check_injective(const SpectralFunction& lambda, int grid)
{
    const auto t = even_grid(grid);
    const auto l = synthesize(lambda, t);
    const auto dl = synthesize(differentiate(lambda), t);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i)
        margin = std::min(margin, l[i] + t[i] * dl[i]);
    return margin;
}

double max_radius(const SpectralFunction& lambda, int grid)
{
    const auto l = synthesize(lambda, even_grid(grid));
    return *std::max_element(l.begin(), l.end());
}

void require_exportable(const BubbleGeometry& geometry, const PhysicalParams& params)
{
    const double inj = check_injective(geometry.lambda);
    if (!(inj > 0.0))
        throw DomainError("profile is not certified injective (margin " + std::to_string(inj) + ")");
    const double top = max_radius(geometry.lambda);
    if (!(top <= params.r_slab))
        throw DomainError("profile leaves the slab: max lambda " + std::to_string(top) + " > r = "
                          + std::to_string(params.r_slab));
}

Mesh surface_mesh(const BubbleGeometry& geometry, int n_theta, int n_zeta)
{
    if (n_theta < 3 || n_zeta < 2)
        throw DomainError("surface_mesh: need n_theta >= 3 and n_zeta >= 2");
    const std::size_t nt = static_cast<std::size_t>(n_theta);
    const std::size_t rings = static_cast<std::size_t>(n_zeta - 1);

    std::vector<double> zeta(rings + 2);
    for (std::size_t j = 0; j < rings + 2; ++j)
        zeta[j] = std::cos(std::numbers::pi * static_cast<double>(j) / n_zeta);
    zeta.front() = 1.0;
    zeta.back() = -1.0;
    const auto lambda = synthesize(geometry.lambda, zeta);
    for (double l : lambda)
        if (!(l > 0.0))
            throw DomainError("surface_mesh: profile is not positive");

    Mesh mesh;
    mesh.vertices.reserve(nt * rings + 2);
    mesh.vertices.push_back({0.0, 0.0, lambda.front()});
    for (std::size_t j = 1; j <= rings; ++j) {
        const double s = std::sqrt(std::max(0.0, 1.0 - zeta[j] * zeta[j]));
        for (std::size_t i = 0; i < nt; ++i) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / n_theta;
            mesh.vertices.push_back({lambda[j] * s * std::cos(theta), lambda[j] * s * std::sin(theta),
                                     lambda[j] * zeta[j]});
        }
    }
    mesh.vertices.push_back({0.0, 0.0, -lambda.back()});

    const std::size_t south = mesh.vertices.size() - 1;
    const auto ring = [&](std::size_t j, std::size_t i) { return 1 + (j - 1) * nt + i % nt; };
    for (std::size_t i = 0; i < nt; ++i)
        mesh.faces.push_back({0, ring(1, i), ring(1, i + 1)});
    for (std::size_t j = 1; j < rings; ++j)
        for (std::size_t i = 0; i < nt; ++i)
            mesh.faces.push_back({ring(j, i), ring(j + 1, i), ring(j + 1, i + 1), ring(j, i + 1)});
    for (std::size_t i = 0; i < nt; ++i)
        mesh.faces.push_back({ring(rings, i), south, ring(rings, i + 1)});
    return mesh;
}

double mesh_volume(const Mesh& mesh)
{
    double six_v = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        for (std::size_t k = 1; k + 1 < f.size(); ++k) {
            const Vec3& b = mesh.vertices[f[k]];
            const Vec3& c = mesh.vertices[f[k + 1]];
            six_v += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                     + a[2] * (b[0] * c[1] - b[1] * c[0]);
        }
    }
    return six_v / 6.0;
}

bool mesh_watertight(const Mesh& mesh)
{
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    for (const auto& f : mesh.faces)
        for (std::size_t k = 0; k < f.size(); ++k) {
            std::size_t a = f[k], b = f[(k + 1) % f.size()];
            if (a > b)
                std::swap(a, b);
            ++edges[{a, b}];
        }
    return std::all_of(edges.begin(), edges.end(), [](const auto& e) { return e.second == 2; });
}

void write_mesh(std::ostream& out, const Mesh& mesh)
{
    const auto old = out.precision(17);
    for (const auto& v : mesh.vertices)
        out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& f : mesh.faces) {
        out << 'f';
        for (std::size_t i : f)
            out << ' ' << i + 1;
        out << '\n';
    }
    out.precision(old);
}

bool is_interior(const BubbleGeometry& geometry, const Vec3& x)
{
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r == 0.0)
        return true;
    return r < geometry.lambda(std::clamp(x[2] / r, -1.0, 1.0));
}

std::vector<FieldSample> sample_fields(const BubbleGeometry& geometry, const EosModel& eos,
                                       const PhysicalParams& params, std::span<const Vec3> points)
{
    std::vector<FieldSample> out;
    out.reserve(points.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& x : points) {
        if (!(std::abs(x[2]) <= params.r_slab))
            throw DomainError("sample_fields: point height " + std::to_string(x[2]) + " outside the slab |x3| <= "
                              + std::to_string(params.r_slab));
        FieldSample s;
        s.position = x;
        s.p_ext = params.p_ext_star - geometry.g * params.rho_ext * x[2];
        s.interior = is_interior(geometry, x);
        if (s.interior) {
            const double y = geometry.alpha - geometry.g * x[2];
            s.rho_int = eos.enthalpy_inverse(y);
            s.p_int = eos.pfrak(y);
        } else {
            s.rho_int = nan;
            s.p_int = nan;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<ProfileRow> profile(const BubbleGeometry& geometry, int points)
{
    if (points < 2)
        throw DomainError("profile: need at least two points");
    const auto z = even_grid(points);
    const auto l = synthesize(geometry.lambda, z);
    const auto dl = synthesize(differentiate(geometry.lambda), z);
    std::vector<ProfileRow> rows(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        rows[i] = {z[i], l[i], dl[i]};
    return rows;
}

} // namespace bubble
