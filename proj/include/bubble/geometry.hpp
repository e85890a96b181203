#pragma once

// Bubble geometry from a radial profile: the surface is x -> lambda(x_3) x on
// the unit sphere, the interior is the image of the unit ball.

#include "bubble/eos.hpp"
#include "bubble/spectral.hpp"

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace bubble {

inline constexpr int kProfileGrid = 1024;

using Vec3 = std::array<double, 3>;

/// lambda = R + u as a spectral function.
SpectralFunction full_profile(const SpectralFunction& u, double radius);

/// min over an evenly spaced grid on [-1, 1] of d/dt[t lambda(t)] = lambda + t lambda'.
/// Positive means t -> t lambda(t) is increasing, so the surface map is injective.
double check_injective(const SpectralFunction& lambda, int grid = kProfileGrid);

/// max of lambda over the same grid.
double max_radius(const SpectralFunction& lambda, int grid = kProfileGrid);

struct BubbleGeometry {
    SpectralFunction lambda; // full profile
    double g = 0.0;
    double alpha = 0.0;
};

/// Throws DomainError unless the injectivity margin is positive and max lambda <= r.
void require_exportable(const BubbleGeometry& geometry, const PhysicalParams& params);

/// Vertices and faces; face indices are 0-based here and written 1-based.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<std::size_t>> faces;
};

/// Latitude-longitude mesh: n_zeta - 1 rings of n_theta vertices plus two
/// poles, quads between rings and triangle fans at the caps, oriented outward.
/// Throws DomainError for n_theta < 3, n_zeta < 2 or a non-positive profile.
Mesh surface_mesh(const BubbleGeometry& geometry, int n_theta, int n_zeta);

/// Enclosed volume by the divergence theorem over the faces.
double mesh_volume(const Mesh& mesh);

/// True when every undirected edge belongs to exactly two faces.
bool mesh_watertight(const Mesh& mesh);

/// "v x y z" and "f i j k [l]" lines.
void write_mesh(std::ostream& out, const Mesh& mesh);

struct FieldSample {
    Vec3 position{};
    bool interior = false;
    double rho_int = 0.0; // NaN outside the bubble
    double p_int = 0.0;   // NaN outside the bubble
    double p_ext = 0.0;
};

/// True when |x| < lambda(x_3 / |x|); the origin is inside.
bool is_interior(const BubbleGeometry& geometry, const Vec3& x);

/// Interior density eta^{-1}(alpha - g x_3) and pressure Pfrak(alpha - g x_3);
/// exterior pressure P* - g rho_ext x_3 everywhere. DomainError for |x_3| > r.
std::vector<FieldSample> sample_fields(const BubbleGeometry& geometry, const EosModel& eos,
                                       const PhysicalParams& params, std::span<const Vec3> points);

struct ProfileRow {
    double zeta;
    double lambda;
    double dlambda;
};

/// lambda and lambda' on an evenly spaced zeta grid.
std::vector<ProfileRow> profile(const BubbleGeometry& geometry, int points = kProfileGrid);

} // namespace bubble
