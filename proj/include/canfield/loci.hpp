#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "canfield/geometry.hpp"
#include "canfield/ik_constrained.hpp"
#include "canfield/ik_core.hpp"
#include "canfield/model.hpp"
#include "canfield/vec3.hpp"

namespace canfield {

struct OriginError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Orthonormal frame {rho, z} spanning the vertical plane the loci live in.
struct RadialFrame {
    Vec3 rho;  // unit, horizontal

    static RadialFrame from(const Vec3& v) {
        const Vec3 h = horizontal(v);
        const double m = norm(h);
        if (m == 0.0) throw OriginError("no radial direction for a vector on the z-axis");
        return {h / m};
    }

    Vec3 embed(double rho_coord, double z_coord) const { return rho_coord * rho + z_coord * kZHat; }
    double rho_coord(const Vec3& v) const { return dot(v, rho); }
};

/// Distal normal determined by a nonzero distal center:
/// F(x) = 2 (x_hat . z) x_hat - z. Doubles the polar angle of x.
inline Vec3 distal_normal_field(const Vec3& x) {
    const double m = norm(x);
    if (m == 0.0) throw OriginError("every distal normal is achievable at the origin");
    const Vec3 xh = x / m;
    return 2.0 * dot(xh, kZHat) * xh - kZHat;
}

/// Implicit equation of the affine pointing locus in frame coordinates:
/// E_T(rho, z) = rho^3 + rho z^2 + T_rho (z^2 - rho^2) - 2 T_z rho z.
inline double affine_locus_residual(const Vec3& target, const RadialFrame& frame, double rho,
                                    double z) {
    const double t_rho = frame.rho_coord(target);
    const double t_z = target.z;
    return rho * rho * rho + rho * z * z + t_rho * (z * z - rho * rho) - 2.0 * t_z * rho * z;
}

/// Az/El locus residual: E~_N(rho, z) = N_rho (z^2 - rho^2) - 2 N_z rho z.
inline double azel_locus_residual(const Vec3& n, const RadialFrame& frame, double rho, double z) {
    const double n_rho = frame.rho_coord(n);
    return n_rho * (z * z - rho * rho) - 2.0 * n.z * rho * z;
}

/// Set of distal centers that can point (t <= 0 branch) or backward-point
/// (t >= 0) at a target, or realize a distal normal.
struct LocusDescriptor {
    enum class Kind { PlanarCubic, ZUnionSphere, LinePair, BasePlane };

    Kind kind;
    std::optional<RadialFrame> frame;  // PlanarCubic / LinePair
    Vec3 target;                       // PlanarCubic: T; ZUnionSphere: sphere center
    double sphere_radius = 0.0;        // ZUnionSphere: |T|
    Vec3 dir_plus;                     // LinePair: normalized z + n
    Vec3 dir_minus;                    // LinePair: normalized z - n

    /// Rational parametrization of the affine locus,
    /// r(t) = ((|T|^2 - t^2) / |T - t z|^2) (T - t z); t <= 0 traces the
    /// forward branch. Only meaningful for PlanarCubic / ZUnionSphere.
    Vec3 parametrize(double t) const {
        const Vec3 w = target - t * kZHat;
        return ((norm2(target) - t * t) / norm2(w)) * w;
    }
};

/// Affine pointing locus of target T: a planar nodal cubic through T with a
/// node at the origin, degenerating to Z union the sphere through the
/// origin centered at T when T lies on Z.
inline LocusDescriptor affine_locus(const Vec3& target) {
    LocusDescriptor d{};
    d.target = target;
    if (norm(horizontal(target)) == 0.0) {
        d.kind = LocusDescriptor::Kind::ZUnionSphere;
        d.sphere_radius = norm(target);
        return d;
    }
    d.kind = LocusDescriptor::Kind::PlanarCubic;
    d.frame = RadialFrame::from(target);
    return d;
}

/// Az/El pointing locus of a direction N: two orthogonal lines through the
/// origin along z +- N_hat, except that straight-down pointing is achieved
/// exactly on the base plane.
inline LocusDescriptor azel_locus(const Vec3& n) {
    if (norm(n) == 0.0) throw std::invalid_argument("azel_locus: N must be nonzero");
    const Vec3 nh = normalized(n);
    LocusDescriptor d{};
    d.target = nh;
    const Vec3 up = kZHat + nh;
    const Vec3 down = kZHat - nh;
    if (norm(up) <= 1e-14) {  // N = -z: forward locus is the base plane
        d.kind = LocusDescriptor::Kind::BasePlane;
        return d;
    }
    d.kind = LocusDescriptor::Kind::LinePair;
    if (norm(horizontal(nh)) > 0.0) d.frame = RadialFrame::from(nh);
    d.dir_plus = normalized(up);
    d.dir_minus = norm(down) > 1e-14 ? normalized(down) : kZero;  // degenerate for N = +z
    return d;
}

/// Per-leg feasibility margins for realizing distal normal n with a
/// midplane through q. Margin i is the plane/midcircle discriminant
/// Delta_i; the direction is feasible iff all margins >= -eps.
struct FeasibilityResult {
    bool feasible = false;
    std::array<double, 3> margins{};
};

inline double default_tangency_eps(const JointDesign& d) {
    const double l = std::max({d.arm_lengths[0], d.arm_lengths[1], d.arm_lengths[2]});
    return 1e-9 * l * l;
}

/// Feasibility of a distal normal under a point constraint: build the
/// half-angle midplane through q and require every midcircle to meet it.
/// The parallel (nu_i = 0) legs are feasible iff the candidate plane equals
/// their midcircle plane. `rho_hint` supplies the radial direction when n
/// is straight down (e.g. the grid cell azimuth).
inline FeasibilityResult feasible_direction(const JointDesign& design, const Vec3& q, Vec3 n,
                                            PointingMode mode, double eps,
                                            std::optional<Vec3> rho_hint = std::nullopt) {
    n = normalized(n);
    if (mode == PointingMode::Backward) n = -n;

    Vec3 plane_normal;
    const auto half = detail::half_angle_normal(n);
    if (half) {
        plane_normal = *half;
    } else {
        // n = -z: the midplane is vertical; pick a radial direction.
        Vec3 rho = rho_hint ? horizontal(*rho_hint) : horizontal(q);
        if (norm(rho) == 0.0) rho = kXHat;
        plane_normal = normalized(rho);
    }
    const Plane plane(plane_normal, q);

    FeasibilityResult out;
    out.feasible = true;
    for (int i = 0; i < 3; ++i) {
        const Circle3D circle = design.midcircle(i);
        const CircleIntersection isect = intersect_plane_circle(plane, circle);
        switch (isect.kind) {
            case IntersectKind::WholeCircle:
                out.margins[i] = std::numeric_limits<double>::infinity();
                break;
            case IntersectKind::Empty:
                out.margins[i] = isect.discriminant;
                break;
            default:
                out.margins[i] = isect.discriminant;
                break;
        }
        if (!(out.margins[i] >= -eps)) out.feasible = false;
    }
    return out;
}

/// Constraint selector for feasibility maps.
struct FeasibilityConstraint {
    enum class Kind { Point, Frozen, Plunge };
    Kind kind;
    Vec3 point;              // Point
    FrozenMidjoint frozen{};  // Frozen
    double plunge = 0.0;     // Plunge (finite)

    Vec3 anchor() const {
        switch (kind) {
            case Kind::Point: return point;
            case Kind::Frozen: return frozen.position;
            case Kind::Plunge: return {0.0, 0.0, plunge};
        }
        return {};
    }
};

/// Boolean spherical map of feasible distal normals. Azimuth nodes are
/// k*2pi/n_az (closed-open), polar nodes span [0, pi] inclusive.
/// feasible_fraction is the sin(polar)-weighted mean.
struct FeasibilityMap {
    int n_az = 0;
    int n_pol = 0;
    std::vector<uint8_t> grid;  // pol-major: grid[pol * n_az + az]
    double feasible_fraction = 0.0;

    double azimuth(int k) const { return 2.0 * std::numbers::pi * k / n_az; }
    double polar(int j) const { return std::numbers::pi * j / (n_pol - 1); }
    bool at(int az, int pol) const { return grid[pol * n_az + az] != 0; }
};

inline FeasibilityMap feasibility_map(const JointDesign& design,
                                      const FeasibilityConstraint& constraint, int n_az, int n_pol,
                                      PointingMode mode, double eps) {
    if (n_az < 4 || n_pol < 3)
        throw std::invalid_argument("feasibility_map: grid must be at least 4x3");
    FeasibilityMap map;
    map.n_az = n_az;
    map.n_pol = n_pol;
    map.grid.resize(static_cast<size_t>(n_az) * n_pol);
    const Vec3 q = constraint.anchor();

    double weighted = 0.0, total = 0.0;
    for (int j = 0; j < n_pol; ++j) {
        const double pol = map.polar(j);
        const double w = std::sin(pol);
        for (int k = 0; k < n_az; ++k) {
            const double az = map.azimuth(k);
            const Vec3 rho{std::cos(az), std::sin(az), 0.0};
            const Vec3 dir = std::sin(pol) * rho + std::cos(pol) * kZHat;
            const bool ok = feasible_direction(design, q, dir, mode, eps, rho).feasible;
            map.grid[static_cast<size_t>(j) * n_az + k] = ok ? 1 : 0;
            weighted += ok ? w : 0.0;
            total += w;
        }
    }
    map.feasible_fraction = total > 0.0 ? weighted / total : 0.0;
    return map;
}

}  // namespace canfield
