#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "canfield/geometry.hpp"
#include "canfield/vec3.hpp"

namespace canfield {

struct OffCircleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Joint geometry: three base hinges in the plane z=0, their hinge axes
/// (also in the base plane), arm lengths, and a zero-angle reference
/// direction per leg. The base center is the origin by convention.
struct JointDesign {
    std::array<Vec3, 3> hinges;       // B_i, z = 0
    std::array<Vec3, 3> axes;         // unit N_i, z = 0
    std::array<double, 3> arm_lengths;  // l_i > 0
    std::array<Vec3, 3> zero_dirs;    // unit u_i, u_i . N_i = 0

    /// Circle of reachable positions of midjoint i.
    Circle3D midcircle(int leg) const {
        return Circle3D(hinges[leg], arm_lengths[leg], axes[leg]);
    }

    /// In-circle direction 90 degrees ahead of the zero direction.
    Vec3 quarter_dir(int leg) const { return cross(zero_dirs[leg], axes[leg]); }

    void validate() const {
        const Vec3 area = cross(hinges[1] - hinges[0], hinges[2] - hinges[0]);
        if (!(area.z > 0.0))
            throw std::invalid_argument("JointDesign: hinges must span a counterclockwise triangle in z=0");
        for (int i = 0; i < 3; ++i) {
            if (hinges[i].z != 0.0 || std::abs(axes[i].z) > 1e-12)
                throw std::invalid_argument("JointDesign: hinges and axes must lie in the base plane");
            if (!(arm_lengths[i] > 0.0))
                throw std::invalid_argument("JointDesign: arm lengths must be positive");
            if (std::abs(norm(axes[i]) - 1.0) > 1e-9 || std::abs(norm(zero_dirs[i]) - 1.0) > 1e-9)
                throw std::invalid_argument("JointDesign: axes and zero_dirs must be unit length");
            if (std::abs(dot(axes[i], zero_dirs[i])) > 1e-9)
                throw std::invalid_argument("JointDesign: zero_dirs must be orthogonal to axes");
        }
    }
};

/// Driven base angles, one per leg, reduced to (-pi, pi].
struct BaseState {
    std::array<double, 3> angles;

    static double reduce(double a) {
        a = std::remainder(a, 2.0 * std::numbers::pi);
        if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
        return a;
    }
    void normalize() {
        for (double& a : angles) a = reduce(a);
    }
};

/// Full midplane-symmetric configuration: midjoints, the midplane, and the
/// distal features obtained by reflection.
struct Configuration {
    std::array<Vec3, 3> midjoints;
    Plane midplane;
    std::array<Vec3, 3> distal_hinges;
    Vec3 distal_center;
    Vec3 distal_normal;
};

/// Standard equilateral design: side b, arm length l, B_1 = (b/sqrt(3), 0, 0),
/// remaining hinges rotated by 120 degrees, zero directions radially outward.
inline JointDesign standard_design(double b, double l) {
    if (!(b > 0.0) || !(l > 0.0))
        throw std::invalid_argument("standard_design: b and l must be positive");
    JointDesign d;
    const double r = b / std::sqrt(3.0);
    for (int i = 0; i < 3; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / 3.0;
        const Vec3 u{std::cos(phi), std::sin(phi), 0.0};
        d.hinges[i] = r * u;
        d.zero_dirs[i] = u;
        d.axes[i] = cross(kZHat, u);  // parallel to the opposite side, u x N = z
        d.arm_lengths[i] = l;
    }
    return d;
}

/// Midjoint position B_i + l (cos(theta) u_i + sin(theta) (u_i x N_i)).
inline Vec3 midjoint_position(const JointDesign& d, int leg, double theta) {
    const Vec3 v = d.quarter_dir(leg);
    return d.hinges[leg] +
           d.arm_lengths[leg] * (std::cos(theta) * d.zero_dirs[leg] + std::sin(theta) * v);
}

/// Base angle recovering m on midcircle `leg`; throws OffCircleError when m
/// violates either midcircle constraint beyond 1e-6 * l.
inline double base_angle(const JointDesign& d, int leg, const Vec3& m) {
    const Vec3 rel = m - d.hinges[leg];
    const double l = d.arm_lengths[leg];
    const double tol = 1e-6 * l;
    if (std::abs(dot(d.axes[leg], rel)) > tol || std::abs(norm(rel) - l) > tol)
        throw OffCircleError("point is not on the leg's midcircle");
    return std::atan2(dot(rel, d.quarter_dir(leg)), dot(rel, d.zero_dirs[leg]));
}

/// Build a configuration from midjoints assumed to lie on the midcircles.
/// Throws ColinearError at the forward-kinematic singularity.
inline Configuration configuration_from_midjoints(const JointDesign& d,
                                                  const std::array<Vec3, 3>& m) {
    Plane midplane = plane_through_midjoints(m[0], m[1], m[2]);
    Configuration c{m, midplane, {}, {}, {}};
    for (int i = 0; i < 3; ++i) c.distal_hinges[i] = reflect_point(midplane, d.hinges[i]);
    c.distal_center = reflect_point(midplane, kZero);
    c.distal_normal = reflect_direction(midplane, -kZHat);
    return c;
}

/// Forward kinematics: base angles -> midjoints -> midplane -> distal
/// features by reflection.
inline Configuration forward_kinematics(const JointDesign& d, const BaseState& s) {
    std::array<Vec3, 3> m;
    for (int i = 0; i < 3; ++i) m[i] = midjoint_position(d, i, s.angles[i]);
    return configuration_from_midjoints(d, m);
}

enum class PointingMode { Forward, Backward };

inline double default_pointing_tol(const Vec3& target) { return 1e-9 * (1.0 + norm(target)); }

/// True iff T lies on the forward (t >= 0) or backward (t <= 0) pointing ray
/// D_c + t N_D within perpendicular distance tol.
inline bool points_at(const Configuration& c, const Vec3& target, PointingMode mode,
                      double tol) {
    const Vec3 rel = target - c.distal_center;
    const double t = dot(rel, c.distal_normal);
    const double perp = norm(rel - t * c.distal_normal);
    if (perp > tol) return false;
    return mode == PointingMode::Forward ? t >= -tol : t <= tol;
}

/// Equivalent test via the Pointing Lemma: the midplane reflection of T must
/// land on the nonpositive (forward) or nonnegative (backward) z-axis.
inline bool points_at_by_reflection(const Configuration& c, const Vec3& target,
                                    PointingMode mode, double tol) {
    const Vec3 r = reflect_point(c.midplane, target);
    if (norm(horizontal(r)) > tol) return false;
    return mode == PointingMode::Forward ? r.z <= tol : r.z >= -tol;
}

}  // namespace canfield
