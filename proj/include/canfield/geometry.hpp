#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "canfield/vec3.hpp"

namespace canfield {

/// Midjoints lie on a line, so no unique plane through them exists.
struct ColinearError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A plane N.(x - q) = 0. The normal is unit length after construction;
/// the represented point set does not depend on the normal's scale.
struct Plane {
    Vec3 normal;  // unit length
    Vec3 point;

    Plane(const Vec3& n, const Vec3& q) : normal(n), point(q) {
        const double m = norm(n);
        if (!(m > 0.0) || !std::isfinite(m))
            throw std::invalid_argument("Plane: normal must be nonzero and finite");
        normal = n / m;
    }

    /// Signed distance from a point to the plane.
    double signed_distance(const Vec3& a) const { return dot(normal, a - point); }

    bool contains(const Vec3& a, double tol) const { return std::abs(signed_distance(a)) <= tol; }
};

/// Two planes describe the same point set iff their unit normals are
/// colinear and either one's anchor lies on the other.
inline bool same_plane(const Plane& a, const Plane& b, double point_tol) {
    return std::abs(dot(a.normal, b.normal)) >= 1.0 - 1e-12 &&
           a.contains(b.point, point_tol);
}

/// Circle in 3D: points x with axis.(x - center) = 0 and |x - center| = radius.
struct Circle3D {
    Vec3 center;
    double radius;
    Vec3 axis;  // unit normal of the circle plane

    Circle3D(const Vec3& c, double r, const Vec3& ax) : center(c), radius(r), axis(ax) {
        if (!(r > 0.0)) throw std::invalid_argument("Circle3D: radius must be positive");
        const double m = norm(ax);
        if (!(m > 0.0)) throw std::invalid_argument("Circle3D: axis must be nonzero");
        axis = ax / m;
    }
};

enum class IntersectKind { Empty, Tangent, TwoPoints, WholeCircle };

/// Result of intersecting a plane with a circle. For the non-parallel case
/// the carrier line is q_i + t*line_dir and the roots are
/// q_i - (line_dir.offset -+ sqrt(discriminant)) * line_dir.
struct CircleIntersection {
    IntersectKind kind = IntersectKind::Empty;
    std::vector<Vec3> points;   // 0, 1, or 2 entries
    double discriminant = 0.0;  // length^2
    Vec3 line_point;            // q_i, projection of the plane anchor onto the line
    Vec3 line_dir;              // unit direction of the plane/plane intersection line
    Vec3 offset;                // delta_i = q_i - circle.center
};

/// Reflect a over the plane: a - 2 (N.(a-q)/|N|^2) N.
inline Vec3 reflect_point(const Plane& plane, const Vec3& a) {
    return a - 2.0 * dot(plane.normal, a - plane.point) * plane.normal;
}

/// Reflect a direction (plane through the origin with the same normal).
inline Vec3 reflect_direction(const Plane& plane, const Vec3& d) {
    return d - 2.0 * dot(plane.normal, d) * plane.normal;
}

/// Plane through three points with normal (m2-m1)x(m3-m1). Throws
/// ColinearError when the cross product vanishes relative to the squared
/// span of the inputs.
inline Plane plane_through_midjoints(const Vec3& m1, const Vec3& m2, const Vec3& m3) {
    const Vec3 n = cross(m2 - m1, m3 - m1);
    const double scale = std::max({distance(m1, m2), distance(m1, m3), distance(m2, m3)});
    // Coincident points pass the cross-product test trivially (both sides
    // vanish), so reject triangles that are tiny relative to their position.
    const double extent = std::max({norm(m1), norm(m2), norm(m3)});
    if (scale <= 1e-12 * (1.0 + extent) || norm(n) <= 1e-12 * scale * scale)
        throw ColinearError("midjoints are colinear; midplane undetermined");
    return Plane(n, m1);
}

/// Plane/circle intersection per the discriminant construction: the circle
/// plane and the query plane meet (generically) in a line q_i + t nu_hat;
/// points of the circle on that line solve a quadratic in t.
inline CircleIntersection intersect_plane_circle(const Plane& plane, const Circle3D& circle) {
    CircleIntersection out;
    const Vec3 nu = cross(plane.normal, circle.axis);
    const double nu_mag = norm(nu);

    // Parallel planes: either disjoint or the circle lies inside the plane.
    if (nu_mag <= 1e-12) {
        if (plane.contains(circle.center, 1e-9 * circle.radius)) {
            out.kind = IntersectKind::WholeCircle;
        } else {
            out.kind = IntersectKind::Empty;
            out.discriminant = -std::numeric_limits<double>::infinity();
        }
        return out;
    }

    const Vec3 nu_hat = nu / nu_mag;
    // Orthogonal projection of the plane anchor onto the intersection line:
    // q_i = q - [Ni.(q - B) / Ni.(N x nu_hat)] N x nu_hat.
    const Vec3 w = cross(plane.normal, nu_hat);
    const Vec3 q_i =
        plane.point - (dot(circle.axis, plane.point - circle.center) / dot(circle.axis, w)) * w;
    const Vec3 delta = q_i - circle.center;
    const double s = dot(nu_hat, delta);
    const double disc = s * s - (norm2(delta) - circle.radius * circle.radius);

    out.line_point = q_i;
    out.line_dir = nu_hat;
    out.offset = delta;
    out.discriminant = disc;

    const double band = 1e-9 * circle.radius * circle.radius;
    if (disc < -band) {
        out.kind = IntersectKind::Empty;
    } else if (disc <= band) {
        out.kind = IntersectKind::Tangent;
        out.points.push_back(q_i - s * nu_hat);
    } else {
        out.kind = IntersectKind::TwoPoints;
        const double root = std::sqrt(disc);
        out.points.push_back(q_i - (s + root) * nu_hat);
        out.points.push_back(q_i - (s - root) * nu_hat);
    }
    return out;
}

}  // namespace canfield
