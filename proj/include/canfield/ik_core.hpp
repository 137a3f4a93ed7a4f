#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "canfield/geometry.hpp"
#include "canfield/model.hpp"
#include "canfield/vec3.hpp"

namespace canfield {

struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Either a single midplane or one of the degenerate one-parameter families
/// the midplane theorems produce.
struct PlaneFamily {
    enum class Kind { Single, AllThroughOrigin, AllParallelToZ, AllThroughLine, AllOrthogonalTo };

    Kind kind;
    std::optional<Plane> plane;  // Single
    Vec3 point;                  // AllThroughLine: a point on the line
    Vec3 direction;              // AllThroughLine / AllOrthogonalTo: unit vector

    static PlaneFamily single(const Plane& p) { return {Kind::Single, p, {}, {}}; }
    static PlaneFamily all_through_origin() { return {Kind::AllThroughOrigin, {}, {}, {}}; }
    static PlaneFamily all_parallel_to_z() { return {Kind::AllParallelToZ, {}, {}, {}}; }
    static PlaneFamily all_through_line(const Vec3& pt, const Vec3& dir) {
        return {Kind::AllThroughLine, {}, pt, normalized(dir)};
    }
    static PlaneFamily all_orthogonal_to(const Vec3& dir) {
        return {Kind::AllOrthogonalTo, {}, {}, normalized(dir)};
    }
};

/// Solutions of midplane -> midjoints. Finite carries 1, 2, 4, or 8 triples,
/// ordered by sign tuple (-,-,-) ... (+,+,+) where '-' is the
/// q_i - (nu.delta + sqrt(D)) nu root. Infinite means the plane equals one
/// midcircle plane while the other legs still have discrete intersections.
struct SolutionSet {
    enum class Kind { Empty, Finite, Infinite };

    Kind kind = Kind::Empty;
    std::vector<std::array<Vec3, 3>> solutions;        // Finite
    std::array<CircleIntersection, 3> factors{};       // per-leg intersections
    int free_leg = -1;                                  // Infinite: the WholeCircle leg
};

/// Distal center -> midplane. D_c != 0 gives the plane normal to D_c
/// through D_c/2; D_c = 0 admits every plane through the origin.
inline PlaneFamily midplane_from_distal_center(const Vec3& distal_center) {
    if (norm(distal_center) == 0.0) return PlaneFamily::all_through_origin();
    return PlaneFamily::single(Plane(distal_center, 0.5 * distal_center));
}

/// Affine target -> midplane given the reflected point K on the z-axis
/// (K_z <= 0 for forward pointing, >= 0 for backward): the orthogonal
/// bisector of segment T-K.
inline Plane midplane_for_affine(const Vec3& target, const Vec3& k, PointingMode mode) {
    if (std::abs(k.x) > 0.0 || std::abs(k.y) > 0.0)
        throw std::invalid_argument("midplane_for_affine: K must lie on the z-axis");
    if (mode == PointingMode::Forward ? k.z > 0.0 : k.z < 0.0)
        throw std::invalid_argument("midplane_for_affine: K_z has the wrong sign for the mode");
    const Vec3 n = target - k;
    if (norm(n) == 0.0)
        throw DegenerateError("midplane_for_affine: T = K, infinitely many planes through T");
    return Plane(n, 0.5 * (target + k));
}

namespace detail {
/// Half-angle-stable midplane normal for distal normal n_hat: with
/// n_hat = sin(t) rho + cos(t) z the midplane normal is
/// sin(t/2) rho + cos(t/2) z. Returns nullopt when n_hat = -z (no radial
/// direction to use).
inline std::optional<Vec3> half_angle_normal(const Vec3& n_hat) {
    const Vec3 h = horizontal(n_hat);
    const double hmag = norm(h);
    if (hmag <= 1e-14) {
        if (n_hat.z < 0.0) return std::nullopt;
        return kZHat;
    }
    const Vec3 rho = h / hmag;
    const double theta = std::atan2(hmag, n_hat.z);
    return std::sin(0.5 * theta) * rho + std::cos(0.5 * theta) * kZHat;
}
}  // namespace detail

/// Distal direction -> the family of midplanes realizing it: all planes
/// orthogonal to the half-angle vector, or all planes parallel to Z when the
/// requested normal is straight down. Backward mode solves for -n.
inline PlaneFamily midplane_for_direction(Vec3 n, PointingMode mode) {
    n = normalized(n);
    if (mode == PointingMode::Backward) n = -n;
    const auto normal = detail::half_angle_normal(n);
    if (!normal) return PlaneFamily::all_parallel_to_z();
    return PlaneFamily::all_orthogonal_to(*normal);
}

/// Midplane -> all compatible midjoint triples: the Cartesian product of the
/// three plane/midcircle intersections.
inline SolutionSet solve_midjoints(const JointDesign& design, const Plane& plane) {
    SolutionSet out;
    int whole_circle_leg = -1;
    for (int i = 0; i < 3; ++i) {
        out.factors[i] = intersect_plane_circle(plane, design.midcircle(i));
        if (out.factors[i].kind == IntersectKind::Empty) {
            out.kind = SolutionSet::Kind::Empty;
            return out;
        }
        if (out.factors[i].kind == IntersectKind::WholeCircle) whole_circle_leg = i;
    }
    if (whole_circle_leg >= 0) {
        out.kind = SolutionSet::Kind::Infinite;
        out.free_leg = whole_circle_leg;
        return out;
    }
    out.kind = SolutionSet::Kind::Finite;
    const auto& f = out.factors;
    for (const Vec3& m1 : f[0].points)
        for (const Vec3& m2 : f[1].points)
            for (const Vec3& m3 : f[2].points) out.solutions.push_back({m1, m2, m3});
    return out;
}

/// Finite solutions mapped through base_angle. Empty/Infinite have no
/// discrete angle representation and yield an empty list.
inline std::vector<BaseState> solve_base_states(const JointDesign& design, const Plane& plane) {
    const SolutionSet set = solve_midjoints(design, plane);
    std::vector<BaseState> states;
    if (set.kind != SolutionSet::Kind::Finite) return states;
    states.reserve(set.solutions.size());
    for (const auto& triple : set.solutions) {
        BaseState s{};
        for (int i = 0; i < 3; ++i) s.angles[i] = base_angle(design, i, triple[i]);
        states.push_back(s);
    }
    return states;
}

}  // namespace canfield
