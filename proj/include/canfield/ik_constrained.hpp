#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "canfield/geometry.hpp"
#include "canfield/ik_core.hpp"
#include "canfield/model.hpp"
#include "canfield/vec3.hpp"

namespace canfield {

struct InfinitePlungeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Prescribed point the midplane must contain.
struct PointConstraint {
    Vec3 q;
};

/// A midjoint immobilized at base angle `angle` on leg `leg` (0-based).
struct FrozenMidjoint {
    int leg;
    double angle;
    Vec3 position;  // midjoint_position(design, leg, angle)

    static FrozenMidjoint make(const JointDesign& d, int leg, double angle) {
        return {leg, angle, midjoint_position(d, leg, angle)};
    }
};

/// Plunge-distance constraint: the midplane crosses the z-axis at
/// c_J = p_d * z, or nowhere at all (infinite plunge, vertical midplane).
struct PlungeConstraint {
    bool infinite = false;
    double p_d = 0.0;

    static PlungeConstraint finite(double p) { return {false, p}; }
    static PlungeConstraint infinity() { return {true, 0.0}; }

    Vec3 center() const {
        if (infinite) throw InfinitePlungeError("infinite plunge has no center");
        return {0.0, 0.0, p_d};
    }
};

/// Planes solving a constrained pointing problem. `planes` holds the
/// discrete solutions (0-2); `family` is set instead when the target
/// admits a one-parameter family of midplanes. `k_points` are the
/// reflected targets on Z used to build each plane. `k_discriminant` is
/// the radicand of the K_z quadratic (negative means no sphere/axis
/// intersection at all).
struct ConstrainedSolution {
    std::vector<Plane> planes;
    std::optional<PlaneFamily> family;
    std::vector<Vec3> k_points;
    double k_discriminant = 0.0;

    bool empty() const { return planes.empty() && !family; }
};

namespace detail {

/// Membership of T in the closed half-axis Z_{<=0} (forward) or Z_{>=0}
/// (backward), within an absolute tolerance scaled by |T|.
inline bool on_signed_z_axis(const Vec3& t, PointingMode mode) {
    const double tol = 1e-12 * (1.0 + norm(t));
    if (norm(horizontal(t)) > tol) return false;
    return mode == PointingMode::Forward ? t.z <= tol : t.z >= -tol;
}

inline bool k_sign_ok(double kz, PointingMode mode) {
    return mode == PointingMode::Forward ? kz <= 0.0 : kz >= 0.0;
}

}  // namespace detail

/// Midplanes through q pointing at T. Off-axis targets give the 0-2 planes
/// whose reflected target K = q_z -+ sqrt(|q-T|^2 - q_x^2 - q_y^2) lands on
/// the mode's half of Z. Targets on that half-axis give the family of
/// planes through the line q-T, plus the horizontal plane through q when
/// q_z <= T_z/2 (inequalities flipped in backward mode).
inline ConstrainedSolution constrained_affine_midplanes(const PointConstraint& c, const Vec3& target,
                                                        PointingMode mode) {
    const Vec3& q = c.q;
    ConstrainedSolution out;
    const bool fwd = mode == PointingMode::Forward;

    if (detail::on_signed_z_axis(target, mode)) {
        // Any plane through both q and T works; when q != T that is the
        // pencil about the line q-T, otherwise every plane through q.
        if (distance(q, target) > 0.0)
            out.family = PlaneFamily::all_through_line(q, target - q);
        else
            out.family = PlaneFamily::all_through_line(q, kZHat);  // degenerate q = T on Z
        const bool horiz_ok = fwd ? q.z <= 0.5 * target.z : q.z >= 0.5 * target.z;
        if (horiz_ok) {
            out.planes.emplace_back(kZHat, q);
            out.k_points.push_back({0.0, 0.0, 2.0 * q.z - target.z});
        }
        return out;
    }

    const double disc = norm2(q - target) - (q.x * q.x + q.y * q.y);
    out.k_discriminant = disc;
    if (disc < 0.0) return out;  // sphere S_(q,T) misses the z-axis entirely

    const double root = std::sqrt(disc);
    for (const double kz : {q.z - root, q.z + root}) {
        if (!detail::k_sign_ok(kz, mode)) continue;
        const Vec3 k{0.0, 0.0, kz};
        if (distance(k, target) == 0.0) continue;  // T on Z handled above
        out.planes.emplace_back(target - k, q);
        out.k_points.push_back(k);
    }
    return out;
}

/// Midplane through q with distal normal n: the half-angle-stabilized plane
/// (z + n).(x - q) = 0, or the pencil of vertical planes through q when
/// n = -z.
inline PlaneFamily constrained_direction_midplane(const PointConstraint& c, Vec3 n,
                                                  PointingMode mode) {
    n = normalized(n);
    if (mode == PointingMode::Backward) n = -n;
    const auto normal = detail::half_angle_normal(n);
    if (!normal) return PlaneFamily::all_through_line(c.q, kZHat);
    return PlaneFamily::single(Plane(*normal, c.q));
}

/// Pointing goal for the frozen-midjoint solver.
struct PointingGoal {
    enum class Kind { AffineTarget, Direction };
    Kind kind;
    Vec3 value;

    static PointingGoal affine(const Vec3& t) { return {Kind::AffineTarget, t}; }
    static PointingGoal direction(const Vec3& n) { return {Kind::Direction, n}; }
};

/// Solve pointing with one leg frozen: candidate midplanes through the
/// frozen midjoint m*, then midplane -> midjoints for the other legs. Only
/// solutions whose frozen-leg intersection actually contains m* survive,
/// and their frozen entry is pinned to m* exactly. Degenerate plane
/// families are not enumerated; an empty result means the goal is
/// unreachable in this failure mode.
inline std::vector<std::pair<Plane, SolutionSet>> frozen_solve(const JointDesign& design,
                                                               const FrozenMidjoint& frozen,
                                                               const PointingGoal& goal,
                                                               PointingMode mode) {
    const PointConstraint q{frozen.position};
    std::vector<Plane> candidates;
    if (goal.kind == PointingGoal::Kind::AffineTarget) {
        const ConstrainedSolution sol = constrained_affine_midplanes(q, goal.value, mode);
        candidates = sol.planes;
    } else {
        const PlaneFamily fam = constrained_direction_midplane(q, goal.value, mode);
        if (fam.kind == PlaneFamily::Kind::Single) candidates.push_back(*fam.plane);
    }

    std::vector<std::pair<Plane, SolutionSet>> out;
    const double tol = 1e-9 * design.arm_lengths[frozen.leg];
    for (const Plane& plane : candidates) {
        SolutionSet set = solve_midjoints(design, plane);
        if (set.kind == SolutionSet::Kind::Empty) continue;
        if (set.kind == SolutionSet::Kind::Infinite) {
            // Frozen leg must still sit on the plane for this to be usable.
            if (plane.contains(frozen.position, tol)) out.emplace_back(plane, std::move(set));
            continue;
        }
        SolutionSet kept;
        kept.kind = SolutionSet::Kind::Finite;
        kept.factors = set.factors;
        for (auto triple : set.solutions) {
            if (distance(triple[frozen.leg], frozen.position) > tol) continue;
            triple[frozen.leg] = frozen.position;  // pin bit-exact
            kept.solutions.push_back(triple);
        }
        if (kept.solutions.empty()) continue;
        out.emplace_back(plane, std::move(kept));
    }
    return out;
}

/// Midplanes with plunge distance p_d pointing at T. Off-axis targets give
/// the planes whose reflected K = (p_d -+ |T - c_J|) z has the mode's sign;
/// targets on the mode's half-axis give the pencil about Z through c_J plus
/// the horizontal plane z = p_d when p_d <= T_z/2 (flipped for backward).
/// Infinite plunge forces the distal normal to -z: only targets at or below
/// the base plane (forward mode) are reachable, by a vertical midplane.
inline ConstrainedSolution plunge_affine_midplanes(const PlungeConstraint& p, const Vec3& target,
                                                   PointingMode mode) {
    ConstrainedSolution out;
    const bool fwd = mode == PointingMode::Forward;

    if (p.infinite) {
        // Vertical midplane: distal center lies in the base plane and the
        // pointing ray goes straight down (forward) / up (backward).
        if (fwd ? target.z > 0.0 : target.z < 0.0) return out;
        const Vec3 h = horizontal(target);
        if (norm(h) == 0.0)
            out.family = PlaneFamily::all_through_line(kZero, kZHat);
        else
            out.planes.emplace_back(h, 0.5 * h);
        return out;
    }

    const Vec3 c_j = p.center();
    if (detail::on_signed_z_axis(target, mode)) {
        // c_J and T are both on Z, so the pencil axis is Z itself.
        out.family = PlaneFamily::all_through_line(c_j, kZHat);
        const bool horiz_ok = fwd ? p.p_d <= 0.5 * target.z : p.p_d >= 0.5 * target.z;
        if (horiz_ok) {
            out.planes.emplace_back(kZHat, c_j);
            out.k_points.push_back({0.0, 0.0, 2.0 * p.p_d - target.z});
        }
        return out;
    }

    const double dist = distance(target, c_j);
    out.k_discriminant = dist * dist;
    for (const double kz : {p.p_d - dist, p.p_d + dist}) {
        if (!detail::k_sign_ok(kz, mode)) continue;
        const Vec3 k{0.0, 0.0, kz};
        if (distance(k, target) == 0.0) continue;
        out.planes.emplace_back(target - k, c_j);
        out.k_points.push_back(k);
    }
    return out;
}

/// Midplane with plunge distance p_d and distal normal n: the
/// half-angle-stabilized plane through c_J, or (n = -z) every plane
/// containing the z-axis.
inline PlaneFamily plunge_direction_midplane(const PlungeConstraint& p, Vec3 n,
                                             PointingMode mode) {
    if (p.infinite)
        throw InfinitePlungeError(
            "infinite plunge admits only the straight-down distal normal; no finite center");
    n = normalized(n);
    if (mode == PointingMode::Backward) n = -n;
    const auto normal = detail::half_angle_normal(n);
    if (!normal) return PlaneFamily::all_through_line(kZero, kZHat);
    return PlaneFamily::single(Plane(*normal, p.center()));
}

/// Locus of distal centers compatible with a frozen midjoint AND a finite
/// plunge constraint: the intersection of the spheres through the origin
/// centered at m* and c_J.
struct FrozenPlungeLocus {
    enum class Kind { Circle, Sphere, Empty };
    Kind kind;
    std::optional<Circle3D> circle;  // Circle
    Vec3 sphere_center;              // Sphere: m*, radius |m*|
    double sphere_radius = 0.0;
};

inline FrozenPlungeLocus frozen_plunge_compatibility(const FrozenMidjoint& frozen,
                                                     const PlungeConstraint& p) {
    const Vec3 c_j = p.center();
    const Vec3& m = frozen.position;
    const double d = distance(m, c_j);
    const double r1 = norm(m);
    if (d <= 1e-12 * (1.0 + r1)) {
        // m* on Z with matching plunge: the spheres coincide.
        return {FrozenPlungeLocus::Kind::Sphere, std::nullopt, m, r1};
    }
    const double r2 = std::abs(p.p_d);
    // Both spheres pass through the origin, so they always meet; h locates
    // the radical plane along the center line.
    const double h = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    const double rad2 = r1 * r1 - h * h;
    if (rad2 < 0.0) return {FrozenPlungeLocus::Kind::Empty, std::nullopt, {}, 0.0};
    const Vec3 axis = (c_j - m) / d;
    const double radius = std::sqrt(std::max(rad2, 0.0));
    if (radius <= 0.0) return {FrozenPlungeLocus::Kind::Empty, std::nullopt, {}, 0.0};
    return {FrozenPlungeLocus::Kind::Circle, Circle3D(m + h * axis, radius, axis), {}, 0.0};
}

}  // namespace canfield
