#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "canfield/geometry.hpp"
#include "canfield/model.hpp"
#include "canfield/vec3.hpp"

namespace canfield {
namespace oracle {

/// Brute-force plane/midcircle intersection: scan the base angle over a
/// dense grid, bisect across sign changes of the plane residual, and also
/// report residual minima below tol (tangencies without a sign change).
/// Intentionally built from the midcircle parametrization only, sharing no
/// code with the analytic intersection.
inline std::vector<Vec3> sample_circle_solutions(const JointDesign& design, const Plane& plane,
                                                 int leg, int n_samples, double tol) {
    const auto residual = [&](double theta) {
        return plane.signed_distance(midjoint_position(design, leg, theta));
    };
    const double two_pi = 2.0 * std::numbers::pi;
    const double step = two_pi / n_samples;

    std::vector<Vec3> roots;
    const auto push_root = [&](double theta) {
        const Vec3 m = midjoint_position(design, leg, theta);
        for (const Vec3& r : roots)
            if (distance(r, m) <= 1e-3 * design.arm_lengths[leg]) return;
        roots.push_back(m);
    };

    double prev_theta = -std::numbers::pi;
    double prev_f = residual(prev_theta);
    for (int i = 1; i <= n_samples; ++i) {
        const double theta = -std::numbers::pi + i * step;
        const double f = residual(theta);
        if (prev_f == 0.0) {
            push_root(prev_theta);
        } else if ((prev_f < 0.0) != (f < 0.0)) {
            // Bisect the bracketed crossing.
            double lo = prev_theta, hi = theta, flo = prev_f;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = residual(mid);
                if (fm == 0.0) { lo = hi = mid; break; }
                if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
            }
            push_root(0.5 * (lo + hi));
        } else if (std::abs(prev_f) <= tol && i >= 2) {
            // Local minimum of |residual|: tangency candidate.
            const double before = residual(prev_theta - step);
            if (std::abs(prev_f) <= std::abs(before) && std::abs(prev_f) <= std::abs(f)) {
                // Refine the minimum by ternary search.
                double lo = prev_theta - step, hi = theta;
                for (int it = 0; it < 100; ++it) {
                    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                    if (std::abs(residual(m1)) <= std::abs(residual(m2))) hi = m2; else lo = m1;
                }
                const double theta_min = 0.5 * (lo + hi);
                if (std::abs(residual(theta_min)) <= tol) push_root(theta_min);
            }
        }
        prev_theta = theta;
        prev_f = f;
    }
    return roots;
}

/// FK followed by the ray form of the pointing test. Deliberately the ray
/// test (not the reflection test) so the two characterizations check each
/// other.
inline bool verify_pointing(const JointDesign& design, const BaseState& state, const Vec3& target,
                            PointingMode mode, double tol) {
    const Configuration c = forward_kinematics(design, state);
    return points_at(c, target, mode, tol);
}

/// Locus membership from first principles: build the distal-center midplane
/// (normal x through x/2), reflect the target, and test whether it lands on
/// the z-axis.
inline bool locus_membership_bruteforce(const Vec3& target, const Vec3& x, double tol) {
    const Plane midplane(x, 0.5 * x);
    const Vec3 r = reflect_point(midplane, target);
    return norm(horizontal(r)) <= tol;
}

}  // namespace oracle
}  // namespace canfield
