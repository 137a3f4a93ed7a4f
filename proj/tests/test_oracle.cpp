#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "canfield/ik_core.hpp"
#include "canfield/loci.hpp"
#include "canfield/oracle.hpp"

using namespace canfield;

namespace {
const double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

std::mt19937_64 rng(424243);
double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}
}  // namespace

TEST_CASE("circle sampler: worked plane heights") {
    const JointDesign d = standard_design(kSqrt3, 2.0);

    SECTION("z = 1 crosses midcircle 1 twice") {
        const Plane plane(kZHat, {0, 0, 1});
        const auto roots = oracle::sample_circle_solutions(d, plane, 0, 4096, 1e-10);
        REQUIRE(roots.size() == 2);
        // sin(theta) = 1/2: midjoints (1 +- sqrt(3), 0, 1).
        double lo = norm(roots[0]) < norm(roots[1]) ? 0 : 1;
        CHECK(distance(roots[static_cast<size_t>(lo)], {1.0 - kSqrt3, 0, 1}) < 1e-6);
        CHECK(distance(roots[static_cast<size_t>(1 - lo)], {1.0 + kSqrt3, 0, 1}) < 1e-6);
    }
    SECTION("z = 3 misses every midcircle") {
        const Plane plane(kZHat, {0, 0, 3});
        for (int leg = 0; leg < 3; ++leg)
            CHECK(oracle::sample_circle_solutions(d, plane, leg, 4096, 1e-10).empty());
    }
    SECTION("z = 2 is tangent at the top of the circle") {
        const Plane plane(kZHat, {0, 0, 2});
        const auto roots = oracle::sample_circle_solutions(d, plane, 0, 4096, 1e-6);
        REQUIRE(roots.size() == 1);
        CHECK(distance(roots[0], {1, 0, 2}) < 1e-3);
    }
}

TEST_CASE("circle sampler agrees with the analytic intersection") {
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
        const JointDesign d = standard_design(uniform(0.5, 3.0), uniform(0.5, 3.0));
        Vec3 n{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
        if (norm(n) < 1e-3) continue;
        const Plane plane(n, {uniform(-2, 2), uniform(-2, 2), uniform(-2, 2)});
        for (int leg = 0; leg < 3; ++leg) {
            const auto analytic = intersect_plane_circle(plane, d.midcircle(leg));
            if (analytic.kind == IntersectKind::WholeCircle) continue;
            const double r = d.arm_lengths[leg];
            if (std::abs(analytic.discriminant) < 1e-3 * r * r) continue;  // near-tangent
            const auto sampled = oracle::sample_circle_solutions(d, plane, leg, 2048, 1e-10);
            REQUIRE(sampled.size() == analytic.points.size());
            for (const Vec3& p : analytic.points) {
                double best = 1e300;
                for (const Vec3& s : sampled) best = std::min(best, distance(p, s));
                CHECK(best < 1e-6 * r);
            }
            ++compared;
        }
    }
    CHECK(compared >= 900);
}

TEST_CASE("verify_pointing: worked example") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    // Symmetric state: all midjoints at z = sqrt(3) apex height / 2... use
    // equal angles pi/3, midjoints at z = l sin(pi/3) = sqrt(3), radius 2.
    const BaseState s{{kPi / 3, kPi / 3, kPi / 3}};
    const Configuration c = forward_kinematics(d, s);
    CHECK(distance(c.distal_normal, kZHat) < 1e-12);
    // Points straight up at anything on the axis above the distal center.
    CHECK(oracle::verify_pointing(d, s, {0, 0, 100}, PointingMode::Forward, 1e-9));
    CHECK(!oracle::verify_pointing(d, s, {5, 0, 0}, PointingMode::Forward, 1e-9));
    CHECK(oracle::verify_pointing(d, s, c.distal_center - Vec3{0, 0, 7}, PointingMode::Backward,
                                  1e-9));
}

TEST_CASE("locus membership oracle agrees with the residual") {
    int agreements = 0;
    for (int i = 0; i < 3000; ++i) {
        const Vec3 t{uniform(-4, 4), uniform(-4, 4), uniform(-4, 4)};
        if (norm(horizontal(t)) < 1e-2) continue;
        const RadialFrame frame = RadialFrame::from(t);
        const double rho = uniform(-5, 5), z = uniform(-5, 5);
        const Vec3 x = frame.embed(rho, z);
        if (norm(x) < 1e-2) continue;
        const double res = affine_locus_residual(t, frame, rho, z);
        const double scale = std::pow(std::max(norm(t), norm(x)), 3);
        if (std::abs(res) < 1e-4 * scale) continue;  // too close to the curve to classify
        // Residual nonzero => the reflected target misses the z-axis.
        CHECK(!oracle::locus_membership_bruteforce(t, x, 1e-6 * (1.0 + norm(t))));
        ++agreements;
    }
    CHECK(agreements >= 2000);

    // And points constructed on the locus are accepted.
    for (int i = 0; i < 500; ++i) {
        const Vec3 t{uniform(-4, 4), uniform(-4, 4), uniform(-4, 4)};
        if (norm(horizontal(t)) < 1e-2 || norm(t) < 1e-2) continue;
        const LocusDescriptor loc = affine_locus(t);
        const double u = uniform(-3, 3) * norm(t);
        const Vec3 x = loc.parametrize(u);
        if (norm(x) < 1e-3) continue;
        CHECK(oracle::locus_membership_bruteforce(t, x, 1e-6 * (1.0 + norm(t))));
    }
}

TEST_CASE("midplane solver cross-checked against the sampler end to end") {
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const JointDesign d = standard_design(uniform(0.8, 2.5), uniform(0.8, 2.5));
        Vec3 n{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
        if (norm(n) < 1e-3) continue;
        const Plane plane(n, {uniform(-1.5, 1.5), uniform(-1.5, 1.5), uniform(-1.5, 1.5)});
        const SolutionSet set = solve_midjoints(d, plane);
        if (set.kind == SolutionSet::Kind::Infinite) continue;
        bool near_tangent = false;
        size_t expect = 1;
        for (int leg = 0; leg < 3; ++leg) {
            const auto isect = intersect_plane_circle(plane, d.midcircle(leg));
            const double r = d.arm_lengths[leg];
            if (isect.kind != IntersectKind::WholeCircle &&
                std::abs(isect.discriminant) < 1e-3 * r * r)
                near_tangent = true;
            expect *= isect.points.size();
            if (isect.kind == IntersectKind::Empty) expect = 0;
        }
        if (near_tangent) continue;
        size_t sampled_count = 1;
        for (int leg = 0; leg < 3; ++leg) {
            const auto roots = oracle::sample_circle_solutions(d, plane, leg, 2048, 1e-10);
            sampled_count *= roots.size();
        }
        const size_t analytic_count =
            set.kind == SolutionSet::Kind::Empty ? 0 : set.solutions.size();
        CHECK(analytic_count == expect);
        CHECK(analytic_count == sampled_count);
        ++checked;
    }
    CHECK(checked >= 150);
}
