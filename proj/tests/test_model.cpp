#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "canfield/model.hpp"

using namespace canfield;

namespace {
const double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

std::mt19937_64 rng(20241105);
double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}
}  // namespace

TEST_CASE("standard design hinge layout") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    CHECK(distance(d.hinges[0], {1, 0, 0}) < 1e-12);
    CHECK(distance(d.hinges[1], {-0.5, kSqrt3 / 2, 0}) < 1e-12);
    CHECK(distance(d.hinges[2], {-0.5, -kSqrt3 / 2, 0}) < 1e-12);
    CHECK(distance(d.axes[0], kYHat) < 1e-12);
    // Pairwise hinge distances all equal b.
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(distance(d.hinges[i], d.hinges[(i + 1) % 3]) - kSqrt3) < 1e-12);
    // Midjoint at theta = 0 is B_i + l u_i.
    for (int i = 0; i < 3; ++i)
        CHECK(distance(midjoint_position(d, i, 0.0), d.hinges[i] + 2.0 * d.zero_dirs[i]) < 1e-12);
    CHECK_NOTHROW(d.validate());
    CHECK_THROWS(standard_design(-1.0, 2.0));
    CHECK_THROWS(standard_design(1.0, 0.0));
}

TEST_CASE("midjoint positions match the standard parametrization") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    CHECK(distance(midjoint_position(d, 0, kPi / 2), {1, 0, 2}) < 1e-12);
    CHECK(distance(midjoint_position(d, 0, 0.0), {3, 0, 0}) < 1e-12);
    CHECK(distance(midjoint_position(d, 1, kPi / 2), {-0.5, kSqrt3 / 2, 2}) < 1e-12);
    // theta = 2pi/3 puts m_1 on the z-axis: l cos(theta) + b/sqrt(3) = 0.
    CHECK(distance(midjoint_position(d, 0, 2.0 * kPi / 3), {0, 0, kSqrt3}) < 1e-12);
}

TEST_CASE("base_angle inverts midjoint_position") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    CHECK(base_angle(d, 0, {1, 0, 2}) == Catch::Approx(kPi / 2).margin(1e-12));
    CHECK(base_angle(d, 0, {3, 0, 0}) == Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(base_angle(d, 0, kZero), OffCircleError);

    for (int i = 0; i < 10000; ++i) {
        const int leg = i % 3;
        const double theta = uniform(-kPi, kPi);
        const double back = base_angle(d, leg, midjoint_position(d, leg, theta));
        CHECK(std::abs(BaseState::reduce(back - theta)) < 1e-12);
    }
}

TEST_CASE("forward kinematics of the symmetric configuration") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    const Configuration c = forward_kinematics(d, {{kPi / 2, kPi / 2, kPi / 2}});
    CHECK(std::abs(std::abs(c.midplane.normal.z) - 1.0) < 1e-12);
    CHECK(std::abs(c.midplane.signed_distance({0, 0, 2})) < 1e-12);
    CHECK(distance(c.distal_center, {0, 0, 4}) < 1e-12);
    CHECK(distance(c.distal_normal, kZHat) < 1e-12);
    for (int i = 0; i < 3; ++i)
        CHECK(distance(c.distal_hinges[i], d.hinges[i] + Vec3{0, 0, 4}) < 1e-12);
}

TEST_CASE("equal angles give a horizontal midplane") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    for (double theta : {0.3, 1.0, 1.4, 2.0}) {
        const Configuration c = forward_kinematics(d, {{theta, theta, theta}});
        CHECK(distance(c.distal_normal, kZHat) < 1e-12);
        CHECK(distance(c.distal_center, {0, 0, 4.0 * std::sin(theta)}) < 1e-11);
    }
}

TEST_CASE("FK singularity raises ColinearError") {
    // theta = (2pi/3, -pi/3?) -- instead construct colinear midjoints directly:
    // all three midjoints on the z=0 base circle line... use equal radius crossing.
    const JointDesign d = standard_design(kSqrt3, 2.0);
    // With theta_i chosen so every midjoint lands on the z-axis-free line is hard
    // analytically; instead check the underlying guard through the plane builder.
    CHECK_THROWS_AS(plane_through_midjoints({0, 0, 1}, {0, 0, 2}, {0, 0, 3}), ColinearError);
    (void)d;
}

TEST_CASE("Prop 1 invariants on random states") {
    for (int trial = 0; trial < 500; ++trial) {
        const JointDesign d = standard_design(uniform(0.5, 3.0), uniform(0.5, 3.0));
        BaseState s{{uniform(-kPi, kPi), uniform(-kPi, kPi), uniform(-kPi, kPi)}};
        std::optional<Configuration> cfg;
        try {
            cfg = forward_kinematics(d, s);
        } catch (const ColinearError&) {
            continue;
        }
        const Configuration& c = *cfg;
        // Reflection isometry: distal hinge distances equal base hinge distances.
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3;
            const double db = distance(d.hinges[i], d.hinges[j]);
            const double dd = distance(c.distal_hinges[i], c.distal_hinges[j]);
            CHECK(std::abs(db - dd) < 1e-12 * (1.0 + db));
        }
        // Orientation: N_D from reflection equals the distal-hinge cross product.
        const Vec3 n2 = normalized(
            cross(c.distal_hinges[1] - c.distal_hinges[0], c.distal_hinges[2] - c.distal_hinges[0]));
        CHECK(distance(c.distal_normal, n2) < 1e-9);
        // Midplane symmetry recovers base features from distal features.
        CHECK(distance(reflect_point(c.midplane, c.distal_center), kZero) < 1e-12);
        for (int i = 0; i < 3; ++i) {
            CHECK(distance(reflect_point(c.midplane, c.distal_hinges[i]), d.hinges[i]) < 1e-12);
            CHECK(std::abs(dot(d.axes[i], c.midjoints[i] - d.hinges[i])) <
                  1e-9 * d.arm_lengths[i]);
        }
    }
}

TEST_CASE("pointing test examples") {
    const JointDesign d = standard_design(kSqrt3, 2.0);
    const Configuration c = forward_kinematics(d, {{kPi / 2, kPi / 2, kPi / 2}});
    const auto tol = [](const Vec3& t) { return default_pointing_tol(t); };
    CHECK(points_at(c, {0, 0, 10}, PointingMode::Forward, tol({0, 0, 10})));
    CHECK_FALSE(points_at(c, {0, 0, 1}, PointingMode::Forward, tol({0, 0, 1})));
    CHECK(points_at(c, {0, 0, 1}, PointingMode::Backward, tol({0, 0, 1})));
    // T = D_c: boundary, true in both modes.
    CHECK(points_at(c, c.distal_center, PointingMode::Forward, tol(c.distal_center)));
    CHECK(points_at(c, c.distal_center, PointingMode::Backward, tol(c.distal_center)));
}

TEST_CASE("ray test agrees with the reflection test") {
    for (int trial = 0; trial < 10000; ++trial) {
        const JointDesign d = standard_design(uniform(0.5, 2.5), uniform(0.5, 2.5));
        BaseState s{{uniform(-kPi, kPi), uniform(-kPi, kPi), uniform(-kPi, kPi)}};
        std::optional<Configuration> cfg;
        try {
            cfg = forward_kinematics(d, s);
        } catch (const ColinearError&) {
            continue;
        }
        const Configuration& c = *cfg;
        Vec3 t{uniform(-5, 5), uniform(-5, 5), uniform(-5, 5)};
        // Half the trials aim exactly along the pointing axis so both
        // branches of the equivalence get exercised.
        if (trial % 2 == 0) t = c.distal_center + uniform(-4, 4) * c.distal_normal;
        const double tol = default_pointing_tol(t);
        for (PointingMode mode : {PointingMode::Forward, PointingMode::Backward}) {
            CHECK(points_at(c, t, mode, tol) == points_at_by_reflection(c, t, mode, tol));
        }
    }
}
