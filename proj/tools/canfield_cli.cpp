// Batch CLI over the Canfield joint solvers. Prints one JSON document (or
// CSV/PGM for maps) per invocation; numbers carry 17 significant digits so
// identical requests produce byte-identical output.
//
// Exit codes: 0 success, 1 malformed input, 2 validly infeasible query,
// 3 internal verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canfield/geometry.hpp"
#include "canfield/ik_constrained.hpp"
#include "canfield/ik_core.hpp"
#include "canfield/io.hpp"
#include "canfield/loci.hpp"
#include "canfield/model.hpp"
#include "canfield/oracle.hpp"
#include "canfield/vec3.hpp"

using namespace canfield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Vec3 parse_vec3(const std::string& s) {
    Vec3 v;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
        throw BadInput("expected x,y,z but got '" + s + "'");
    return v;
}

/// --design std:b=...,l=... or @file.json
JointDesign parse_design(const std::string& s) {
    if (s.rfind("std:", 0) == 0) {
        double b = 0, l = 0;
        if (std::sscanf(s.c_str(), "std:b=%lf,l=%lf", &b, &l) != 2)
            throw BadInput("expected std:b=...,l=... but got '" + s + "'");
        return standard_design(b, l);
    }
    if (!s.empty() && s[0] == '@') {
        std::ifstream f(s.substr(1));
        if (!f) throw BadInput("cannot open design file '" + s.substr(1) + "'");
        nlohmann::json j;
        f >> j;
        return io::design_from_json(j);
    }
    throw BadInput("design must be std:b=...,l=... or @file.json");
}

/// --frozen leg=1,angle-deg=120 (legs are 1-based at the CLI boundary)
FrozenMidjoint parse_frozen(const JointDesign& d, const std::string& s) {
    int leg = 0;
    double angle_deg = 0;
    if (std::sscanf(s.c_str(), "leg=%d,angle-deg=%lf", &leg, &angle_deg) != 2)
        throw BadInput("expected leg=N,angle-deg=A but got '" + s + "'");
    if (leg < 1 || leg > 3) throw BadInput("leg index must be 1, 2, or 3");
    return FrozenMidjoint::make(d, leg - 1, angle_deg / io::kDegPerRad);
}

PlungeConstraint parse_plunge(const std::string& s) {
    if (s == "infinity" || s == "inf") return PlungeConstraint::infinity();
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw BadInput("");
        return PlungeConstraint::finite(v);
    } catch (const std::exception&) {
        throw BadInput("plunge must be a number or 'infinity'");
    }
}

PointingMode parse_mode(const std::string& s) {
    if (s == "forward") return PointingMode::Forward;
    if (s == "backward") return PointingMode::Backward;
    throw BadInput("mode must be forward or backward");
}

double tangency_eps(const JointDesign& d) {
    if (const char* env = std::getenv("CANFIELD_TANGENCY_EPS")) return std::atof(env);
    return default_tangency_eps(d);
}

double design_scale(const JointDesign& d) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s = std::max(s, norm(d.hinges[i]) + d.arm_lengths[i]);
    return s;
}

/// Re-run FK on every finite solution and require the stated goal to hold.
/// A failure here is an internal error, never emitted silently.
void verify_solutions(const JointDesign& d, const SolutionSet& set,
                      const std::optional<Vec3>& target, const std::optional<Vec3>& dir,
                      PointingMode mode) {
    if (set.kind != SolutionSet::Kind::Finite) return;
    for (const auto& triple : set.solutions) {
        std::optional<Configuration> maybe;
        try {
            maybe = configuration_from_midjoints(d, triple);
        } catch (const ColinearError&) {
            // Degenerate triple (coincident/colinear midjoints): the midplane
            // is undetermined, so there is no configuration to verify.
            continue;
        }
        const Configuration& c = *maybe;
        if (target && !points_at(c, *target, mode, default_pointing_tol(*target)))
            throw VerificationError("verification failed: solution does not point at target");
        if (dir) {
            Vec3 want = normalized(*dir);
            if (mode == PointingMode::Backward) want = -want;
            if (distance(c.distal_normal, want) > 1e-9)
                throw VerificationError("verification failed: distal normal mismatch");
        }
    }
}

std::string planes_with_solutions_json(const JointDesign& d, const std::vector<Plane>& planes,
                                       const std::vector<Vec3>& k_points,
                                       const std::optional<Vec3>& target,
                                       const std::optional<Vec3>& dir, PointingMode mode,
                                       bool& any_finite) {
    std::string s = "[";
    for (size_t i = 0; i < planes.size(); ++i) {
        if (i) s += ",";
        const SolutionSet set = solve_midjoints(d, planes[i]);
        verify_solutions(d, set, target, dir, mode);
        if (set.kind == SolutionSet::Kind::Finite && !set.solutions.empty()) any_finite = true;
        if (set.kind == SolutionSet::Kind::Infinite) any_finite = true;
        s += "{\"plane\":" + io::plane_json(planes[i]);
        if (i < k_points.size()) s += ",\"k\":" + io::fmt(k_points[i]);
        s += ",\"solutions\":" + io::solution_set_json(d, set) + "}";
    }
    return s + "]";
}

int run(int argc, char** argv) {
    CLI::App app{"Canfield joint kinematics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global options (--design, --mode) may follow the subcommand

    std::string design_str, mode_str = "forward";
    app.add_option("--design", design_str, "std:b=...,l=... or @file.json");
    app.add_option("--mode", mode_str, "forward|backward")->check(CLI::IsMember({"forward", "backward"}));

    std::string angles_str, dc_str, target_str, dir_str, point_str, frozen_str, plunge_str;
    std::string grid_str = "72x37", out_path, format = "csv";
    double k_z = 0.0;
    bool have_k = false;
    int samples = 0;

    auto* fk = app.add_subcommand("fk", "forward kinematics from base angles");
    fk->add_option("--angles-deg", angles_str, "theta1,theta2,theta3 in degrees")->required();

    auto* ik_dc = app.add_subcommand("ik-dc", "inverse kinematics from a distal center");
    ik_dc->add_option("--dc", dc_str, "distal center x,y,z")->required();

    auto* ik_affine = app.add_subcommand("ik-affine", "point at a target, explicit K");
    ik_affine->add_option("--target", target_str, "target x,y,z")->required();
    auto* k_opt = ik_affine->add_option("--k", k_z, "z-coordinate of the reflected target K on Z");

    auto* ik_azel = app.add_subcommand("ik-azel", "realize a distal normal direction");
    ik_azel->add_option("--dir", dir_str, "distal normal x,y,z")->required();
    ik_azel->add_option("--plunge", plunge_str, "plunge distance or 'infinity'");
    ik_azel->add_option("--point", point_str, "constraint point x,y,z");

    auto* ik_frozen = app.add_subcommand("ik-frozen", "pointing with a frozen midjoint");
    ik_frozen->add_option("--frozen", frozen_str, "leg=N,angle-deg=A")->required();
    ik_frozen->add_option("--target", target_str, "target x,y,z");
    ik_frozen->add_option("--dir", dir_str, "distal normal x,y,z");

    auto* ik_plunge = app.add_subcommand("ik-plunge", "pointing with a plunge constraint");
    ik_plunge->add_option("--plunge", plunge_str, "plunge distance or 'infinity'")->required();
    ik_plunge->add_option("--target", target_str, "target x,y,z");
    ik_plunge->add_option("--dir", dir_str, "distal normal x,y,z");

    auto* locus_affine = app.add_subcommand("locus-affine", "affine pointing locus of a target");
    locus_affine->add_option("--target", target_str, "target x,y,z")->required();
    locus_affine->add_option("--samples", samples, "emit r(t) samples over t in [-|T|, |T|]");

    auto* locus_azel = app.add_subcommand("locus-azel", "Az/El pointing locus of a direction");
    locus_azel->add_option("--dir", dir_str, "direction x,y,z")->required();

    auto* field = app.add_subcommand("field", "distal normal field at a point");
    field->add_option("--point", point_str, "distal center x,y,z")->required();

    auto* fmap = app.add_subcommand("feasibility-map", "spherical feasibility sweep");
    fmap->add_option("--frozen", frozen_str, "leg=N,angle-deg=A");
    fmap->add_option("--plunge", plunge_str, "finite plunge distance");
    fmap->add_option("--point", point_str, "constraint point x,y,z");
    fmap->add_option("--grid", grid_str, "AZxPOL, e.g. 72x37");
    fmap->add_option("--out", out_path, "output file for the map body");
    fmap->add_option("--format", format, "csv|pgm")->check(CLI::IsMember({"csv", "pgm"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    have_k = k_opt->count() > 0;
    const PointingMode mode = parse_mode(mode_str);
    std::optional<JointDesign> design;
    if (!design_str.empty()) design = parse_design(design_str);
    const auto need_design = [&]() -> const JointDesign& {
        if (!design) throw BadInput("--design is required for this command");
        return *design;
    };

    if (fk->parsed()) {
        const JointDesign& d = need_design();
        const Vec3 a = parse_vec3(angles_str);
        BaseState s{{a.x / io::kDegPerRad, a.y / io::kDegPerRad, a.z / io::kDegPerRad}};
        s.normalize();
        const Configuration c = forward_kinematics(d, s);
        std::cout << io::configuration_json(c) << "\n";
        return kExitOk;
    }

    if (ik_dc->parsed()) {
        const JointDesign& d = need_design();
        const Vec3 dc = parse_vec3(dc_str);
        const PlaneFamily fam = midplane_from_distal_center(dc);
        if (fam.kind != PlaneFamily::Kind::Single) {
            std::cout << "{\"family\":" << io::family_json(fam) << "}\n";
            return kExitOk;
        }
        const SolutionSet set = solve_midjoints(d, *fam.plane);
        // Verify each solution reproduces the requested distal center.
        if (set.kind == SolutionSet::Kind::Finite) {
            for (const auto& triple : set.solutions) {
                try {
                    const Configuration c = configuration_from_midjoints(d, triple);
                    if (distance(c.distal_center, dc) > 1e-9 * (1.0 + norm(dc)))
                        throw VerificationError("verification failed: distal center mismatch");
                } catch (const ColinearError&) {
                }
            }
        }
        std::cout << "{\"plane\":" << io::plane_json(*fam.plane)
                  << ",\"solutions\":" << io::solution_set_json(d, set) << "}\n";
        return set.kind == SolutionSet::Kind::Empty ? kExitInfeasible : kExitOk;
    }

    if (ik_affine->parsed()) {
        const JointDesign& d = need_design();
        const Vec3 target = parse_vec3(target_str);
        if (!have_k) throw BadInput("--k is required (z-coordinate of the reflected target)");
        const Plane plane = midplane_for_affine(target, {0.0, 0.0, k_z}, mode);
        const SolutionSet set = solve_midjoints(d, plane);
        verify_solutions(d, set, target, std::nullopt, mode);
        std::cout << "{\"plane\":" << io::plane_json(plane)
                  << ",\"solutions\":" << io::solution_set_json(d, set) << "}\n";
        return set.kind == SolutionSet::Kind::Empty ? kExitInfeasible : kExitOk;
    }

    if (ik_azel->parsed()) {
        const JointDesign& d = need_design();
        const Vec3 dir = parse_vec3(dir_str);
        PlaneFamily fam = PlaneFamily::all_parallel_to_z();
        if (!plunge_str.empty())
            fam = plunge_direction_midplane(parse_plunge(plunge_str), dir, mode);
        else if (!point_str.empty())
            fam = constrained_direction_midplane({parse_vec3(point_str)}, dir, mode);
        else {
            fam = midplane_for_direction(dir, mode);
            std::cout << "{\"family\":" << io::family_json(fam) << "}\n";
            return kExitOk;
        }
        if (fam.kind != PlaneFamily::Kind::Single) {
            std::cout << "{\"family\":" << io::family_json(fam) << "}\n";
            return kExitOk;
        }
        const SolutionSet set = solve_midjoints(d, *fam.plane);
        verify_solutions(d, set, std::nullopt, dir, mode);
        std::cout << "{\"plane\":" << io::plane_json(*fam.plane)
                  << ",\"solutions\":" << io::solution_set_json(d, set) << "}\n";
        return set.kind == SolutionSet::Kind::Empty ? kExitInfeasible : kExitOk;
    }

    if (ik_frozen->parsed()) {
        const JointDesign& d = need_design();
        const FrozenMidjoint frozen = parse_frozen(d, frozen_str);
        if (target_str.empty() == dir_str.empty())
            throw BadInput("exactly one of --target or --dir is required");
        const PointingGoal goal = target_str.empty()
                                      ? PointingGoal::direction(parse_vec3(dir_str))
                                      : PointingGoal::affine(parse_vec3(target_str));
        const auto results = frozen_solve(d, frozen, goal, mode);
        std::string s = "{\"frozen\":{\"leg\":" + std::to_string(frozen.leg + 1) +
                        ",\"angle_deg\":" + io::fmt(frozen.angle * io::kDegPerRad) +
                        ",\"midjoint\":" + io::fmt(frozen.position) + "},\"results\":[";
        std::optional<Vec3> target, dir;
        if (goal.kind == PointingGoal::Kind::AffineTarget) target = goal.value; else dir = goal.value;
        for (size_t i = 0; i < results.size(); ++i) {
            if (i) s += ",";
            verify_solutions(d, results[i].second, target, dir, mode);
            s += "{\"plane\":" + io::plane_json(results[i].first) +
                 ",\"solutions\":" + io::solution_set_json(d, results[i].second) + "}";
        }
        s += "]}";
        std::cout << s << "\n";
        return results.empty() ? kExitInfeasible : kExitOk;
    }

    if (ik_plunge->parsed()) {
        const JointDesign& d = need_design();
        const PlungeConstraint p = parse_plunge(plunge_str);
        if (target_str.empty() == dir_str.empty())
            throw BadInput("exactly one of --target or --dir is required");
        if (!dir_str.empty()) {
            const Vec3 dir = parse_vec3(dir_str);
            const PlaneFamily fam = plunge_direction_midplane(p, dir, mode);
            if (fam.kind != PlaneFamily::Kind::Single) {
                std::cout << "{\"family\":" << io::family_json(fam) << "}\n";
                return kExitOk;
            }
            const SolutionSet set = solve_midjoints(d, *fam.plane);
            verify_solutions(d, set, std::nullopt, dir, mode);
            std::cout << "{\"plane\":" << io::plane_json(*fam.plane)
                      << ",\"solutions\":" << io::solution_set_json(d, set) << "}\n";
            return set.kind == SolutionSet::Kind::Empty ? kExitInfeasible : kExitOk;
        }
        const Vec3 target = parse_vec3(target_str);
        const ConstrainedSolution sol = plunge_affine_midplanes(p, target, mode);
        if (sol.empty()) {
            std::cout << "{\"planes\":[],\"k_discriminant\":" << io::fmt(sol.k_discriminant)
                      << "}\n";
            return kExitInfeasible;
        }
        bool any_finite = false;
        std::string body = planes_with_solutions_json(d, sol.planes, sol.k_points, target,
                                                      std::nullopt, mode, any_finite);
        std::string s = "{\"planes\":" + body;
        if (sol.family) s += ",\"family\":" + io::family_json(*sol.family);
        s += "}";
        std::cout << s << "\n";
        return (any_finite || sol.family) ? kExitOk : kExitInfeasible;
    }

    if (locus_affine->parsed()) {
        const Vec3 target = parse_vec3(target_str);
        const LocusDescriptor loc = affine_locus(target);
        std::string s = "{";
        if (loc.kind == LocusDescriptor::Kind::ZUnionSphere) {
            s += "\"kind\":\"z_union_sphere\",\"center\":" + io::fmt(loc.target) +
                 ",\"radius\":" + io::fmt(loc.sphere_radius);
        } else {
            s += "\"kind\":\"planar_cubic\",\"target\":" + io::fmt(loc.target) +
                 ",\"rho_hat\":" + io::fmt(loc.frame->rho);
        }
        if (samples > 1) {
            const double tmax = norm(target);
            s += ",\"samples\":[";
            for (int i = 0; i < samples; ++i) {
                if (i) s += ",";
                const double t = -tmax + 2.0 * tmax * i / (samples - 1);
                s += "{\"t\":" + io::fmt(t) + ",\"r\":" + io::fmt(loc.parametrize(t)) + "}";
            }
            s += "]";
        }
        std::cout << s << "}\n";
        return kExitOk;
    }

    if (locus_azel->parsed()) {
        const Vec3 dir = parse_vec3(dir_str);
        const LocusDescriptor loc = azel_locus(dir);
        if (loc.kind == LocusDescriptor::Kind::BasePlane) {
            std::cout << "{\"kind\":\"base_plane\"}\n";
        } else {
            std::cout << "{\"kind\":\"line_pair\",\"dir_plus\":" << io::fmt(loc.dir_plus)
                      << ",\"dir_minus\":" << io::fmt(loc.dir_minus) << "}\n";
        }
        return kExitOk;
    }

    if (field->parsed()) {
        const Vec3 x = parse_vec3(point_str);
        std::cout << "{\"distal_normal\":" << io::fmt(distal_normal_field(x)) << "}\n";
        return kExitOk;
    }

    if (fmap->parsed()) {
        const JointDesign& d = need_design();
        FeasibilityConstraint constraint{};
        std::string constraint_json;
        if (!frozen_str.empty()) {
            constraint.kind = FeasibilityConstraint::Kind::Frozen;
            constraint.frozen = parse_frozen(d, frozen_str);
            constraint_json = "{\"frozen\":{\"leg\":" + std::to_string(constraint.frozen.leg + 1) +
                              ",\"angle_deg\":" + io::fmt(constraint.frozen.angle * io::kDegPerRad) +
                              "}}";
        } else if (!plunge_str.empty()) {
            const PlungeConstraint p = parse_plunge(plunge_str);
            if (p.infinite) throw BadInput("feasibility-map requires a finite plunge");
            constraint.kind = FeasibilityConstraint::Kind::Plunge;
            constraint.plunge = p.p_d;
            constraint_json = "{\"plunge\":{\"p_d\":" + io::fmt(p.p_d) + "}}";
        } else if (!point_str.empty()) {
            constraint.kind = FeasibilityConstraint::Kind::Point;
            constraint.point = parse_vec3(point_str);
            constraint_json = "{\"point\":" + io::fmt(constraint.point) + "}";
        } else {
            throw BadInput("one of --frozen, --plunge, --point is required");
        }
        int n_az = 0, n_pol = 0;
        if (std::sscanf(grid_str.c_str(), "%dx%d", &n_az, &n_pol) != 2 || n_az < 4 || n_pol < 3)
            throw BadInput("grid must be AZxPOL with AZ >= 4, POL >= 3");

        const FeasibilityMap map = feasibility_map(d, constraint, n_az, n_pol, mode, tangency_eps(d));
        const std::string body = format == "pgm" ? io::map_pgm(map) : io::map_csv(map);
        if (!out_path.empty()) {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw BadInput("cannot open output file '" + out_path + "'");
            f << body;
        } else {
            std::cout << body;
        }
        std::cout << "{\"constraint\":" << constraint_json << ",\"grid\":{\"n_az\":" << n_az
                  << ",\"n_pol\":" << n_pol << "},\"mode\":\"" << mode_str
                  << "\",\"feasible_fraction\":" << io::fmt(map.feasible_fraction) << "}\n";
        return kExitOk;
    }

    throw BadInput("no command given");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const VerificationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
