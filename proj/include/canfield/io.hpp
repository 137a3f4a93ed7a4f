#pragma once

#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "canfield/geometry.hpp"
#include "canfield/ik_constrained.hpp"
#include "canfield/ik_core.hpp"
#include "canfield/loci.hpp"
#include "canfield/model.hpp"
#include "canfield/vec3.hpp"

namespace canfield {
namespace io {

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

/// All numeric output goes through this: 17 significant digits, so the
/// documents are byte-stable and round-trip exactly.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt(const Vec3& v) {
    return "[" + fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z) + "]";
}

inline std::string plane_json(const Plane& p) {
    return "{\"normal\":" + fmt(p.normal) + ",\"point\":" + fmt(p.point) + "}";
}

inline std::string family_json(const PlaneFamily& f) {
    using Kind = PlaneFamily::Kind;
    switch (f.kind) {
        case Kind::Single:
            return "{\"kind\":\"single\",\"plane\":" + plane_json(*f.plane) + "}";
        case Kind::AllThroughOrigin:
            return "{\"kind\":\"all_through_origin\"}";
        case Kind::AllParallelToZ:
            return "{\"kind\":\"all_parallel_to_z\"}";
        case Kind::AllThroughLine:
            return "{\"kind\":\"all_through_line\",\"point\":" + fmt(f.point) +
                   ",\"direction\":" + fmt(f.direction) + "}";
        case Kind::AllOrthogonalTo:
            return "{\"kind\":\"all_orthogonal_to\",\"direction\":" + fmt(f.direction) + "}";
    }
    return "{}";
}

inline std::string solution_set_json(const JointDesign& design, const SolutionSet& set) {
    using Kind = SolutionSet::Kind;
    if (set.kind == Kind::Empty) return "{\"kind\":\"empty\"}";
    if (set.kind == Kind::Infinite) {
        std::string s = "{\"kind\":\"infinite\",\"free_leg\":" + std::to_string(set.free_leg + 1) +
                        ",\"fixed\":[";
        bool first = true;
        for (int i = 0; i < 3; ++i) {
            if (i == set.free_leg) continue;
            if (!first) s += ",";
            first = false;
            s += "{\"leg\":" + std::to_string(i + 1) + ",\"points\":[";
            for (size_t k = 0; k < set.factors[i].points.size(); ++k) {
                if (k) s += ",";
                s += fmt(set.factors[i].points[k]);
            }
            s += "]}";
        }
        return s + "]}";
    }
    std::string s = "{\"kind\":\"finite\",\"solutions\":[";
    for (size_t k = 0; k < set.solutions.size(); ++k) {
        if (k) s += ",";
        const auto& triple = set.solutions[k];
        s += "{\"midjoints\":[" + fmt(triple[0]) + "," + fmt(triple[1]) + "," + fmt(triple[2]) +
             "],\"angles_deg\":[";
        for (int i = 0; i < 3; ++i) {
            if (i) s += ",";
            s += fmt(base_angle(design, i, triple[i]) * kDegPerRad);
        }
        s += "]}";
    }
    return s + "]}";
}

inline std::string configuration_json(const Configuration& c) {
    std::string s = "{\"midjoints\":[" + fmt(c.midjoints[0]) + "," + fmt(c.midjoints[1]) + "," +
                    fmt(c.midjoints[2]) + "],\"midplane\":" + plane_json(c.midplane) +
                    ",\"distal_hinges\":[" + fmt(c.distal_hinges[0]) + "," +
                    fmt(c.distal_hinges[1]) + "," + fmt(c.distal_hinges[2]) +
                    "],\"distal_center\":" + fmt(c.distal_center) +
                    ",\"distal_normal\":" + fmt(c.distal_normal) + "}";
    return s;
}

/// FeasibilityMap CSV: header then one row per cell, pol-major ascending.
inline std::string map_csv(const FeasibilityMap& map) {
    std::string s = "az_deg,pol_deg,feasible\n";
    for (int j = 0; j < map.n_pol; ++j)
        for (int k = 0; k < map.n_az; ++k)
            s += fmt(map.azimuth(k) * kDegPerRad) + "," + fmt(map.polar(j) * kDegPerRad) + "," +
                 (map.at(k, j) ? "1" : "0") + "\n";
    return s;
}

/// FeasibilityMap PGM (P2, maxval 1): rows = polar, cols = azimuth.
inline std::string map_pgm(const FeasibilityMap& map) {
    std::string s = "P2\n" + std::to_string(map.n_az) + " " + std::to_string(map.n_pol) + "\n1\n";
    for (int j = 0; j < map.n_pol; ++j) {
        for (int k = 0; k < map.n_az; ++k) {
            if (k) s += " ";
            s += map.at(k, j) ? "1" : "0";
        }
        s += "\n";
    }
    return s;
}

inline Vec3 vec3_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

/// JointDesign JSON: {"standard":{"b":..., "l":...}} or the explicit
/// {"hinges":..., "axes":..., "arm_lengths":..., "zero_dirs":...} form.
inline JointDesign design_from_json(const nlohmann::json& j) {
    if (j.contains("standard")) {
        const auto& s = j.at("standard");
        return standard_design(s.at("b").get<double>(), s.at("l").get<double>());
    }
    JointDesign d;
    for (int i = 0; i < 3; ++i) {
        d.hinges[i] = vec3_from_json(j.at("hinges").at(i));
        d.axes[i] = vec3_from_json(j.at("axes").at(i));
        d.arm_lengths[i] = j.at("arm_lengths").at(i).get<double>();
        d.zero_dirs[i] = vec3_from_json(j.at("zero_dirs").at(i));
    }
    d.validate();
    return d;
}

inline BaseState state_from_json(const nlohmann::json& j) {
    const auto& a = j.at("angles_deg");
    BaseState s{};
    for (int i = 0; i < 3; ++i) s.angles[i] = a.at(i).get<double>() / kDegPerRad;
    s.normalize();
    return s;
}

}  // namespace io
}  // namespace canfield
