#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rigidflow/core.hpp"
#include "rigidflow/eos.hpp"
#include "rigidflow/geometry.hpp"
#include "rigidflow/rigid_dynamics.hpp"

namespace rigidflow {

struct BodySpec {
    std::string name;
    BodyShape shape;  // reference placement (time 0)
    SolidDensity density;
    BodyMotionLaw motion;
};

struct Tolerances {
    // negative = derive the documented default during the run
    double compat = -1.0;       // default 1e-6 * m_F / T
    double c4_margin = -1.0;    // epsilon; default 1e-3 * (d/2) * max p
    double energy_step = -1.0;  // delta_E; default 1e-4 * E(0) / T
    double newton_rel = 1e-6;
    double wrench_rel = 1e-7;
};

struct Scenario {
    std::string title;
    int dim = 2;
    Cavity cavity;
    std::vector<BodySpec> bodies;
    PressureLaw eos;
    double fluid_mass = 1.0;
    double horizon = 1.0;
    int slices = 64;
    double mesh_h = 0.05;
    double cutoff_margin = 0.3;
    Tolerances tol;
    std::uint64_t seed = 1;
    // Reversed scenarios evaluate eta~(t) = -eta(T - t) and traverse the body
    // positions backward; reversing twice restores the original record.
    bool reversed = false;

    PrescribedMotion motion() const;
};

/// Parses and validates a scenario file. InputError with the offending field
/// path on validation problems; parse errors name the token.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& yaml_text);

Scenario time_reverse_scenario(const Scenario& s);

/// Canonical, byte-stable dump (also the report echo) and its FNV-1a hash.
std::string scenario_canonical_dump(const Scenario& s);
std::uint64_t scenario_hash(const Scenario& s);

}  // namespace rigidflow
