#pragma once

#include <string>
#include <vector>

#include "rigidflow/admissibility.hpp"
#include "rigidflow/field_solver.hpp"
#include "rigidflow/mesh.hpp"
#include "rigidflow/pressure_synthesis.hpp"
#include "rigidflow/scenario.hpp"

namespace rigidflow {

struct PipelineOptions {
    unsigned threads = 2;
    // Restart tails: certify the window [window_start .. slices] of the
    // parent grid; lead_in extra slices of pre-history feed the first time
    // stencils (the restarted data inherits the forward fields).
    int window_start = 0;
    int lead_in = 1;
    // Keep per-slice meshes and nodal fields for export.
    bool keep_fields = true;
};

struct StageReport {
    std::string name;
    bool passed = false;
    std::string message;
};

struct SliceDiagnostics {
    double t = 0.0;
    double p0 = 0.0;
    double min_pressure = 0.0;
    double mass_residual = 0.0;
    double compat_residual = 0.0;
    double neumann_projection = 0.0;
    double neumann_residual = 0.0;
    double max_force_residual = 0.0;
    double max_torque_residual = 0.0;
    double wrench_force_error = 0.0;   // synthesis target miss
    double wrench_torque_error = 0.0;
    int extrapolated_points = 0;
    int mesh_nodes = 0;
};

struct SliceFields {
    FluidDomainMesh mesh;
    std::vector<double> phi;
    std::vector<Vec2> grad_phi;
    std::vector<double> dt_phi;
    std::vector<double> p_nodes;
    std::vector<double> rho_nodes;
    SlicePressure pressure;
    std::vector<Pose2D> poses;
};

struct RunResult {
    Scenario scenario;
    double dt = 0.0;
    std::vector<double> times;  // certification window
    std::vector<StageReport> stages;
    std::string failed_stage;  // empty when certified
    bool certified = false;

    std::vector<MassProperties> mass;
    std::vector<SliceDiagnostics> diag;
    std::vector<double> lambda_selected;
    std::vector<double> lambda_final;
    std::vector<double> rescan_slack;
    std::vector<EnergyRow> energy;
    double epsilon = 0.0;
    double delta_energy = 0.0;
    double tol_compat = 0.0;
    double max_form_gap = 0.0;

    double initial_data_energy = 0.0;
    bool p1_origin_holds = false;
    int p1_first_violation = -1;

    std::vector<SliceFields> fields;  // kept when requested

    double max_newton_force() const;
    double max_newton_torque() const;
    double max_compat() const;
    double min_rescan_slack() const;
};

/// Full certification pipeline: synthesis, mass offset, density,
/// compatibility, Neumann solves, time derivatives, Newton residuals, Lambda
/// selection, decreasing energy, energy checks. Deterministic for a fixed
/// scenario and seed; the first failing stage short-circuits the rest.
RunResult run_pipeline(const Scenario& scenario, const PipelineOptions& opts = {});

/// Reverses the scenario (pre: forward run certified) and runs the pipeline.
RunResult run_reversal(const RunResult& forward, const PipelineOptions& opts = {});

/// Tail re-certification from a parent grid index (the restart shadow).
RunResult run_restart_tail(const Scenario& scenario, int start_slice, const PipelineOptions& opts = {});

}  // namespace rigidflow
