#pragma once

#include <vector>

#include "rigidflow/core.hpp"

namespace rigidflow {

/// Largest eigenvalue of (g x g)/rho: |g|^2 / rho. InputError for rho <= 0.
double lambda_max_rank_one(Vec2 grad, double rho);
double lambda_max_rank_one(Vec3 grad, double rho);

/// One time slice of subsolution samples: the strict-inequality bound needs
/// (d/2)(lambda_max + dt_phi + p) at every sample point.
struct SubsolutionSamples {
    std::vector<double> lambda_max;
    std::vector<double> dt_phi;
    std::vector<double> pressure;

    double bound(int dim) const;  // max over points of (d/2)(lam + dtphi + p)
};

struct LambdaSchedule {
    std::vector<double> times;
    std::vector<double> lambda;        // selected, later possibly raised
    std::vector<double> attained_max;  // per-slice bound before the margin
    double epsilon = 0.0;
};

/// Lambda(t) = per-slice sample maximum + epsilon; strictness holds with
/// slack epsilon at every sample by construction.
LambdaSchedule select_lambda(const std::vector<double>& times,
                             const std::vector<SubsolutionSamples>& slices, int dim, double epsilon);

/// Prescribed kinetic energy E = -(d/2)(dt_phi + p) + Lambda.
inline double kinetic_energy_value(double dt_phi, double pressure, double lambda, int dim) {
    return -0.5 * dim * (dt_phi + pressure) + lambda;
}

/// Per-slice energy accounting. The direct form integrates E pointwise plus
/// the pressure potential; the closed form groups Lambda |Omega_F| with the
/// remaining integrals. Both must agree to quadrature accuracy.
struct EnergySliceInput {
    double time = 0.0;
    double lambda = 0.0;
    double fluid_area = 0.0;
    double integral_potential = 0.0;  // integral of P(rho)
    double integral_dt_phi = 0.0;
    double integral_pressure = 0.0;
    double integral_E = 0.0;          // direct quadrature of E over the domain
    double rigid = 0.0;               // 1/2 sum (m |eta|^2 + J : omega x omega)
};

struct EnergyRow {
    double time = 0.0;
    double lambda = 0.0;
    double fluid = 0.0;        // closed-form fluid part
    double rigid = 0.0;
    double total = 0.0;        // closed form
    double total_direct = 0.0; // direct form
    double form_gap = 0.0;     // |direct - closed| / |closed|
};

EnergyRow total_energy(const EnergySliceInput& in, int dim);

/// Raises Lambda minimally (backward sweep) so the closed-form energy is
/// strictly decreasing with per-step decrement >= delta. Returns the new
/// schedule; energies must be recomputed by the caller afterwards.
std::vector<double> enforce_decreasing_energy(const std::vector<EnergySliceInput>& slices, int dim,
                                              const std::vector<double>& lambda, double delta);

struct EnergyInequalityVerdict {
    bool holds = false;          // E(t) <= E(s) for all grid t >= s
    int first_violation = -1;    // grid index, -1 when none
};

/// Checks the energy inequality from grid index s against the stated
/// reference energy at s (diagnostic; never throws).
EnergyInequalityVerdict energy_inequality_check(const std::vector<double>& totals, int s,
                                                double reference);

}  // namespace rigidflow
