#pragma once

#include <functional>
#include <map>
#include <vector>

#include "rigidflow/core.hpp"
#include "rigidflow/eos.hpp"
#include "rigidflow/mesh.hpp"

namespace rigidflow {

// ---------------------------------------------------------------------------
// Inhomogeneous Neumann problem -lap(phi) = f, grad(phi).n = g on the moving
// fluid domain, normalized by zero mean. P1 elements; the mean constraint is
// a Lagrange multiplier row, so the normalization holds to solver precision.
// ---------------------------------------------------------------------------

struct NeumannResult {
    std::vector<double> phi;    // nodal values, zero mean
    std::vector<Vec2> grad;     // per-triangle gradients
    double compat_projection = 0.0;  // |sum f + oint g| removed from the rhs
    double solve_residual = 0.0;     // max |K phi + m lambda - b| / max |b|
    double mean_residual = 0.0;      // |integral of phi| / (|Omega| * scale)
    std::map<int, double> tag_flux;  // per boundary tag: oint g ds (variational)
};

/// flux(tag, s, x, n) evaluates g = grad(phi).n with n the outward normal of
/// the FLUID domain (into bodies, out of the cavity). Body edges integrate
/// along the true boundary arcs.
NeumannResult solve_neumann(const FluidDomainMesh& mesh, const std::function<double(Vec2)>& rhs,
                            const std::function<double(int, double, Vec2, Vec2)>& flux);

// ---------------------------------------------------------------------------
// Density from pressure and the transport-theorem compatibility residual.
// ---------------------------------------------------------------------------

/// rho = law^-1(p) pointwise; InputError on a nonpositive pressure sample.
std::vector<double> density_from_pressure(const std::vector<double>& pressure, const PressureLaw& law);

/// Central difference in time at slice k of n slices; one-sided (first order)
/// at the endpoints. value_at(j) returns the sample at slice j.
double time_derivative_sample(const std::function<double(int)>& value_at, int k, int n_slices, double dt,
                              bool* one_sided = nullptr);

// ---------------------------------------------------------------------------
// Compatible initial momentum m0 = grad Phi0 with the boundary-flux check.
// ---------------------------------------------------------------------------

struct InitialMomentum {
    NeumannResult potential;  // Phi0; m0 is its per-triangle gradient
    // per body: variational flux of m0 through the body boundary vs the
    // direct quadrature of rho u.n (both fluid-outward)
    std::vector<double> flux_variational;
    std::vector<double> flux_direct;
};

InitialMomentum compatible_initial_momentum(const FluidDomainMesh& mesh,
                                            const std::function<double(Vec2)>& drho_dt,
                                            const std::function<double(int, double, Vec2, Vec2)>& flux,
                                            const std::vector<double>& direct_body_flux);

}  // namespace rigidflow
