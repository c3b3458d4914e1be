#pragma once

#include <vector>

#include "rigidflow/core.hpp"
#include "rigidflow/geometry.hpp"

namespace rigidflow {

/// High-order quadrature for integrals of smooth fields over the fluid domain
/// Omega_F = Omega \ union B_i, assembled as (cavity rule) minus (per-body
/// rules). Domains are exact, so accuracy is limited only by integrand
/// smoothness; certification integrals (fluid mass, compatibility, energy)
/// run through this rather than the finite element mesh.
struct FluidDomainQuadrature {
    std::vector<Vec2> cavity_nodes;
    std::vector<double> cavity_weights;
    // one rule per body, subtracted
    std::vector<std::vector<Vec2>> body_nodes;
    std::vector<std::vector<double>> body_weights;
    double fluid_area = 0.0;  // |Omega| - sum |B_i|, analytic

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < cavity_nodes.size(); ++i) acc += cavity_weights[i] * f(cavity_nodes[i]);
        for (std::size_t b = 0; b < body_nodes.size(); ++b)
            for (std::size_t i = 0; i < body_nodes[b].size(); ++i)
                acc -= body_weights[b][i] * f(body_nodes[b][i]);
        return acc;
    }
};

/// panel_size controls the cavity panel edge (features of that scale are
/// resolved); bodies use polar rules scaled to their size.
FluidDomainQuadrature fluid_domain_quadrature(const Cavity& cavity, const std::vector<BodyShape>& shapes,
                                              const std::vector<Pose2D>& poses, double panel_size,
                                              int gauss_order = 4);

// ---------------------------------------------------------------------------
// Ring rules: polar quadrature over a body plus its cutoff collar with radial
// panel edges aligned to the cutoff breakpoints (the quintic cutoff is only
// C^2, so unaligned panels would stall the quadrature order). Synthesized
// pressures are constant (= 0 before p0) outside the rings, which turns
// fluid-domain integrals into
//   f_far |Omega_F| + sum_b [ring_b(f - f_far) - body_b(f - f_far)].
// ---------------------------------------------------------------------------

struct PolarRule {
    std::vector<Vec2> nodes;
    std::vector<double> weights;

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Covers the body plus its collar up to signed distance max(breaks). The
/// radial panel edges on every ray sit exactly where the signed distance to
/// the body crosses each entry of `signed_breaks` (ascending; negative =
/// inside, 0 = the boundary). Cutoff and collar kink surfaces are level sets
/// of that distance, so aligning panels there restores spectral accuracy.
PolarRule body_ring_rule(const BodyShape& shape, const Pose2D& pose,
                         const std::vector<double>& signed_breaks, int n_angular = 256, int gl_order = 8,
                         int radial_subpanels = 2);

/// Weighted samples of a pressure-like field with its far-field constant
/// split off; integrals of compositions g(p_tilde(x) + p0) become
///   g(p0) * fluid_area + sum_i w_i [g(p_i + p0) - g(p0)].
struct CachedFieldSamples {
    double fluid_area = 0.0;
    std::vector<double> weights;  // signed (rings positive, body parts negative)
    std::vector<double> values;   // cached p_tilde samples

    template <typename G>
    double integrate_composed(G&& g, double far_value) const {
        double base = g(far_value);
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * (g(values[i]) - base);
        return base * fluid_area + acc;
    }
};

}  // namespace rigidflow
