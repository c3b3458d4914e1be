#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rigidflow/core.hpp"
#include "rigidflow/geometry.hpp"

namespace rigidflow {

/// Triangle mesh of the fluid domain Omega_F(t) = Omega \ union B_i(t).
/// Boundary nodes sit exactly on the curves and carry their parameters, so
/// boundary loads can be integrated along the true arcs.
struct FluidDomainMesh {
    static constexpr int kTagInterior = -2;
    static constexpr int kTagCavity = -1;

    std::vector<Vec2> nodes;
    std::vector<int> node_tag;      // kTagInterior / kTagCavity / body index
    std::vector<double> node_param; // curve parameter for boundary nodes

    std::vector<std::array<int, 3>> triangles;  // CCW
    std::vector<double> tri_area;

    struct BoundaryEdge {
        int n0 = 0, n1 = 0;   // mesh nodes
        int tag = kTagCavity; // kTagCavity or body index
        double s0 = 0.0, s1 = 0.0;  // curve parameters (s1 unwrapped next to s0)
    };
    std::vector<BoundaryEdge> boundary_edges;

    const Cavity* cavity = nullptr;
    std::vector<const BodyShape*> body_shapes;
    std::vector<Pose2D> body_poses;

    double h = 0.0;
    int time_index = 0;
    double total_area = 0.0;

    // uniform-grid point locator
    Vec2 bucket_lo, bucket_hi;
    int bucket_nx = 0, bucket_ny = 0;
    std::vector<std::vector<int>> buckets;

    /// Triangle containing x, or -1.
    int find_triangle(Vec2 x) const;
    /// P1 interpolation of a nodal field; found=false if x is outside.
    double interpolate(const std::vector<double>& nodal, Vec2 x, bool& found) const;
    /// Extrapolate a nodal field to a point outside the mesh from the nearest
    /// boundary node using the incident triangle's gradient.
    double extrapolate(const std::vector<double>& nodal, const std::vector<Vec2>& tri_grad, Vec2 x) const;
    /// Integral of a P1 nodal field (exact).
    double integrate_nodal(const std::vector<double>& nodal) const;
};

/// Delaunay mesh of the fluid domain: boundary nodes equispaced in arclength
/// at spacing ~h, interior lattice at spacing h with a deterministic jitter
/// drawn from `seed`. GeometryError when bodies overlap, leave the cavity, or
/// violate the 2h clearance.
FluidDomainMesh build_fluid_mesh(const Cavity& cavity, const std::vector<const BodyShape*>& shapes,
                                 const std::vector<Pose2D>& poses, double h, std::uint64_t seed,
                                 int time_index = 0);

}  // namespace rigidflow
