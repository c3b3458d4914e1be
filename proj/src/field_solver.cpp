#include "rigidflow/field_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "rigidflow/geometry.hpp"
#include "rigidflow/quadrature.hpp"

namespace rigidflow {

namespace {

Vec2 perp_ccw(Vec2 v) { return {-v.y, v.x}; }

// Outward normal of the fluid domain along a boundary edge.
Vec2 fluid_outward_normal(const FluidDomainMesh& mesh, const FluidDomainMesh::BoundaryEdge& be, double s,
                          Vec2 fallback_dir) {
    if (be.tag >= 0) {
        PlacedCurve pc{mesh.body_shapes[be.tag], mesh.body_poses[be.tag]};
        NormalFrame nf = normal_at(pc, s - std::floor(s));
        return -nf.n;  // into the body = out of the fluid
    }
    if (mesh.cavity->kind == Cavity::Kind::Disk) {
        double a = kTwoPi * s;
        return {std::cos(a), std::sin(a)};
    }
    return fallback_dir;
}

}  // namespace

NeumannResult solve_neumann(const FluidDomainMesh& mesh, const std::function<double(Vec2)>& rhs,
                            const std::function<double(int, double, Vec2, Vec2)>& flux) {
    const int n = static_cast<int>(mesh.nodes.size());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.triangles.size() * 9 + 2 * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd lumped = Eigen::VectorXd::Zero(n);

    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tv = mesh.triangles[ti];
        Vec2 p[3] = {mesh.nodes[tv[0]], mesh.nodes[tv[1]], mesh.nodes[tv[2]]};
        double area = mesh.tri_area[ti];
        Vec2 g[3];
        for (int i = 0; i < 3; ++i) g[i] = perp_ccw(p[(i + 2) % 3] - p[(i + 1) % 3]) / (2.0 * area);
        for (int i = 0; i < 3; ++i) {
            lumped[tv[i]] += area / 3.0;
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(tv[i], tv[j], area * g[i].dot(g[j]));
        }
        // load: edge-midpoint rule (degree-2 exact)
        for (int e = 0; e < 3; ++e) {
            int i = tv[(e + 1) % 3], j = tv[(e + 2) % 3];
            Vec2 m = 0.5 * (mesh.nodes[i] + mesh.nodes[j]);
            double fm = rhs(m);
            b[i] += area / 3.0 * 0.5 * fm;
            b[j] += area / 3.0 * 0.5 * fm;
        }
    }

    // boundary loads along arcs (bodies, disk cavity) or chords (box cavity)
    NeumannResult result;
    QuadRule1D gl = gauss_legendre(4, 0.0, 1.0);
    for (const auto& be : mesh.boundary_edges) {
        Vec2 a = mesh.nodes[be.n0], c = mesh.nodes[be.n1];
        double tag_acc = 0.0;
        if (be.tag >= 0 || mesh.cavity->kind == Cavity::Kind::Disk) {
            // true arc between the two parameters
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                double f = gl.nodes[q];
                double s = be.s0 + f * (be.s1 - be.s0);
                Vec2 x;
                double speed;
                if (be.tag >= 0) {
                    PlacedCurve pc{mesh.body_shapes[be.tag], mesh.body_poses[be.tag]};
                    double sw = s - std::floor(s);
                    x = pc.point(sw);
                    speed = pc.speed(sw) * std::abs(be.s1 - be.s0);
                } else {
                    double ang = kTwoPi * s;
                    x = mesh.cavity->center +
                        Vec2{mesh.cavity->radius * std::cos(ang), mesh.cavity->radius * std::sin(ang)};
                    speed = kTwoPi * mesh.cavity->radius * std::abs(be.s1 - be.s0);
                }
                Vec2 nrm = fluid_outward_normal(mesh, be, s, {0, 0});
                double g = flux(be.tag, s - std::floor(s), x, nrm);
                double w = gl.weights[q] * speed * g;
                b[be.n0] += w * (1.0 - f);
                b[be.n1] += w * f;
                tag_acc += w;
            }
        } else {
            // straight cavity edge; outward normal from the edge direction
            Vec2 dir = (c - a).normalized();
            Vec2 nrm = {dir.y, -dir.x};
            // orient outward: away from the cavity interior
            Vec2 mid = 0.5 * (a + c);
            if (mesh.cavity->wall_distance(mid + 1e-6 * nrm) > mesh.cavity->wall_distance(mid)) nrm = -nrm;
            double len = (c - a).norm();
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                double f = gl.nodes[q];
                Vec2 x = a + f * (c - a);
                double g = flux(be.tag, 0.0, x, nrm);
                double w = gl.weights[q] * len * g;
                b[be.n0] += w * (1.0 - f);
                b[be.n1] += w * f;
                tag_acc += w;
            }
        }
        result.tag_flux[be.tag] += tag_acc;
    }

    // compatibility projection: remove the constant part of the source
    double total = b.head(n).sum();
    result.compat_projection = std::abs(total);
    double omega = lumped.sum();
    for (int i = 0; i < n; ++i) b[i] -= total * lumped[i] / omega;

    // bordered system [[K, m], [m^T, 0]] enforcing zero mean
    for (int i = 0; i < n; ++i) {
        trips.emplace_back(i, n, lumped[i]);
        trips.emplace_back(n, i, lumped[i]);
    }
    Eigen::SparseMatrix<double> K(n + 1, n + 1);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success)
        throw NumericError("solve_neumann: factorization failed (singular or ill-conditioned system)");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw NumericError("solve_neumann: solve failed");

    Eigen::VectorXd r = K * x - b;
    double bscale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    result.solve_residual = r.cwiseAbs().maxCoeff() / bscale;
    if (result.solve_residual > 1e-10)
        throw NumericError("solve_neumann: discrete residual above 1e-10 of the source norm");

    result.phi.assign(n, 0.0);
    for (int i = 0; i < n; ++i) result.phi[i] = x[i];

    double mean = 0.0, scale = 1e-300;
    for (int i = 0; i < n; ++i) {
        mean += lumped[i] * result.phi[i];
        scale = std::max(scale, std::abs(result.phi[i]));
    }
    result.mean_residual = std::abs(mean) / (omega * scale);

    result.grad.resize(mesh.triangles.size());
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tv = mesh.triangles[ti];
        Vec2 p[3] = {mesh.nodes[tv[0]], mesh.nodes[tv[1]], mesh.nodes[tv[2]]};
        double area = mesh.tri_area[ti];
        Vec2 acc{0.0, 0.0};
        for (int i = 0; i < 3; ++i)
            acc += result.phi[tv[i]] * perp_ccw(p[(i + 2) % 3] - p[(i + 1) % 3]) / (2.0 * area);
        result.grad[ti] = acc;
    }
    return result;
}

std::vector<double> density_from_pressure(const std::vector<double>& pressure, const PressureLaw& law) {
    std::vector<double> rho(pressure.size());
    for (std::size_t i = 0; i < pressure.size(); ++i) {
        if (!(pressure[i] > 0.0)) throw InputError("density_from_pressure: nonpositive pressure sample");
        rho[i] = law.density(pressure[i]);
    }
    return rho;
}

double time_derivative_sample(const std::function<double(int)>& value_at, int k, int n_slices, double dt,
                              bool* one_sided) {
    if (n_slices < 2) throw InputError("time_derivative_sample: needs at least 2 slices");
    if (one_sided) *one_sided = false;
    if (k > 0 && k < n_slices - 1) return (value_at(k + 1) - value_at(k - 1)) / (2.0 * dt);
    if (one_sided) *one_sided = true;
    if (k == 0) return (value_at(1) - value_at(0)) / dt;
    return (value_at(n_slices - 1) - value_at(n_slices - 2)) / dt;
}

InitialMomentum compatible_initial_momentum(const FluidDomainMesh& mesh,
                                            const std::function<double(Vec2)>& drho_dt,
                                            const std::function<double(int, double, Vec2, Vec2)>& flux,
                                            const std::vector<double>& direct_body_flux) {
    InitialMomentum im;
    im.potential = solve_neumann(mesh, drho_dt, flux);
    im.flux_direct = direct_body_flux;
    im.flux_variational.assign(mesh.body_shapes.size(), 0.0);
    for (std::size_t b = 0; b < mesh.body_shapes.size(); ++b) {
        auto it = im.potential.tag_flux.find(static_cast<int>(b));
        if (it != im.potential.tag_flux.end()) im.flux_variational[b] = it->second;
    }
    return im;
}

}  // namespace rigidflow
