#include <cmath>

#include "doctest.h"
#include "rigidflow/field_solver.hpp"
#include "rigidflow/mesh.hpp"

using namespace rigidflow;

TEST_CASE("fluid mesh of a square cavity with a centered disk") {
    Cavity cavity = Cavity::box({0.0, 0.0}, {1.0, 1.0});
    BodyShape disk = BodyShape::ball2d({0.5, 0.5}, 0.2);
    FluidDomainMesh mesh = build_fluid_mesh(cavity, {&disk}, {Pose2D{}}, 0.05, 7);
    double exact = 1.0 - kPi * 0.04;
    CHECK(std::abs(mesh.total_area - exact) < 1e-3);
    // every boundary edge carries exactly one tag, and tags are consistent
    for (const auto& be : mesh.boundary_edges) {
        CHECK(be.tag >= FluidDomainMesh::kTagCavity);
        CHECK(mesh.node_tag[be.n0] == be.tag);
        CHECK(mesh.node_tag[be.n1] == be.tag);
    }
    // interpolation of a linear field is exact
    std::vector<double> nodal(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) nodal[i] = 2.0 * mesh.nodes[i].x - mesh.nodes[i].y;
    bool found = false;
    double v = mesh.interpolate(nodal, {0.25, 0.75}, found);
    CHECK(found);
    CHECK(v == doctest::Approx(2.0 * 0.25 - 0.75).epsilon(1e-12));
    // a point inside the body is not in the mesh
    mesh.interpolate(nodal, {0.5, 0.5}, found);
    CHECK(!found);
}

TEST_CASE("fluid mesh rejects bad configurations") {
    Cavity cavity = Cavity::box({0.0, 0.0}, {1.0, 1.0});
    SUBCASE("overlapping bodies") {
        BodyShape a = BodyShape::ball2d({0.45, 0.5}, 0.2);
        BodyShape b = BodyShape::ball2d({0.6, 0.5}, 0.2);
        CHECK_THROWS_AS(build_fluid_mesh(cavity, {&a, &b}, {Pose2D{}, Pose2D{}}, 0.05, 7), GeometryError);
    }
    SUBCASE("body touching the wall") {
        BodyShape a = BodyShape::ball2d({0.2, 0.5}, 0.2);
        CHECK_THROWS_AS(build_fluid_mesh(cavity, {&a}, {Pose2D{}}, 0.05, 7), GeometryError);
    }
}

TEST_CASE("neumann solve: zero data gives the zero solution") {
    Cavity cavity = Cavity::disk({0.0, 0.0}, 1.0);
    BodyShape hole = BodyShape::ball2d({0.0, 0.0}, 0.4);
    FluidDomainMesh mesh = build_fluid_mesh(cavity, {&hole}, {Pose2D{}}, 0.1, 3);
    NeumannResult r = solve_neumann(
        mesh, [](Vec2) { return 0.0; }, [](int, double, Vec2, Vec2) { return 0.0; });
    double maxphi = 0.0;
    for (double v : r.phi) maxphi = std::max(maxphi, std::abs(v));
    CHECK(maxphi < 1e-12);
}

namespace {

// Lumped L2 error against a normalized exact solution.
double l2_error(const FluidDomainMesh& mesh, const std::vector<double>& phi,
                const std::function<double(Vec2)>& exact) {
    std::vector<double> ex(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) ex[i] = exact(mesh.nodes[i]);
    // match the discrete zero-mean normalization
    double mean = mesh.integrate_nodal(ex) / mesh.total_area;
    double acc = 0.0;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tv = mesh.triangles[ti];
        for (int k = 0; k < 3; ++k) {
            double d = phi[tv[k]] - (ex[tv[k]] - mean);
            acc += mesh.tri_area[ti] / 3.0 * d * d;
        }
    }
    return std::sqrt(acc);
}

double mms_error_at(double h) {
    Cavity cavity = Cavity::disk({0.0, 0.0}, 1.0);
    BodyShape hole = BodyShape::ball2d({0.0, 0.0}, 0.4);
    FluidDomainMesh mesh = build_fluid_mesh(cavity, {&hole}, {Pose2D{}}, h, 13);
    auto exact = [](Vec2 x) { return x.x * x.x - x.y * x.y; };
    auto grad_exact = [](Vec2 x) { return Vec2{2.0 * x.x, -2.0 * x.y}; };
    NeumannResult r = solve_neumann(
        mesh, [](Vec2) { return 0.0; },
        [&](int, double, Vec2 x, Vec2 n) { return grad_exact(x).dot(n); });
    return l2_error(mesh, r.phi, exact);
}

}  // namespace

TEST_CASE("neumann solve: manufactured harmonic solution on an annulus converges at second order") {
    double e1 = mms_error_at(1.0 / 8.0);
    double e2 = mms_error_at(1.0 / 16.0);
    double e3 = mms_error_at(1.0 / 32.0);
    double order12 = std::log2(e1 / e2);
    double order23 = std::log2(e2 / e3);
    INFO("errors ", e1, " ", e2, " ", e3, " orders ", order12, " ", order23);
    CHECK(0.5 * (order12 + order23) >= 1.7);
    CHECK(e3 < 5e-3);
}

TEST_CASE("neumann solve: radial source against the 1D ODE oracle") {
    // -lap(phi) = c on the annulus r0 < r < R, grad(phi).n = g_in inner,
    // 0 outer; compatibility fixes g_in. Radial solution:
    // phi(r) = -c r^2/4 + A ln r + B, A = c R^2 / 2.
    double r0 = 0.4, R = 1.0, c = 1.0;
    double g_in = -c * (R * R - r0 * r0) / (2.0 * r0);
    Cavity cavity = Cavity::disk({0.0, 0.0}, R);
    BodyShape hole = BodyShape::ball2d({0.0, 0.0}, r0);
    FluidDomainMesh mesh = build_fluid_mesh(cavity, {&hole}, {Pose2D{}}, 1.0 / 32.0, 5);
    NeumannResult sol = solve_neumann(
        mesh, [&](Vec2) { return c; },
        [&](int tag, double, Vec2, Vec2) { return tag >= 0 ? g_in : 0.0; });
    double A = c * R * R / 2.0;
    auto radial = [&](Vec2 x) {
        double r = x.norm();
        return -c * r * r / 4.0 + A * std::log(r);
    };
    double err = l2_error(mesh, sol.phi, radial);
    CHECK(err < 5e-3);
}

TEST_CASE("time derivative stencils") {
    double dt = 1e-2;
    SUBCASE("constant field") {
        auto val = [](int) { return 3.0; };
        CHECK(time_derivative_sample(val, 3, 8, dt) == 0.0);
    }
    SUBCASE("linear in t is exact") {
        auto val = [&](int k) { return 2.5 * (k * dt); };
        bool one_sided = false;
        CHECK(time_derivative_sample(val, 4, 10, dt, &one_sided) == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(!one_sided);
        CHECK(time_derivative_sample(val, 0, 10, dt, &one_sided) == doctest::Approx(2.5).epsilon(1e-10));
        CHECK(one_sided);
    }
    SUBCASE("sine field meets the Taylor bound") {
        auto val = [&](int k) { return std::sin(k * dt); };
        int k = 50;
        double d = time_derivative_sample(val, k, 101, dt);
        CHECK(std::abs(d - std::cos(k * dt)) / std::abs(std::cos(k * dt)) <= 1e-4);
    }
}

TEST_CASE("pressure law identities") {
    PressureLaw law(1.0, 1.4);
    SUBCASE("round trip at 1e-12 on randomized samples") {
        std::uint64_t state = 42;
        for (int i = 0; i < 1000; ++i) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            double rho = 0.1 + 3.0 * (static_cast<double>(state >> 11) / 9007199254740992.0);
            CHECK(std::abs(law.density(law.pressure(rho)) - rho) <= 1e-12 * rho);
        }
    }
    SUBCASE("potential satisfies P' rho - P = p (finite differences)") {
        for (double rho : {0.3, 0.9, 1.7, 2.4}) {
            double h = 1e-6 * rho;
            double pprime = (law.potential(rho + h) - law.potential(rho - h)) / (2.0 * h);
            double lhs = pprime * rho - law.potential(rho);
            CHECK(std::abs(lhs - law.pressure(rho)) <= 1e-6 * law.pressure(rho));
        }
    }
    SUBCASE("gamma = 1 uses the logarithmic potential") {
        PressureLaw iso(2.0, 1.0);
        double rho = 1.3, h = 1e-6;
        double pprime = (iso.potential(rho + h) - iso.potential(rho - h)) / (2.0 * h);
        CHECK(std::abs(pprime * rho - iso.potential(rho) - iso.pressure(rho)) <= 1e-6 * iso.pressure(rho));
    }
    SUBCASE("density from pressure: gamma 2 square root") {
        PressureLaw sq(1.0, 2.0);
        std::vector<double> rho = density_from_pressure({4.0}, sq);
        CHECK(rho[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK_THROWS_AS(density_from_pressure({-1.0}, sq), InputError);
    }
}
