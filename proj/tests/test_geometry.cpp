#include <cmath>

#include "doctest.h"
#include "rigidflow/geometry.hpp"
#include "rigidflow/quadrature.hpp"

using namespace rigidflow;

namespace {

BodyShape make_ellipse(double a, double b) {
    FourierCurve c;
    c.ax = {a};
    c.bx = {0.0};
    c.ay = {0.0};
    c.by = {b};
    return BodyShape::curve2d(c);
}

BodyShape make_blob() {
    // mildly perturbed ellipse, strictly convex (construction checks)
    FourierCurve c;
    c.ax = {1.25, 0.0, 0.05};
    c.bx = {0.0, 0.02, 0.0};
    c.ay = {0.0, 0.03, 0.0};
    c.by = {0.95, 0.0, 0.04};
    return BodyShape::curve2d(c);
}

}  // namespace

TEST_CASE("normals on the unit circle are radial") {
    BodyShape circle = BodyShape::ball2d({0.0, 0.0}, 1.0);
    PlacedCurve pc{&circle, Pose2D{}};
    NormalFrame nf = normal_at(pc, 0.0);  // point (1, 0)
    CHECK(nf.n.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(nf.n.y) < 1e-12);
    CHECK(nf.n_perp.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nf.n_perp.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(nf.n.norm() - 1.0) < 1e-12);
}

TEST_CASE("normal on the ellipse axis point") {
    BodyShape ell = make_ellipse(2.0, 1.0);
    PlacedCurve pc{&ell, Pose2D{}};
    NormalFrame nf = normal_at(pc, 0.0);  // point (2, 0)
    CHECK(nf.n.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(nf.n.y) < 1e-12);
}

TEST_CASE("graph-chart orientation: body above the tangent, inward is +y") {
    // Circle of radius 1/2 sitting on the origin: boundary near (0,0) is the
    // graph h(x) = x^2 + O(x^4); the chart normal (h',1)/sqrt(1+h'^2) at x=0
    // is (0,1), which points INTO the body, i.e. opposite our outward n.
    BodyShape circle = BodyShape::ball2d({0.0, 0.5}, 0.5);
    PlacedCurve pc{&circle, Pose2D{}};
    // bottom point (0,0) is at reference angle -pi/2 -> s = 0.75
    NormalFrame nf = normal_at(pc, 0.75);
    CHECK(nf.n.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nf.n.y == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gauss map inverse") {
    SUBCASE("unit circle") {
        BodyShape circle = BodyShape::ball2d({0.0, 0.0}, 1.0);
        PlacedCurve pc{&circle, Pose2D{}};
        double s = gauss_map_inverse(pc, {0.0, 1.0});
        Vec2 p = pc.point(s);
        CHECK(p.x == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(p.y == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("shifted circle") {
        BodyShape circle = BodyShape::ball2d({1.0, 0.0}, 2.0);
        PlacedCurve pc{&circle, Pose2D{}};
        double s = gauss_map_inverse(pc, {1.0, 0.0});
        Vec2 p = pc.point(s);
        CHECK(p.x == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(std::abs(p.y) < 1e-9);
    }
    SUBCASE("ellipse vs analytic gauss map") {
        BodyShape ell = make_ellipse(2.0, 1.0);
        PlacedCurve pc{&ell, Pose2D{}};
        double s = gauss_map_inverse(pc, {1.0, 0.0});
        Vec2 p = pc.point(s);
        CHECK(p.x == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(p.y) < 1e-9);
    }
    SUBCASE("inverse composed with normal is the identity on parameters") {
        BodyShape blob = make_blob();
        PlacedCurve pc{&blob, Pose2D{}};
        for (int i = 0; i < 16; ++i) {
            double s = (i + 0.37) / 16.0;
            NormalFrame nf = normal_at(pc, s);
            double s_back = gauss_map_inverse(pc, nf.n);
            double d = std::abs(s_back - s);
            d = std::min(d, 1.0 - d);
            CHECK(d < 1e-9);
        }
    }
}

TEST_CASE("torque indicator") {
    SUBCASE("centered circle vanishes for all directions") {
        BodyShape circle = BodyShape::ball2d({0.4, -0.2}, 0.7);
        PlacedCurve pc{&circle, Pose2D{}};
        double max_t = 0.0;
        for (int i = 0; i < 360; ++i) {
            double a = kTwoPi * i / 360.0;
            max_t = std::max(max_t, std::abs(torque_indicator(pc, {0.4, -0.2}, {std::cos(a), std::sin(a)})));
        }
        CHECK(max_t < 1e-10);
    }
    SUBCASE("offset-barycenter circle: direct evaluation") {
        BodyShape circle = BodyShape::ball2d({1.0, 0.0}, 2.0);
        PlacedCurve pc{&circle, Pose2D{}};
        double t = torque_indicator(pc, {0.0, 0.0}, {0.0, 1.0});
        // N(m) = (1,2), m_perp = (-1,0): T = -1
        CHECK(t == doctest::Approx(-1.0).epsilon(1e-9));
    }
    SUBCASE("ellipse symmetry axis") {
        BodyShape ell = make_ellipse(2.0, 1.0);
        PlacedCurve pc{&ell, Pose2D{}};
        CHECK(std::abs(torque_indicator(pc, {0.0, 0.0}, {1.0, 0.0})) < 1e-10);
    }
}

TEST_CASE("boundary quadrature") {
    SUBCASE("arclength of the unit circle") {
        BodyShape circle = BodyShape::ball2d({0.0, 0.0}, 1.0);
        PlacedCurve pc{&circle, Pose2D{}};
        BoundaryQuad2D q = boundary_quadrature(pc);
        CHECK(q.measure == doctest::Approx(kTwoPi).epsilon(1e-12));
        double ones = q.integrate([](std::size_t) { return 1.0; });
        CHECK(ones == doctest::Approx(kTwoPi).epsilon(1e-10));
    }
    SUBCASE("closed-surface identity on a perturbed curve") {
        BodyShape blob = make_blob();
        PlacedCurve pc{&blob, Pose2D{{0.3, 0.2}, 0.0}};
        BoundaryQuad2D q = boundary_quadrature(pc);
        Vec2 nsum{0, 0};
        for (std::size_t i = 0; i < q.nodes.size(); ++i) nsum += q.normals[i] * q.weights[i];
        CHECK(nsum.norm() < 1e-8 * q.measure);
    }
    SUBCASE("divergence-theorem oracle on the unit ball in 3D") {
        BoundaryQuad3D q = sphere_quadrature({0, 0, 0}, 1.0);
        Vec3 a{0.0, 0.0, 1.0};
        Vec3 acc{0, 0, 0};
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            acc += q.normals[i] * (q.weights[i] * a.dot(q.nodes[i]));
        double vol = 4.0 / 3.0 * kPi;
        CHECK(acc.x == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(acc.y == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(acc.z == doctest::Approx(vol).epsilon(1e-10));
    }
    SUBCASE("arclength converges at observed order >= 4 under panel doubling") {
        BodyShape blob = make_blob();
        PlacedCurve pc{&blob, Pose2D{}};
        auto arclength = [&](int panels, int order) {
            QuadRule1D r = composite_gauss(order, panels, 0.0, 1.0);
            double acc = 0.0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * pc.speed(r.nodes[i]);
            return acc;
        };
        double ref = arclength(256, 8);
        double e1 = std::abs(arclength(8, 2) - ref);
        double e2 = std::abs(arclength(16, 2) - ref);
        CHECK(std::log2(e1 / e2) >= 4.0);
    }
}

TEST_CASE("area and distance helpers") {
    BodyShape ell = make_ellipse(2.0, 1.0);
    CHECK(body_area(ell) == doctest::Approx(2.0 * kPi).epsilon(1e-10));

    Pose2D pose{{0.5, 0.5}, 0.3};
    SUBCASE("closest point round trip") {
        PlacedCurve pc{&ell, pose};
        Vec2 on = pc.point(0.17);
        NormalFrame nf = normal_at(pc, 0.17);
        Vec2 outside = on + 0.25 * nf.n;
        ClosestPoint cp = closest_boundary_point(pc, outside);
        CHECK(cp.signed_distance == doctest::Approx(0.25).epsilon(1e-8));
        CHECK((cp.point - on).norm() < 1e-8);
        Vec2 inside = on - 0.1 * nf.n;
        CHECK(closest_boundary_point(pc, inside).signed_distance == doctest::Approx(-0.1).epsilon(1e-7));
    }
    SUBCASE("point classification") {
        CHECK(point_in_body(ell, pose, pose.apply_point({0.0, 0.0})));
        CHECK(!point_in_body(ell, pose, pose.apply_point({2.5, 0.0})));
    }
}

TEST_CASE("equispaced parameters partition the arclength") {
    BodyShape blob = make_blob();
    PlacedCurve pc{&blob, Pose2D{}};
    auto params = equispaced_params(pc, 64);
    REQUIRE(params.size() == 64);
    std::vector<Vec2> pts;
    for (double s : params) pts.push_back(pc.point(s));
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d = (pts[(i + 1) % pts.size()] - pts[i]).norm();
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    CHECK(hi / lo < 1.02);  // near-uniform chord lengths
}

TEST_CASE("curve construction rejects non-convex shapes") {
    FourierCurve c;
    c.ax = {1.0, 0.0, 0.2};  // 3rd harmonic large enough to flip curvature
    c.bx = {0.0, 0.0, 0.0};
    c.ay = {0.0, 0.0, 0.0};
    c.by = {1.0, 0.0, 0.2};
    CHECK_THROWS_AS(BodyShape::curve2d(c), GeometryError);
}
