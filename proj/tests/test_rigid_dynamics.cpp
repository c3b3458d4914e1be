#include <cmath>
#include <random>

#include "doctest.h"
#include "rigidflow/rigid_dynamics.hpp"

using namespace rigidflow;

TEST_CASE("mass properties of the homogeneous unit disk") {
    BodyShape disk = BodyShape::ball2d({0.0, 0.0}, 1.0);
    MassProperties mp = mass_properties(disk, SolidDensity::constant(1.0));
    CHECK(mp.mass == doctest::Approx(kPi).epsilon(1e-10));
    CHECK(mp.barycenter.norm() < 1e-10);
    CHECK(mp.inertia == doctest::Approx(kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("homogeneous ball barycenter is the geometric center") {
    BodyShape ball = BodyShape::ball3d({0.3, -0.1, 0.2}, 0.5);
    MassProperties3D mp = mass_properties_ball3d(ball, [](Vec3) { return 2.0; });
    CHECK((mp.barycenter - Vec3{0.3, -0.1, 0.2}).norm() < 1e-10);
    CHECK(mp.mass == doctest::Approx(2.0 * 4.0 / 3.0 * kPi * 0.125).epsilon(1e-10));
    // homogeneous ball: J = 2/5 m r^2 on the diagonal
    double j_expect = 0.4 * mp.mass * 0.25;
    CHECK(mp.inertia.a[0][0] == doctest::Approx(j_expect).epsilon(1e-8));
    CHECK(std::abs(mp.inertia.a[0][1]) < 1e-10);
}

TEST_CASE("heterogeneous disk of the hetero-ball remark: barycenter at the origin") {
    // Disk of radius 2 centered at (1,0). A nonnegative linear density cannot
    // put the barycenter at the origin, so an exponential tilt is fitted by
    // bisection instead.
    BodyShape disk = BodyShape::ball2d({1.0, 0.0}, 2.0);
    auto barycenter_x = [&](double beta) {
        SolidDensity d = SolidDensity::exp_tilt(1.0, beta, {1.0, 0.0}, {1.0, 0.0});
        return mass_properties(disk, d).barycenter.x;
    };
    double lo = 0.0, hi = 4.0;
    REQUIRE(barycenter_x(lo) > 0.0);
    REQUIRE(barycenter_x(hi) < 0.0);
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (barycenter_x(mid) > 0.0 ? lo : hi) = mid;
    }
    double beta = 0.5 * (lo + hi);
    SolidDensity d = SolidDensity::exp_tilt(1.0, beta, {1.0, 0.0}, {1.0, 0.0});
    MassProperties mp = mass_properties(disk, d);
    CHECK(std::abs(mp.barycenter.x) < 1e-8);
    CHECK(std::abs(mp.barycenter.y) < 1e-8);
}

TEST_CASE("rigid velocity field") {
    CHECK((rigid_velocity(Vec2{1.0, 2.0}, 0.0, Vec2{0, 0}, Vec2{3.0, 4.0}) - Vec2{1.0, 2.0}).norm() == 0.0);
    CHECK(rigid_velocity(Vec2{0, 0}, 3.0, Vec2{0.5, 0.5}, Vec2{0.5, 0.5}).norm() == 0.0);
    Vec2 u = rigid_velocity(Vec2{0, 0}, 1.0, Vec2{0, 0}, Vec2{1.0, 0.0});
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(u.dot(Vec2{1.0, 0.0})) < 1e-15);
}

TEST_CASE("flow map") {
    SUBCASE("rest motion is the identity") {
        PrescribedMotion motion;
        motion.bodies.resize(1);
        motion.horizon = 1.0;
        Trajectory traj = advance_flow_map(motion, {{0.2, 0.1}}, 0.0, 1.0 / 32.0, 32);
        FlowMapState st = traj.states.back()[0];
        CHECK((st.map_point({0.7, 0.3}) - Vec2{0.7, 0.3}).norm() < 1e-14);
    }
    SUBCASE("constant translation") {
        PrescribedMotion motion;
        motion.bodies.resize(1);
        motion.bodies[0].velocity_x.terms.push_back(MotionTerm::constant(1.0));
        motion.horizon = 1.0;
        Trajectory traj = advance_flow_map(motion, {{0.0, 0.0}}, 0.0, 1.0 / 64.0, 64);
        CHECK((traj.states.back()[0].barycenter - Vec2{1.0, 0.0}).norm() < 1e-10);
    }
    SUBCASE("full rotation returns to the identity") {
        PrescribedMotion motion;
        motion.bodies.resize(1);
        motion.bodies[0].spin.terms.push_back(MotionTerm::constant(kTwoPi));
        motion.horizon = 1.0;
        Trajectory traj = advance_flow_map(motion, {{0.3, 0.0}}, 0.0, 1.0 / 64.0, 64);
        FlowMapState st = traj.states.back()[0];
        CHECK((st.map_point({0.9, 0.4}) - Vec2{0.9, 0.4}).norm() < 1e-8);
    }
    SUBCASE("isometry invariant on random point pairs") {
        PrescribedMotion motion;
        motion.bodies.resize(1);
        motion.bodies[0].velocity_x.terms.push_back(MotionTerm::sine(0.4, 3.0, 0.2));
        motion.bodies[0].velocity_y.terms.push_back(MotionTerm::polynomial({0.1, -0.2}));
        motion.bodies[0].spin.terms.push_back(MotionTerm::cosine(1.5, 2.0, 0.0));
        motion.horizon = 1.0;
        Trajectory traj = advance_flow_map(motion, {{0.0, 0.0}}, 0.0, 1.0 / 64.0, 64);
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (int trial = 0; trial < 50; ++trial) {
            Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
            for (std::size_t k = 0; k < traj.states.size(); k += 8) {
                const FlowMapState& st = traj.states[k][0];
                double before = (a - b).norm();
                double after = (st.map_point(a) - st.map_point(b)).norm();
                CHECK(std::abs(after - before) <= 1e-9);
            }
        }
    }
    SUBCASE("solid mass is conserved along the flow") {
        BodyShape disk = BodyShape::ball2d({0.0, 0.0}, 0.5);
        SolidDensity rho = SolidDensity::exp_tilt(1.0, 0.8, {0.0, 1.0}, {0.0, 0.0});
        MassProperties mp = mass_properties(disk, rho);

        PrescribedMotion motion;
        motion.bodies.resize(1);
        motion.bodies[0].velocity_x.terms.push_back(MotionTerm::sine(0.3, 2.0, 0.0));
        motion.bodies[0].spin.terms.push_back(MotionTerm::constant(0.7));
        motion.horizon = 1.0;
        Trajectory traj = advance_flow_map(motion, {mp.barycenter}, 0.0, 1.0 / 32.0, 32);

        for (std::size_t k = 0; k < traj.states.size(); k += 8) {
            const FlowMapState& st = traj.states[k][0];
            Pose2D pose = st.pose();
            PlacedCurve pc{&disk, pose};
            VolumeQuad2D q = body_volume_quadrature(pc, 32, 128);
            // transported density: rho(t, y) = rho0(X^-1 y)
            double c = std::cos(pose.angle), s = std::sin(pose.angle);
            double m = 0.0;
            for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                Vec2 d = q.nodes[i] - pose.shift;
                Vec2 ref{c * d.x + s * d.y, -s * d.x + c * d.y};
                m += q.weights[i] * rho.eval(ref);
            }
            CHECK(m == doctest::Approx(mp.mass).epsilon(1e-8));
        }
    }
}

TEST_CASE("3D flow map stays orthogonal") {
    auto eta = [](double) { return Vec3{0.1, 0.0, 0.0}; };
    auto omega = [](double t) { return Vec3{0.3 * std::sin(t), 1.0, 0.2 * std::cos(t)}; };
    FlowMapState3D st = advance_flow_map_3d(eta, omega, {0, 0, 0}, 0.0, 1.0 / 128.0, 128);
    Mat3 should_be_identity = st.rotation * st.rotation.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(should_be_identity.a[i][j] - (i == j ? 1.0 : 0.0)) < 1e-10);
    CHECK(st.rotation.det() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("required wrench") {
    BodyShape disk = BodyShape::ball2d({0.0, 0.0}, 1.0);
    MassProperties mp = mass_properties(disk, SolidDensity::constant(1.0));

    PrescribedMotion rest;
    rest.bodies.resize(1);
    rest.bodies[0].velocity_x.terms.push_back(MotionTerm::constant(0.4));
    rest.bodies[0].spin.terms.push_back(MotionTerm::constant(1.2));
    rest.horizon = 1.0;
    RequiredWrench rw = required_wrench(mp, rest, 0, 0.5);
    CHECK(rw.force.norm() < 1e-14);
    CHECK(std::abs(rw.torque) < 1e-14);

    PrescribedMotion spinup;
    spinup.bodies.resize(1);
    spinup.bodies[0].spin.terms.push_back(MotionTerm::polynomial({0.0, 1.0}));  // omega = t
    spinup.horizon = 1.0;
    RequiredWrench rw2 = required_wrench(mp, spinup, 0, 0.3);
    CHECK(rw2.torque == doctest::Approx(kPi / 2.0).epsilon(1e-9));

    // 3D: omega along a principal axis has no gyroscopic term
    BodyShape ball = BodyShape::ball3d({0, 0, 0}, 1.0);
    MassProperties3D mp3 = mass_properties_ball3d(ball, [](Vec3) { return 1.0; });
    RequiredWrench3D rw3 =
        required_wrench_3d(mp3, Mat3::identity(), {0, 0, 0}, {0, 0, 2.0}, {0, 0, 0.5});
    CHECK(rw3.force.norm() < 1e-14);
    CHECK(std::abs(rw3.torque.x) < 1e-12);
    CHECK(std::abs(rw3.torque.y) < 1e-12);
    CHECK(rw3.torque.z == doctest::Approx(mp3.inertia.a[2][2] * 0.5).epsilon(1e-10));
}

TEST_CASE("newton residuals") {
    BodyShape disk = BodyShape::ball2d({0.2, 0.1}, 0.6);
    MassProperties mp = mass_properties(disk, SolidDensity::constant(1.0));
    PlacedCurve pc{&disk, Pose2D{}};
    BoundaryQuad2D quad = boundary_quadrature(pc);

    PrescribedMotion rest;
    rest.bodies.resize(1);
    rest.horizon = 1.0;

    SUBCASE("constant pressure exerts nothing on a closed body") {
        NewtonResidual r = newton_residual(mp, rest, 0, 0.0, quad, mp.barycenter,
                                           [](Vec2) { return 3.7; });
        CHECK(r.force.norm() < 1e-8);
        CHECK(std::abs(r.torque) < 1e-8);
    }

    SUBCASE("homogeneous-disk torque neutrality for 100 random smooth pressures") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            double a1 = u(rng), b1 = u(rng), a2 = u(rng), b2 = u(rng);
            auto p = [&](Vec2 x) {
                return std::exp(a1 * x.x + b1 * x.y + a2 * x.x * x.y + 0.3 * b2 * (x.x * x.x - x.y * x.y));
            };
            PressureWrench w = pressure_wrench(quad, mp.barycenter, p);
            CHECK(std::abs(w.torque) < 1e-10);
        }
    }

    SUBCASE("homogeneous-sphere pressure torque vanishes identically") {
        BodyShape ball = BodyShape::ball3d({0.1, 0.0, -0.2}, 0.8);
        MassProperties3D mp3 = mass_properties_ball3d(ball, [](Vec3) { return 1.0; });
        BoundaryQuad3D q3 = sphere_quadrature(ball.center3, ball.radius);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            double a = u(rng), b = u(rng), c = u(rng);
            auto p = [&](Vec3 x) { return std::exp(a * x.x + b * x.y + c * x.z); };
            PressureWrench3D w = pressure_wrench(q3, mp3.barycenter, p);
            CHECK(w.torque.norm() < 1e-10);
        }
    }
}
