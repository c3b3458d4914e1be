#include "rigidflow/rigid_dynamics.hpp"

#include <cmath>

namespace rigidflow {

// --------------------------------------------------------------------------
// SolidDensity
// --------------------------------------------------------------------------

SolidDensity SolidDensity::constant(double value) {
    if (!(value > 0.0)) throw InputError("solid density: constant value must be > 0");
    SolidDensity d;
    d.kind = Kind::Constant;
    d.value = value;
    return d;
}

SolidDensity SolidDensity::exp_tilt(double value, double beta, Vec2 dir, Vec2 x0) {
    if (!(value > 0.0)) throw InputError("solid density: scale must be > 0");
    SolidDensity d;
    d.kind = Kind::ExpTilt;
    d.value = value;
    d.beta = beta;
    d.dir = dir.normalized();
    d.x0 = x0;
    return d;
}

SolidDensity SolidDensity::from_function(std::function<double(Vec2)> f) {
    SolidDensity d;
    d.kind = Kind::Custom;
    d.custom = std::move(f);
    return d;
}

double SolidDensity::eval(Vec2 x_ref) const {
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::ExpTilt:
            return value * std::exp(-beta * (x_ref - x0).dot(dir));
        case Kind::Custom:
            return custom(x_ref);
    }
    return 0.0;
}

// --------------------------------------------------------------------------
// Mass properties
// --------------------------------------------------------------------------

MassProperties mass_properties(const BodyShape& shape, const SolidDensity& density, int n_radial,
                               int n_angular) {
    if (shape.kind == BodyShape::Kind::Ball3D)
        throw InputError("mass_properties: use mass_properties_ball3d for 3D bodies");
    PlacedCurve pc{&shape, Pose2D{}};
    VolumeQuad2D quad = body_volume_quadrature(pc, n_radial, n_angular);

    double m = 0.0;
    Vec2 first{0.0, 0.0};
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double rho = density.eval(quad.nodes[i]);
        if (rho < 0.0) throw InputError("mass_properties: negative density sample");
        m += quad.weights[i] * rho;
        first += quad.weights[i] * rho * quad.nodes[i];
    }
    if (!(m > 0.0)) throw InputError("mass_properties: zero mass");

    MassProperties mp;
    mp.mass = m;
    mp.barycenter = first / m;
    double inertia = 0.0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double rho = density.eval(quad.nodes[i]);
        inertia += quad.weights[i] * rho * (quad.nodes[i] - mp.barycenter).norm2();
    }
    mp.inertia = inertia;
    return mp;
}

MassProperties3D mass_properties_ball3d(const BodyShape& shape, const std::function<double(Vec3)>& density,
                                        int n_radial, int n_polar, int n_azimuth) {
    if (shape.kind != BodyShape::Kind::Ball3D)
        throw InputError("mass_properties_ball3d: shape is not a 3D ball");
    VolumeQuad3D quad = ball_volume_quadrature(shape.center3, shape.radius, n_radial, n_polar, n_azimuth);
    double m = 0.0;
    Vec3 first{0, 0, 0};
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double rho = density(quad.nodes[i]);
        if (rho < 0.0) throw InputError("mass_properties_ball3d: negative density sample");
        m += quad.weights[i] * rho;
        first += quad.weights[i] * rho * quad.nodes[i];
    }
    if (!(m > 0.0)) throw InputError("mass_properties_ball3d: zero mass");
    MassProperties3D mp;
    mp.mass = m;
    mp.barycenter = first / m;
    Mat3 inertia = Mat3::zero();
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double rho = density(quad.nodes[i]);
        Vec3 r = quad.nodes[i] - mp.barycenter;
        double r2 = r.norm2();
        double w = quad.weights[i] * rho;
        inertia.a[0][0] += w * (r2 - r.x * r.x);
        inertia.a[1][1] += w * (r2 - r.y * r.y);
        inertia.a[2][2] += w * (r2 - r.z * r.z);
        inertia.a[0][1] -= w * r.x * r.y;
        inertia.a[0][2] -= w * r.x * r.z;
        inertia.a[1][2] -= w * r.y * r.z;
    }
    inertia.a[1][0] = inertia.a[0][1];
    inertia.a[2][0] = inertia.a[0][2];
    inertia.a[2][1] = inertia.a[1][2];
    mp.inertia = inertia;
    return mp;
}

// --------------------------------------------------------------------------
// PrescribedMotion
// --------------------------------------------------------------------------

Vec2 PrescribedMotion::eta(std::size_t body, double t) const {
    const auto& laws = bodies.at(body);
    if (reversed) {
        double s = horizon - t;
        return {-laws.velocity_x.eval(s), -laws.velocity_y.eval(s)};
    }
    return {laws.velocity_x.eval(t), laws.velocity_y.eval(t)};
}

Vec2 PrescribedMotion::eta_dot(std::size_t body, double t) const {
    const auto& laws = bodies.at(body);
    if (reversed) {
        double s = horizon - t;
        return {laws.velocity_x.deriv(s), laws.velocity_y.deriv(s)};
    }
    return {laws.velocity_x.deriv(t), laws.velocity_y.deriv(t)};
}

double PrescribedMotion::omega(std::size_t body, double t) const {
    const auto& laws = bodies.at(body);
    if (reversed) return -laws.spin.eval(horizon - t);
    return laws.spin.eval(t);
}

double PrescribedMotion::omega_dot(std::size_t body, double t) const {
    const auto& laws = bodies.at(body);
    if (reversed) return laws.spin.deriv(horizon - t);
    return laws.spin.deriv(t);
}

PrescribedMotion PrescribedMotion::time_reversed() const {
    PrescribedMotion m = *this;
    m.reversed = !reversed;
    return m;
}

// --------------------------------------------------------------------------
// Flow map
// --------------------------------------------------------------------------

Pose2D FlowMapState::pose() const {
    Pose2D p;
    p.angle = angle;
    double c = std::cos(angle), s = std::sin(angle);
    Vec2 rb{c * barycenter0.x - s * barycenter0.y, s * barycenter0.x + c * barycenter0.y};
    p.shift = barycenter - rb;
    return p;
}

Trajectory advance_flow_map(const PrescribedMotion& motion, const std::vector<Vec2>& barycenters0,
                            double t0, double dt, int steps) {
    if (barycenters0.size() != motion.body_count())
        throw InputError("advance_flow_map: barycenter/body count mismatch");
    Trajectory traj;
    traj.times.resize(steps + 1);
    traj.states.resize(steps + 1);
    std::vector<FlowMapState> cur(motion.body_count());
    for (std::size_t b = 0; b < cur.size(); ++b) {
        cur[b].barycenter = barycenters0[b];
        cur[b].barycenter0 = barycenters0[b];
        cur[b].angle = 0.0;
    }
    traj.times[0] = t0;
    traj.states[0] = cur;
    for (int k = 0; k < steps; ++k) {
        double t = t0 + k * dt;
        for (std::size_t b = 0; b < cur.size(); ++b) {
            // RK4 on dx_B/dt = eta(t), dtheta/dt = -omega(t); with time-only
            // right-hand sides this is Simpson's rule.
            Vec2 k1 = motion.eta(b, t);
            Vec2 k2 = motion.eta(b, t + 0.5 * dt);
            Vec2 k4 = motion.eta(b, t + dt);
            cur[b].barycenter += (dt / 6.0) * (k1 + 4.0 * k2 + k4);
            double w1 = -motion.omega(b, t);
            double w2 = -motion.omega(b, t + 0.5 * dt);
            double w4 = -motion.omega(b, t + dt);
            cur[b].angle += (dt / 6.0) * (w1 + 4.0 * w2 + w4);
        }
        traj.times[k + 1] = t0 + (k + 1) * dt;
        traj.states[k + 1] = cur;
    }
    return traj;
}

void validate_trajectory(const Trajectory& traj, const std::vector<BodyShape>& shapes,
                         const Cavity& cavity, double clearance) {
    if (shapes.size() != (traj.states.empty() ? 0 : traj.states[0].size()))
        throw InputError("validate_trajectory: shape/body count mismatch");
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto& slice = traj.states[k];
        // inside the cavity
        for (std::size_t b = 0; b < slice.size(); ++b) {
            Pose2D pose = slice[b].pose();
            PlacedCurve pc{&shapes[b], pose};
            const int probes = 64;
            for (int i = 0; i < probes; ++i) {
                Vec2 x = pc.point(static_cast<double>(i) / probes);
                if (cavity.wall_distance(x) <= clearance)
                    throw GeometryError("body " + std::to_string(b) + " too close to the cavity wall at t=" +
                                        std::to_string(traj.times[k]));
            }
        }
        // pairwise disjoint
        for (std::size_t b = 0; b < slice.size(); ++b) {
            for (std::size_t c = b + 1; c < slice.size(); ++c) {
                Pose2D pb = slice[b].pose(), pcpose = slice[c].pose();
                PlacedCurve curve_b{&shapes[b], pb};
                const int probes = 64;
                double min_d = 1e300;
                for (int i = 0; i < probes; ++i) {
                    Vec2 x = curve_b.point(static_cast<double>(i) / probes);
                    min_d = std::min(min_d, distance_to_body(shapes[c], pcpose, x));
                    if (point_in_body(shapes[c], pcpose, x)) min_d = -1.0;
                }
                if (min_d <= clearance)
                    throw GeometryError("bodies " + std::to_string(b) + " and " + std::to_string(c) +
                                        " violate clearance at t=" + std::to_string(traj.times[k]));
            }
        }
    }
}

namespace {

Mat3 skew(Vec3 w) {
    Mat3 m = Mat3::zero();
    m.a[0][1] = -w.z; m.a[0][2] = w.y;
    m.a[1][0] = w.z;  m.a[1][2] = -w.x;
    m.a[2][0] = -w.y; m.a[2][1] = w.x;
    return m;
}

void reorthonormalize(Mat3& r) {
    // Two polar-projection iterations: R <- 1.5 R - 0.5 R R^T R.
    for (int it = 0; it < 2; ++it) {
        Mat3 rrr = r * (r.transposed() * r);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.a[i][j] = 1.5 * r.a[i][j] - 0.5 * rrr.a[i][j];
    }
}

}  // namespace

FlowMapState3D advance_flow_map_3d(const std::function<Vec3(double)>& eta,
                                   const std::function<Vec3(double)>& omega, Vec3 barycenter0,
                                   double t0, double dt, int steps) {
    FlowMapState3D st;
    st.barycenter = barycenter0;
    st.rotation = Mat3::identity();
    for (int k = 0; k < steps; ++k) {
        double t = t0 + k * dt;
        Vec3 k1 = eta(t), k2 = eta(t + 0.5 * dt), k4 = eta(t + dt);
        st.barycenter += (dt / 6.0) * (k1 + 4.0 * k2 + k4);
        // dR/dt = -[omega]x R
        auto deriv = [&](double tt, const Mat3& r) { return (skew(omega(tt)) * r) * (-1.0); };
        Mat3 r1 = deriv(t, st.rotation);
        Mat3 r2 = deriv(t + 0.5 * dt, st.rotation + r1 * (0.5 * dt));
        Mat3 r3 = deriv(t + 0.5 * dt, st.rotation + r2 * (0.5 * dt));
        Mat3 r4 = deriv(t + dt, st.rotation + r3 * dt);
        st.rotation = st.rotation + (r1 + r2 * 2.0 + r3 * 2.0 + r4) * (dt / 6.0);
        reorthonormalize(st.rotation);
    }
    if (std::abs(st.rotation.det() - 1.0) > 1e-10)
        throw NumericError("advance_flow_map_3d: rotation drifted from SO(3)");
    return st;
}

// --------------------------------------------------------------------------
// Wrenches and residuals
// --------------------------------------------------------------------------

PressureWrench pressure_wrench(const BoundaryQuad2D& quad, Vec2 x_barycenter,
                               const std::function<double(Vec2)>& pressure) {
    PressureWrench w;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double p = pressure(quad.nodes[i]);
        double dw = quad.weights[i] * p;
        w.force += quad.normals[i] * dw;
        w.torque += dw * (quad.nodes[i] - x_barycenter).cross(quad.normals[i]);
    }
    return w;
}

PressureWrench3D pressure_wrench(const BoundaryQuad3D& quad, Vec3 x_barycenter,
                                 const std::function<double(Vec3)>& pressure) {
    PressureWrench3D w;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        double p = pressure(quad.nodes[i]);
        double dw = quad.weights[i] * p;
        w.force += quad.normals[i] * dw;
        w.torque += dw * (quad.nodes[i] - x_barycenter).cross(quad.normals[i]);
    }
    return w;
}

RequiredWrench required_wrench(const MassProperties& mp, const PrescribedMotion& motion,
                               std::size_t body, double t) {
    RequiredWrench rw;
    rw.force = mp.mass * motion.eta_dot(body, t);
    rw.torque = mp.inertia * motion.omega_dot(body, t);
    return rw;
}

RequiredWrench3D required_wrench_3d(const MassProperties3D& mp, const Mat3& rotation, Vec3 eta_dot,
                                    Vec3 omega, Vec3 omega_dot) {
    Mat3 J = rotate_inertia(mp.inertia, rotation);
    RequiredWrench3D rw;
    rw.force = mp.mass * eta_dot;
    rw.torque = J * omega_dot - (J * omega).cross(omega);
    return rw;
}

NewtonResidual newton_residual(const MassProperties& mp, const PrescribedMotion& motion,
                               std::size_t body, double t, const BoundaryQuad2D& boundary,
                               Vec2 x_barycenter, const std::function<double(Vec2)>& pressure) {
    PressureWrench w = pressure_wrench(boundary, x_barycenter, pressure);
    NewtonResidual r;
    r.force = mp.mass * motion.eta_dot(body, t) - w.force;
    // J omega' + oint (x - x_B) . (T n)^perp dS; the integral equals +torque
    // in the wrench's lever form.
    r.torque = mp.inertia * motion.omega_dot(body, t) + w.torque;
    return r;
}

NewtonResidual3D newton_residual_3d(const MassProperties3D& mp, const Mat3& rotation, Vec3 eta_dot,
                                    Vec3 omega, Vec3 omega_dot, const BoundaryQuad3D& boundary,
                                    Vec3 x_barycenter, const std::function<double(Vec3)>& pressure) {
    PressureWrench3D w = pressure_wrench(boundary, x_barycenter, pressure);
    RequiredWrench3D req = required_wrench_3d(mp, rotation, eta_dot, omega, omega_dot);
    NewtonResidual3D r;
    r.force = req.force - w.force;
    r.torque = req.torque - w.torque;
    return r;
}

Mat3 rotate_inertia(const Mat3& inertia, const Mat3& rotation) {
    return rotation * (inertia * rotation.transposed());
}

}  // namespace rigidflow
