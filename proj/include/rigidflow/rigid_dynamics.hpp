#pragma once

#include <functional>
#include <vector>

#include "rigidflow/core.hpp"
#include "rigidflow/geometry.hpp"
#include "rigidflow/motion_law.hpp"

namespace rigidflow {

// ---------------------------------------------------------------------------
// Solid density on the reference body. Nonnegative, not identically zero.
// ---------------------------------------------------------------------------

struct SolidDensity {
    enum class Kind { Constant, ExpTilt, Custom };

    Kind kind = Kind::Constant;
    double value = 1.0;        // Constant level / overall scale
    double beta = 0.0;         // ExpTilt: value * exp(-beta (x - x0) . dir)
    Vec2 dir{1.0, 0.0};
    Vec2 x0{0.0, 0.0};
    std::function<double(Vec2)> custom;

    static SolidDensity constant(double value);
    static SolidDensity exp_tilt(double value, double beta, Vec2 dir, Vec2 x0);
    static SolidDensity from_function(std::function<double(Vec2)> f);

    double eval(Vec2 x_ref) const;
};

struct MassProperties {
    double mass = 0.0;
    Vec2 barycenter;   // reference coordinates
    double inertia = 0.0;  // scalar about the barycenter (2D)
};

struct MassProperties3D {
    double mass = 0.0;
    Vec3 barycenter;
    Mat3 inertia;  // about the barycenter
};

/// Volume-quadrature mass, barycenter and inertia. InputError on zero mass or
/// a negative density sample.
MassProperties mass_properties(const BodyShape& shape, const SolidDensity& density,
                               int n_radial = 32, int n_angular = 128);
MassProperties3D mass_properties_ball3d(const BodyShape& shape,
                                        const std::function<double(Vec3)>& density,
                                        int n_radial = 24, int n_polar = 24, int n_azimuth = 48);

// ---------------------------------------------------------------------------
// Prescribed motion. The 2D angular velocity scalar follows the momentum
// equations' convention: u = eta - omega * (x - x_B)^perp, so positive omega
// turns the body clockwise and the orientation angle obeys theta' = -omega.
// ---------------------------------------------------------------------------

struct BodyMotionLaw {
    ScalarLaw velocity_x;
    ScalarLaw velocity_y;
    ScalarLaw spin;  // omega(t)
};

struct PrescribedMotion {
    std::vector<BodyMotionLaw> bodies;
    double horizon = 1.0;
    // Reversed evaluation: eta~(t) = -eta(T-t), omega~(t) = -omega(T-t).
    bool reversed = false;

    std::size_t body_count() const { return bodies.size(); }
    Vec2 eta(std::size_t body, double t) const;
    Vec2 eta_dot(std::size_t body, double t) const;
    double omega(std::size_t body, double t) const;
    double omega_dot(std::size_t body, double t) const;

    PrescribedMotion time_reversed() const;
};

// ---------------------------------------------------------------------------
// Flow map: per-body isometry trajectory.
// ---------------------------------------------------------------------------

struct FlowMapState {
    Vec2 barycenter;        // x_B(t)
    double angle = 0.0;     // accumulated CCW orientation angle
    Vec2 barycenter0;       // x_B(0), reference coordinates

    Pose2D pose() const;
    Vec2 map_point(Vec2 x_ref) const { return pose().apply_point(x_ref); }
};

struct Trajectory {
    std::vector<double> times;
    // states[slice][body]
    std::vector<std::vector<FlowMapState>> states;
};

/// Integrates the barycenter/orientation with classic RK4 from t0 over
/// `steps` equal steps of dt. Initial barycenters are reference-frame ones.
Trajectory advance_flow_map(const PrescribedMotion& motion, const std::vector<Vec2>& barycenters0,
                            double t0, double dt, int steps);

/// Checks that every body stays inside the cavity and pairwise clearances
/// hold at every stored slice; GeometryError otherwise.
void validate_trajectory(const Trajectory& traj, const std::vector<BodyShape>& shapes,
                         const Cavity& cavity, double clearance);

/// u^S(t,x) on a body: eta - omega * (x - x_B)^perp.
inline Vec2 rigid_velocity(Vec2 eta, double omega, Vec2 x_barycenter, Vec2 x) {
    return eta - omega * (x - x_barycenter).perp();
}
/// 3D form: eta - omega x (x - x_B).
inline Vec3 rigid_velocity(Vec3 eta, Vec3 omega, Vec3 x_barycenter, Vec3 x) {
    return eta - omega.cross(x - x_barycenter);
}

// 3D flow map (rotation matrix with per-step re-orthonormalization).
struct FlowMapState3D {
    Vec3 barycenter;
    Mat3 rotation;
};
FlowMapState3D advance_flow_map_3d(const std::function<Vec3(double)>& eta,
                                   const std::function<Vec3(double)>& omega, Vec3 barycenter0,
                                   double t0, double dt, int steps);

// ---------------------------------------------------------------------------
// Wrenches and Newton residuals.
// ---------------------------------------------------------------------------

/// Net (force, torque) a boundary pressure exerts. The torque is reported in
/// the lever form integral of p (x - x_B) x n dS (outward n), the quantity the
/// heterogeneous-ball identity pins to the force; the momentum equation's
/// right-hand side is its negative.
struct PressureWrench {
    Vec2 force;
    double torque = 0.0;
};

PressureWrench pressure_wrench(const BoundaryQuad2D& quad, Vec2 x_barycenter,
                               const std::function<double(Vec2)>& pressure);

struct PressureWrench3D {
    Vec3 force;
    Vec3 torque;  // integral of p (x - x_B) x n dS
};
PressureWrench3D pressure_wrench(const BoundaryQuad3D& quad, Vec3 x_barycenter,
                                 const std::function<double(Vec3)>& pressure);

/// Left-hand sides of the momentum equations: F = m eta', tau = J omega'
/// (2D; gravity is off throughout).
struct RequiredWrench {
    Vec2 force;
    double torque = 0.0;
};
RequiredWrench required_wrench(const MassProperties& mp, const PrescribedMotion& motion,
                               std::size_t body, double t);

/// 3D: F = m eta', tau = J omega' - (J omega) x omega.
struct RequiredWrench3D {
    Vec3 force;
    Vec3 torque;
};
RequiredWrench3D required_wrench_3d(const MassProperties3D& mp, const Mat3& rotation,
                                    Vec3 eta_dot, Vec3 omega, Vec3 omega_dot);

/// Momentum-equation residuals for a given boundary pressure:
///   force: m eta' - integral of p n dS
///   torque (2D): J omega' + integral of (x - x_B) . (T n)^perp dS
struct NewtonResidual {
    Vec2 force;
    double torque = 0.0;
};
NewtonResidual newton_residual(const MassProperties& mp, const PrescribedMotion& motion,
                               std::size_t body, double t, const BoundaryQuad2D& boundary,
                               Vec2 x_barycenter, const std::function<double(Vec2)>& pressure);

struct NewtonResidual3D {
    Vec3 force;
    Vec3 torque;
};
NewtonResidual3D newton_residual_3d(const MassProperties3D& mp, const Mat3& rotation, Vec3 eta_dot,
                                    Vec3 omega, Vec3 omega_dot, const BoundaryQuad3D& boundary,
                                    Vec3 x_barycenter, const std::function<double(Vec3)>& pressure);

/// World-frame inertia tensor R J R^T.
Mat3 rotate_inertia(const Mat3& inertia, const Mat3& rotation);

}  // namespace rigidflow
