#pragma once

#include <optional>
#include <vector>

#include "rigidflow/core.hpp"

namespace rigidflow {

// ---------------------------------------------------------------------------
// Cavity: the fixed container. Box or disk in 2D.
// ---------------------------------------------------------------------------

struct Cavity {
    enum class Kind { Box, Disk };

    Kind kind = Kind::Box;
    Vec2 lo{-1.0, -1.0}, hi{1.0, 1.0};  // Box
    Vec2 center{0.0, 0.0};              // Disk
    double radius = 1.0;

    static Cavity box(Vec2 lo, Vec2 hi);
    static Cavity disk(Vec2 center, double radius);

    double area() const;
    /// Distance from x to the cavity wall, positive inside.
    double wall_distance(Vec2 x) const;
    bool contains(Vec2 x, double margin = 0.0) const { return wall_distance(x) > margin; }
    /// Axis-aligned bounding box (lo, hi).
    std::pair<Vec2, Vec2> bounding_box() const;
};

// ---------------------------------------------------------------------------
// Body shapes. 2D: balls and strictly convex C^2 curves stored as truncated
// Fourier parametrizations (derivatives are exact). 3D: balls only.
// ---------------------------------------------------------------------------

struct FourierCurve {
    // x(s) = cx + sum_k axk cos(2πks) + bxk sin(2πks), same for y, s in [0,1).
    Vec2 center{0.0, 0.0};
    std::vector<double> ax, bx, ay, by;  // index k-1 holds harmonic k

    Vec2 point(double s) const;
    Vec2 d1(double s) const;
    Vec2 d2(double s) const;
};

struct Pose2D {
    Vec2 shift{0.0, 0.0};
    double angle = 0.0;

    Vec2 apply_point(Vec2 p) const;
    Vec2 apply_vector(Vec2 v) const;
};

struct BodyShape {
    enum class Kind { Ball2D, Ball3D, Curve2D };

    Kind kind = Kind::Ball2D;
    Vec2 center2{0.0, 0.0};  // Ball2D, reference coordinates
    Vec3 center3{0.0, 0.0, 0.0};
    double radius = 1.0;
    FourierCurve curve;  // Curve2D

    /// Throws GeometryError on invalid radius or a non-convex curve
    /// (curvature checked at 4x quadrature density).
    static BodyShape ball2d(Vec2 center, double radius);
    static BodyShape ball3d(Vec3 center, double radius);
    static BodyShape curve2d(FourierCurve curve);

    bool is_planar() const { return kind != Kind::Ball3D; }
    /// Radius of a circle around the reference centroid guaranteed to contain
    /// the reference shape.
    double bounding_radius() const;
    /// Parametrization centroid (reference coordinates); an interior anchor.
    Vec2 anchor2() const;
};

// A 2D body boundary in world coordinates: reference shape + rigid placement.
struct PlacedCurve {
    const BodyShape* shape = nullptr;
    Pose2D pose;

    Vec2 point(double s) const;
    Vec2 d1(double s) const;
    Vec2 d2(double s) const;
    double speed(double s) const { return d1(s).norm(); }
    /// Signed curvature; > 0 everywhere for valid (counterclockwise, strictly
    /// convex) shapes.
    double curvature(double s) const;
    Vec2 anchor() const { return pose.apply_point(shape->anchor2()); }
};

/// Outward unit normal and its counterclockwise perpendicular at parameter s.
/// Throws GeometryError if the curvature at s is not positive.
struct NormalFrame {
    Vec2 n;
    Vec2 n_perp;
};
NormalFrame normal_at(const PlacedCurve& curve, double s);

/// Inverse Gauss map: the boundary parameter whose outward normal equals m.
/// 1D root-finding on the parameter; NumericError on convergence failure.
double gauss_map_inverse(const PlacedCurve& curve, Vec2 m);

/// Torque indicator T(m) = (N(m) - x_B) . m_perp.
double torque_indicator(const PlacedCurve& curve, Vec2 x_barycenter, Vec2 m);

// ---------------------------------------------------------------------------
// Boundary quadrature: composite Gauss-Legendre on parameter panels.
// ---------------------------------------------------------------------------

struct BoundaryQuad2D {
    std::vector<double> params;
    std::vector<Vec2> nodes;
    std::vector<Vec2> normals;   // outward from the body
    std::vector<double> weights; // arclength measure
    double measure = 0.0;

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(i);
        return acc;
    }
};

/// Builds the rule and verifies the closed-surface invariants
/// (sum w = measure to 1e-10 rel, |sum w n| <= 1e-8 * measure).
/// panels = 0 picks the panel count by the arclength self-test at 1e-10.
BoundaryQuad2D boundary_quadrature(const PlacedCurve& curve, int panels = 0, int order = 8);

struct BoundaryQuad3D {
    std::vector<Vec3> nodes;
    std::vector<Vec3> normals;
    std::vector<double> weights;
    double measure = 0.0;

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(i);
        return acc;
    }
};

BoundaryQuad3D sphere_quadrature(Vec3 center, double radius, int n_polar = 24, int n_azimuth = 48);

// ---------------------------------------------------------------------------
// Volume quadrature over a body (polar about the anchor; Gauss radially,
// trapezoid in angle). Used for mass properties and domain splitting.
// ---------------------------------------------------------------------------

struct VolumeQuad2D {
    std::vector<Vec2> nodes;
    std::vector<double> weights;
};
VolumeQuad2D body_volume_quadrature(const PlacedCurve& curve, int n_radial = 24, int n_angular = 96);

struct VolumeQuad3D {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
};
VolumeQuad3D ball_volume_quadrature(Vec3 center, double radius, int n_radial = 24, int n_polar = 24,
                                    int n_azimuth = 48);

// ---------------------------------------------------------------------------
// Distance queries (cutoff construction, mesh filtering).
// ---------------------------------------------------------------------------

struct ClosestPoint {
    double param = 0.0;
    Vec2 point;
    double signed_distance = 0.0;  // positive outside the body
};
ClosestPoint closest_boundary_point(const PlacedCurve& curve, Vec2 x);

/// Distance from x to the closed body (0 inside).
double distance_to_body(const BodyShape& shape, const Pose2D& pose, Vec2 x);
bool point_in_body(const BodyShape& shape, const Pose2D& pose, Vec2 x);

/// Boundary parameters of `count` points equispaced in arclength.
std::vector<double> equispaced_params(const PlacedCurve& curve, int count);

/// Enclosed area of the body (Green's theorem for curves, exact for balls).
double body_area(const BodyShape& shape);

}  // namespace rigidflow
