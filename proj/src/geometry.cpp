#include "rigidflow/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "rigidflow/quadrature.hpp"

namespace rigidflow {

// --------------------------------------------------------------------------
// Cavity
// --------------------------------------------------------------------------

Cavity Cavity::box(Vec2 lo, Vec2 hi) {
    if (!(lo.x < hi.x && lo.y < hi.y)) throw GeometryError("cavity box: lo must be < hi componentwise");
    Cavity c;
    c.kind = Kind::Box;
    c.lo = lo;
    c.hi = hi;
    return c;
}

Cavity Cavity::disk(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw GeometryError("cavity disk: radius must be > 0");
    Cavity c;
    c.kind = Kind::Disk;
    c.center = center;
    c.radius = radius;
    return c;
}

double Cavity::area() const {
    if (kind == Kind::Box) return (hi.x - lo.x) * (hi.y - lo.y);
    return kPi * radius * radius;
}

double Cavity::wall_distance(Vec2 x) const {
    if (kind == Kind::Box) {
        double d = std::min(std::min(x.x - lo.x, hi.x - x.x), std::min(x.y - lo.y, hi.y - x.y));
        return d;
    }
    return radius - (x - center).norm();
}

std::pair<Vec2, Vec2> Cavity::bounding_box() const {
    if (kind == Kind::Box) return {lo, hi};
    return {center - Vec2{radius, radius}, center + Vec2{radius, radius}};
}

// --------------------------------------------------------------------------
// FourierCurve / Pose2D
// --------------------------------------------------------------------------

Vec2 FourierCurve::point(double s) const {
    double px = center.x, py = center.y;
    for (std::size_t k = 0; k < ax.size(); ++k) {
        double arg = kTwoPi * (k + 1) * s;
        double c = std::cos(arg), sn = std::sin(arg);
        px += ax[k] * c + bx[k] * sn;
        py += ay[k] * c + by[k] * sn;
    }
    return {px, py};
}

Vec2 FourierCurve::d1(double s) const {
    double px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < ax.size(); ++k) {
        double w = kTwoPi * (k + 1);
        double arg = w * s;
        double c = std::cos(arg), sn = std::sin(arg);
        px += w * (-ax[k] * sn + bx[k] * c);
        py += w * (-ay[k] * sn + by[k] * c);
    }
    return {px, py};
}

Vec2 FourierCurve::d2(double s) const {
    double px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < ax.size(); ++k) {
        double w = kTwoPi * (k + 1);
        double w2 = w * w;
        double arg = w * s;
        double c = std::cos(arg), sn = std::sin(arg);
        px += w2 * (-ax[k] * c - bx[k] * sn);
        py += w2 * (-ay[k] * c - by[k] * sn);
    }
    return {px, py};
}

Vec2 Pose2D::apply_point(Vec2 p) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {shift.x + c * p.x - s * p.y, shift.y + s * p.x + c * p.y};
}

Vec2 Pose2D::apply_vector(Vec2 v) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// --------------------------------------------------------------------------
// BodyShape
// --------------------------------------------------------------------------

namespace {

FourierCurve circle_as_curve(Vec2 center, double radius) {
    FourierCurve c;
    c.center = center;
    c.ax = {radius};
    c.bx = {0.0};
    c.ay = {0.0};
    c.by = {radius};
    return c;
}

}  // namespace

BodyShape BodyShape::ball2d(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw GeometryError("ball2d: radius must be > 0");
    BodyShape b;
    b.kind = Kind::Ball2D;
    b.center2 = center;
    b.radius = radius;
    b.curve = circle_as_curve(center, radius);
    return b;
}

BodyShape BodyShape::ball3d(Vec3 center, double radius) {
    if (!(radius > 0.0)) throw GeometryError("ball3d: radius must be > 0");
    BodyShape b;
    b.kind = Kind::Ball3D;
    b.center3 = center;
    b.radius = radius;
    return b;
}

BodyShape BodyShape::curve2d(FourierCurve curve) {
    if (curve.ax.empty()) throw GeometryError("curve2d: needs at least one harmonic");
    std::size_t k = curve.ax.size();
    if (curve.bx.size() != k || curve.ay.size() != k || curve.by.size() != k)
        throw GeometryError("curve2d: harmonic arrays must have equal length");
    BodyShape b;
    b.kind = Kind::Curve2D;
    b.curve = std::move(curve);
    // Convexity: a single non-positive curvature sample rejects the shape.
    // Sampled at 4x the default quadrature density.
    PlacedCurve pc{&b, Pose2D{}};
    const int samples = 2048;
    double orient = 0.0;
    for (int i = 0; i < samples; ++i) {
        double s = static_cast<double>(i) / samples;
        Vec2 g1 = pc.d1(s);
        if (g1.norm() < 1e-12) throw GeometryError("curve2d: singular parametrization (|gamma'| = 0)");
        double kappa = pc.curvature(s);
        if (i == 0) orient = kappa;
        if (!(kappa > 0.0))
            throw GeometryError("curve2d: not strictly convex (curvature <= 0 at s=" + std::to_string(s) + ")");
    }
    (void)orient;
    return b;
}

double BodyShape::bounding_radius() const {
    if (kind == Kind::Ball2D || kind == Kind::Ball3D) return radius;
    double sum = 0.0;
    for (std::size_t k = 0; k < curve.ax.size(); ++k)
        sum += std::hypot(curve.ax[k], curve.bx[k]) + std::hypot(curve.ay[k], curve.by[k]);
    return sum;
}

Vec2 BodyShape::anchor2() const {
    if (kind == Kind::Ball2D) return center2;
    return curve.center;
}

// --------------------------------------------------------------------------
// PlacedCurve
// --------------------------------------------------------------------------

Vec2 PlacedCurve::point(double s) const { return pose.apply_point(shape->curve.point(s)); }
Vec2 PlacedCurve::d1(double s) const { return pose.apply_vector(shape->curve.d1(s)); }
Vec2 PlacedCurve::d2(double s) const { return pose.apply_vector(shape->curve.d2(s)); }

double PlacedCurve::curvature(double s) const {
    Vec2 g1 = d1(s), g2 = d2(s);
    double sp = g1.norm();
    return g1.cross(g2) / (sp * sp * sp);
}

NormalFrame normal_at(const PlacedCurve& curve, double s) {
    double kappa = curve.curvature(s);
    if (!(kappa > 0.0))
        throw GeometryError("normal_at: curvature <= 0 at s=" + std::to_string(s));
    Vec2 t = curve.d1(s).normalized();
    // CCW parametrization: rotating the tangent clockwise points outward.
    Vec2 n{t.y, -t.x};
    return {n, n.perp()};
}

double gauss_map_inverse(const PlacedCurve& curve, Vec2 m) {
    m = m.normalized();
    // Coarse scan for a bracket where cross(n, m) changes sign and n.m > 0.
    const int scan = 512;
    double best_dot = -2.0;
    double s_lo = 0.0, s_hi = 0.0;
    bool have_bracket = false;
    double prev_cross = 0.0, prev_s = 0.0;
    auto frame = [&](double s) {
        Vec2 t = curve.d1(s).normalized();
        return Vec2{t.y, -t.x};
    };
    Vec2 n0 = frame(0.0);
    prev_cross = n0.cross(m);
    prev_s = 0.0;
    double best_s = 0.0;
    for (int i = 1; i <= scan; ++i) {
        double s = static_cast<double>(i) / scan;
        Vec2 n = frame(s >= 1.0 ? s - 1.0 : s);
        double cr = n.cross(m);
        double dt = n.dot(m);
        if (dt > best_dot) {
            best_dot = dt;
            best_s = s >= 1.0 ? s - 1.0 : s;
        }
        if (!have_bracket && prev_cross * cr <= 0.0 && dt > 0.0) {
            s_lo = prev_s;
            s_hi = s;
            have_bracket = true;
        }
        prev_cross = cr;
        prev_s = s;
    }
    if (!have_bracket) {
        // Fall back to a small bracket around the best-aligned sample.
        s_lo = best_s - 1.0 / scan;
        s_hi = best_s + 1.0 / scan;
    }
    // Bisection on cross(n(s), m), then Newton polish on the same function.
    auto cross_at = [&](double s) {
        double w = s - std::floor(s);
        return frame(w).cross(m);
    };
    double f_lo = cross_at(s_lo);
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (s_lo + s_hi);
        double f_mid = cross_at(mid);
        if (f_lo * f_mid <= 0.0) {
            s_hi = mid;
        } else {
            s_lo = mid;
            f_lo = f_mid;
        }
    }
    double s = 0.5 * (s_lo + s_hi);
    s -= std::floor(s);
    Vec2 n = frame(s);
    if ((n - m).norm() > 1e-9)
        throw NumericError("gauss_map_inverse: did not converge (|n - m| = " + std::to_string((n - m).norm()) + ")");
    return s;
}

double torque_indicator(const PlacedCurve& curve, Vec2 x_barycenter, Vec2 m) {
    double s = gauss_map_inverse(curve, m);
    Vec2 nm = curve.point(s);
    return (nm - x_barycenter).dot(m.normalized().perp());
}

// --------------------------------------------------------------------------
// Quadrature builders
// --------------------------------------------------------------------------

namespace {

BoundaryQuad2D build_boundary_rule(const PlacedCurve& curve, int panels, int order) {
    QuadRule1D rule = composite_gauss(order, panels, 0.0, 1.0);
    BoundaryQuad2D q;
    std::size_t n = rule.nodes.size();
    q.params.resize(n);
    q.nodes.resize(n);
    q.normals.resize(n);
    q.weights.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = rule.nodes[i];
        Vec2 g1 = curve.d1(s);
        double sp = g1.norm();
        q.params[i] = s;
        q.nodes[i] = curve.point(s);
        Vec2 t = g1 / sp;
        q.normals[i] = {t.y, -t.x};
        q.weights[i] = rule.weights[i] * sp;
        total += q.weights[i];
    }
    q.measure = total;
    return q;
}

}  // namespace

BoundaryQuad2D boundary_quadrature(const PlacedCurve& curve, int panels, int order) {
    // Convexity spot-check at 4x the quadrature density.
    int probe_panels = panels > 0 ? panels : 32;
    int dense = 4 * probe_panels * order;
    for (int i = 0; i < dense; ++i) {
        double s = static_cast<double>(i) / dense;
        if (!(curve.curvature(s) > 0.0))
            throw GeometryError("boundary_quadrature: non-convex curve at s=" + std::to_string(s));
    }

    BoundaryQuad2D q;
    if (panels > 0) {
        q = build_boundary_rule(curve, panels, order);
    } else {
        // Panel count by arclength self-test: doubling must agree to 1e-10.
        int p = 16;
        q = build_boundary_rule(curve, p, order);
        for (int round = 0; round < 6; ++round) {
            BoundaryQuad2D fine = build_boundary_rule(curve, 2 * p, order);
            if (std::abs(fine.measure - q.measure) <= 1e-10 * fine.measure) {
                q = std::move(fine);
                break;
            }
            p *= 2;
            q = std::move(fine);
        }
    }

    double analytic = -1.0;
    if (curve.shape->kind == BodyShape::Kind::Ball2D) analytic = kTwoPi * curve.shape->radius;
    if (analytic > 0.0 && std::abs(q.measure - analytic) > 1e-10 * analytic)
        throw GeometryError("boundary_quadrature: arclength disagrees with analytic measure");

    Vec2 nsum{0.0, 0.0};
    for (std::size_t i = 0; i < q.nodes.size(); ++i) nsum += q.normals[i] * q.weights[i];
    if (nsum.norm() > 1e-8 * q.measure)
        throw GeometryError("boundary_quadrature: closed-surface identity violated (integral of n != 0)");
    return q;
}

BoundaryQuad3D sphere_quadrature(Vec3 center, double radius, int n_polar, int n_azimuth) {
    if (!(radius > 0.0)) throw GeometryError("sphere_quadrature: radius must be > 0");
    QuadRule1D polar = gauss_legendre(n_polar, -1.0, 1.0);       // u = cos(theta)
    QuadRule1D azim = periodic_trapezoid(n_azimuth, kTwoPi);     // phi
    BoundaryQuad3D q;
    q.nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
    for (int i = 0; i < n_polar; ++i) {
        double u = polar.nodes[i];
        double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int j = 0; j < n_azimuth; ++j) {
            double phi = azim.nodes[j];
            Vec3 n{su * std::cos(phi), su * std::sin(phi), u};
            q.nodes.push_back(center + n * radius);
            q.normals.push_back(n);
            q.weights.push_back(polar.weights[i] * azim.weights[j] * radius * radius);
        }
    }
    q.measure = 4.0 * kPi * radius * radius;
    double wsum = 0.0;
    Vec3 nsum{0, 0, 0};
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        wsum += q.weights[i];
        nsum += q.normals[i] * q.weights[i];
    }
    if (std::abs(wsum - q.measure) > 1e-10 * q.measure)
        throw GeometryError("sphere_quadrature: weight sum disagrees with 4 pi r^2");
    if (nsum.norm() > 1e-8 * q.measure)
        throw GeometryError("sphere_quadrature: closed-surface identity violated");
    return q;
}

// --------------------------------------------------------------------------
// Volume quadrature
// --------------------------------------------------------------------------

namespace {

// Radius of the body boundary along direction u from the anchor.
double ray_radius(const PlacedCurve& curve, Vec2 anchor, Vec2 u) {
    if (curve.shape->kind == BodyShape::Kind::Ball2D) {
        // anchor == center for balls
        return curve.shape->radius;
    }
    // The angle of gamma(s) - anchor is monotone for a strictly convex curve
    // about an interior anchor; bracket by coarse scan, then bisect on the
    // cross product.
    const int scan = 256;
    double prev_cr = (curve.point(0.0) - anchor).cross(u);
    double prev_s = 0.0;
    double s_lo = 0.0, s_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= scan; ++i) {
        double s = static_cast<double>(i) / scan;
        Vec2 r = curve.point(s >= 1.0 ? s - 1.0 : s) - anchor;
        double cr = r.cross(u);
        if (prev_cr * cr <= 0.0 && r.dot(u) > 0.0) {
            s_lo = prev_s;
            s_hi = s;
            found = true;
            break;
        }
        prev_cr = cr;
        prev_s = s;
    }
    if (!found) throw NumericError("ray_radius: no bracket found (anchor outside body?)");
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (s_lo + s_hi);
        double w = mid - std::floor(mid);
        double cr = (curve.point(w) - anchor).cross(u);
        double cr_lo = (curve.point(s_lo - std::floor(s_lo)) - anchor).cross(u);
        if (cr_lo * cr <= 0.0)
            s_hi = mid;
        else
            s_lo = mid;
    }
    double s = 0.5 * (s_lo + s_hi);
    return (curve.point(s - std::floor(s)) - anchor).norm();
}

}  // namespace

VolumeQuad2D body_volume_quadrature(const PlacedCurve& curve, int n_radial, int n_angular) {
    Vec2 anchor = curve.anchor();
    QuadRule1D ang = periodic_trapezoid(n_angular, kTwoPi);
    QuadRule1D rad = gauss_legendre(n_radial, 0.0, 1.0);
    VolumeQuad2D q;
    q.nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    for (int j = 0; j < n_angular; ++j) {
        double theta = ang.nodes[j];
        Vec2 u{std::cos(theta), std::sin(theta)};
        double R = ray_radius(curve, anchor, u);
        for (int i = 0; i < n_radial; ++i) {
            double r = rad.nodes[i] * R;
            q.nodes.push_back(anchor + u * r);
            q.weights.push_back(ang.weights[j] * rad.weights[i] * R * r);
        }
    }
    return q;
}

VolumeQuad3D ball_volume_quadrature(Vec3 center, double radius, int n_radial, int n_polar, int n_azimuth) {
    QuadRule1D rad = gauss_legendre(n_radial, 0.0, radius);
    QuadRule1D polar = gauss_legendre(n_polar, -1.0, 1.0);
    QuadRule1D azim = periodic_trapezoid(n_azimuth, kTwoPi);
    VolumeQuad3D q;
    q.nodes.reserve(static_cast<std::size_t>(n_radial) * n_polar * n_azimuth);
    for (int i = 0; i < n_radial; ++i) {
        double r = rad.nodes[i];
        double wr = rad.weights[i] * r * r;
        for (int j = 0; j < n_polar; ++j) {
            double u = polar.nodes[j];
            double su = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int k = 0; k < n_azimuth; ++k) {
                double phi = azim.nodes[k];
                Vec3 dir{su * std::cos(phi), su * std::sin(phi), u};
                q.nodes.push_back(center + dir * r);
                q.weights.push_back(wr * polar.weights[j] * azim.weights[k]);
            }
        }
    }
    return q;
}

// --------------------------------------------------------------------------
// Distance queries
// --------------------------------------------------------------------------

ClosestPoint closest_boundary_point(const PlacedCurve& curve, Vec2 x) {
    if (curve.shape->kind == BodyShape::Kind::Ball2D) {
        Vec2 c = curve.pose.apply_point(curve.shape->center2);
        Vec2 d = x - c;
        double r = d.norm();
        ClosestPoint cp;
        if (r < 1e-14) {
            cp.param = 0.0;
            cp.point = c + Vec2{curve.shape->radius, 0.0};
            cp.signed_distance = -curve.shape->radius;
            return cp;
        }
        double theta = std::atan2(d.y, d.x);
        // world parameter: account for the pose rotation
        double s = (theta - curve.pose.angle) / kTwoPi;
        s -= std::floor(s);
        cp.param = s;
        cp.point = c + d * (curve.shape->radius / r);
        cp.signed_distance = r - curve.shape->radius;
        return cp;
    }
    // Coarse scan, then Newton on (x - gamma(s)) . gamma'(s) = 0.
    const int scan = 128;
    double best_s = 0.0;
    double best_d = 1e300;
    for (int i = 0; i < scan; ++i) {
        double s = static_cast<double>(i) / scan;
        double d = (x - curve.point(s)).norm2();
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    double s = best_s;
    for (int it = 0; it < 40; ++it) {
        Vec2 g = curve.point(s), g1 = curve.d1(s), g2 = curve.d2(s);
        Vec2 r = x - g;
        double f = r.dot(g1);
        double fp = -g1.dot(g1) + r.dot(g2);
        if (std::abs(fp) < 1e-30) break;
        double step = f / fp;
        // keep the update within the scan cell
        step = std::clamp(step, -2.0 / scan, 2.0 / scan);
        s -= step;
        if (std::abs(step) < 1e-14) break;
    }
    s -= std::floor(s);
    ClosestPoint cp;
    cp.param = s;
    cp.point = curve.point(s);
    Vec2 t = curve.d1(s).normalized();
    Vec2 n{t.y, -t.x};
    cp.signed_distance = (x - cp.point).dot(n);
    // For points far from the foot the normal projection underestimates;
    // fall back to the Euclidean distance with the normal's sign.
    double eu = (x - cp.point).norm();
    cp.signed_distance = cp.signed_distance >= 0.0 ? eu : -eu;
    return cp;
}

double distance_to_body(const BodyShape& shape, const Pose2D& pose, Vec2 x) {
    if (shape.kind == BodyShape::Kind::Ball2D) {
        Vec2 c = pose.apply_point(shape.center2);
        return std::max(0.0, (x - c).norm() - shape.radius);
    }
    PlacedCurve pc{&shape, pose};
    ClosestPoint cp = closest_boundary_point(pc, x);
    return std::max(0.0, cp.signed_distance);
}

bool point_in_body(const BodyShape& shape, const Pose2D& pose, Vec2 x) {
    if (shape.kind == BodyShape::Kind::Ball2D) {
        Vec2 c = pose.apply_point(shape.center2);
        return (x - c).norm() <= shape.radius;
    }
    PlacedCurve pc{&shape, pose};
    return closest_boundary_point(pc, x).signed_distance <= 0.0;
}

std::vector<double> equispaced_params(const PlacedCurve& curve, int count) {
    // Cumulative arclength table on a fine grid, inverted by linear search +
    // local refinement.
    const int fine = std::max(1024, 8 * count);
    std::vector<double> cumulative(fine + 1, 0.0);
    double ds = 1.0 / fine;
    QuadRule1D gl = gauss_legendre(4, 0.0, ds);
    for (int i = 0; i < fine; ++i) {
        double seg = 0.0;
        for (std::size_t g = 0; g < gl.nodes.size(); ++g)
            seg += gl.weights[g] * curve.speed(i * ds + gl.nodes[g]);
        cumulative[i + 1] = cumulative[i] + seg;
    }
    double total = cumulative[fine];
    std::vector<double> params(count);
    int cell = 0;
    for (int k = 0; k < count; ++k) {
        double target = total * k / count;
        while (cell < fine - 1 && cumulative[cell + 1] < target) ++cell;
        double frac = (target - cumulative[cell]) / std::max(1e-300, cumulative[cell + 1] - cumulative[cell]);
        params[k] = (cell + frac) * ds;
    }
    return params;
}

double body_area(const BodyShape& shape) {
    if (shape.kind == BodyShape::Kind::Ball2D) return kPi * shape.radius * shape.radius;
    if (shape.kind == BodyShape::Kind::Ball3D) return 4.0 / 3.0 * kPi * shape.radius * shape.radius * shape.radius;
    // Green's theorem: A = 1/2 |oint x cross dx|; spectrally accurate on the
    // periodic parametrization.
    PlacedCurve pc{&shape, Pose2D{}};
    QuadRule1D rule = periodic_trapezoid(2048, 1.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double s = rule.nodes[i];
        acc += rule.weights[i] * pc.point(s).cross(pc.d1(s));
    }
    return 0.5 * std::abs(acc);
}

}  // namespace rigidflow
