#include "rigidflow/domain_quadrature.hpp"

#include <cmath>

#include "rigidflow/quadrature.hpp"

namespace rigidflow {

FluidDomainQuadrature fluid_domain_quadrature(const Cavity& cavity, const std::vector<BodyShape>& shapes,
                                              const std::vector<Pose2D>& poses, double panel_size,
                                              int gauss_order) {
    if (shapes.size() != poses.size())
        throw InputError("fluid_domain_quadrature: shape/pose count mismatch");
    FluidDomainQuadrature q;

    if (cavity.kind == Cavity::Kind::Box) {
        int nx = std::max(2, static_cast<int>(std::ceil((cavity.hi.x - cavity.lo.x) / panel_size)));
        int ny = std::max(2, static_cast<int>(std::ceil((cavity.hi.y - cavity.lo.y) / panel_size)));
        QuadRule1D rx = composite_gauss(gauss_order, nx, cavity.lo.x, cavity.hi.x);
        QuadRule1D ry = composite_gauss(gauss_order, ny, cavity.lo.y, cavity.hi.y);
        q.cavity_nodes.reserve(rx.nodes.size() * ry.nodes.size());
        for (std::size_t i = 0; i < rx.nodes.size(); ++i)
            for (std::size_t j = 0; j < ry.nodes.size(); ++j) {
                q.cavity_nodes.push_back({rx.nodes[i], ry.nodes[j]});
                q.cavity_weights.push_back(rx.weights[i] * ry.weights[j]);
            }
    } else {
        // Polar rule about the disk center; angular resolution matched to the
        // panel size at the rim.
        int n_ang = std::max(32, static_cast<int>(std::ceil(kTwoPi * cavity.radius / panel_size)));
        int n_rad = std::max(8, static_cast<int>(std::ceil(cavity.radius / panel_size)) * gauss_order);
        QuadRule1D ang = periodic_trapezoid(n_ang, kTwoPi);
        QuadRule1D rad = gauss_legendre(n_rad, 0.0, cavity.radius);
        for (int j = 0; j < n_ang; ++j) {
            double c = std::cos(ang.nodes[j]), s = std::sin(ang.nodes[j]);
            for (int i = 0; i < n_rad; ++i) {
                double r = rad.nodes[i];
                q.cavity_nodes.push_back(cavity.center + Vec2{r * c, r * s});
                q.cavity_weights.push_back(ang.weights[j] * rad.weights[i] * r);
            }
        }
    }

    double body_total = 0.0;
    for (std::size_t b = 0; b < shapes.size(); ++b) {
        PlacedCurve pc{&shapes[b], poses[b]};
        double scale = shapes[b].bounding_radius();
        int n_rad = std::max(12, static_cast<int>(std::ceil(scale / panel_size)) * gauss_order);
        int n_ang = std::max(48, static_cast<int>(std::ceil(kTwoPi * scale / panel_size)) * 2);
        VolumeQuad2D vq = body_volume_quadrature(pc, n_rad, n_ang);
        q.body_nodes.push_back(std::move(vq.nodes));
        q.body_weights.push_back(std::move(vq.weights));
        body_total += body_area(shapes[b]);
    }
    q.fluid_area = cavity.area() - body_total;
    return q;
}

namespace {

// Boundary radius about the anchor along direction theta (bisection; the
// angle of gamma(s) - anchor is monotone for strictly convex bodies).
double boundary_radius(const PlacedCurve& pc, Vec2 anchor, double ct, double st) {
    if (pc.shape->kind == BodyShape::Kind::Ball2D) return pc.shape->radius;
    Vec2 u{ct, st};
    const int scan = 256;
    double prev_cr = (pc.point(0.0) - anchor).cross(u);
    double prev_s = 0.0;
    double s_lo = 0.0, s_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= scan; ++i) {
        double s = static_cast<double>(i) / scan;
        Vec2 r = pc.point(s >= 1.0 ? s - 1.0 : s) - anchor;
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
    if (!found) throw NumericError("body_ring_rule: ray bracket failed");
    double cr_lo = (pc.point(s_lo - std::floor(s_lo)) - anchor).cross(u);
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (s_lo + s_hi);
        double cr = (pc.point(mid - std::floor(mid)) - anchor).cross(u);
        if (cr_lo * cr <= 0.0) {
            s_hi = mid;
        } else {
            s_lo = mid;
            cr_lo = (pc.point(s_lo - std::floor(s_lo)) - anchor).cross(u);
        }
    }
    double s = 0.5 * (s_lo + s_hi);
    return (pc.point(s - std::floor(s)) - anchor).norm();
}

}  // namespace

PolarRule body_ring_rule(const BodyShape& shape, const Pose2D& pose,
                         const std::vector<double>& signed_breaks, int n_angular, int gl_order,
                         int radial_subpanels) {
    PlacedCurve pc{&shape, pose};
    Vec2 anchor = pc.anchor();
    QuadRule1D ang = periodic_trapezoid(n_angular, kTwoPi);
    QuadRule1D base = gauss_legendre(gl_order);
    PolarRule rule;
    bool is_ball = shape.kind == BodyShape::Kind::Ball2D;

    for (int j = 0; j < n_angular; ++j) {
        double ct = std::cos(ang.nodes[j]), st = std::sin(ang.nodes[j]);
        Vec2 u{ct, st};
        double R = boundary_radius(pc, anchor, ct, st);
        // signed distance to the body along this ray is increasing in r
        auto radius_at_distance = [&](double d) {
            if (is_ball) return shape.radius + d;
            double lo = d <= 0.0 ? 0.0 : R;
            double hi = d <= 0.0 ? R : R + 2.0 * std::abs(d) + 1e-3;
            for (int guard = 0; guard < 40; ++guard) {
                if (closest_boundary_point(pc, anchor + hi * u).signed_distance >= d) break;
                hi += std::abs(d) + 1e-3;
            }
            for (int it = 0; it < 50; ++it) {
                double mid = 0.5 * (lo + hi);
                if (closest_boundary_point(pc, anchor + mid * u).signed_distance < d)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        };
        std::vector<double> edges{0.0};
        for (double d : signed_breaks) {
            if (d == 0.0) {
                edges.push_back(R);
                continue;
            }
            double r = radius_at_distance(d);
            if (r > 1e-9) edges.push_back(r);
        }
        std::sort(edges.begin(), edges.end());
        for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
            double a = edges[seg], b = edges[seg + 1];
            if (b - a < 1e-14) continue;
            int sub = radial_subpanels;
            // the interior disk segment is long; keep panels comparable
            if (b - a > 0.5 * R) sub = std::max(sub, 4);
            for (int p = 0; p < sub; ++p) {
                double pa = a + (b - a) * p / sub;
                double pb = a + (b - a) * (p + 1) / sub;
                double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
                for (int g = 0; g < gl_order; ++g) {
                    double r = mid + half * base.nodes[g];
                    rule.nodes.push_back(anchor + Vec2{r * ct, r * st});
                    rule.weights.push_back(ang.weights[j] * half * base.weights[g] * r);
                }
            }
        }
    }
    return rule;
}

}  // namespace rigidflow
