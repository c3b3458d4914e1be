#include "rigidflow/pressure_synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "rigidflow/quadrature.hpp"

namespace rigidflow {

namespace {

// Map s into the unwrapped window [s0 - 0.5, s0 + 0.5).
double unwrap_param(double s, double s0) {
    double d = s - s0;
    d -= std::round(d);
    return s0 + d;
}

bool in_exclusion(double s, const std::vector<std::pair<double, double>>& arcs) {
    double w = s - std::floor(s);
    for (auto [a, b] : arcs) {
        double lo = a - std::floor(a), hi = b - std::floor(b);
        if (lo <= hi) {
            if (w >= lo && w <= hi) return true;
        } else {
            if (w >= lo || w <= hi) return true;
        }
    }
    return false;
}

}  // namespace

// --------------------------------------------------------------------------
// CutoffField
// --------------------------------------------------------------------------

double CutoffField::eval(Vec2 x) const {
    double r = (x - anchor).norm();
    if (r >= r_max + margin) return 0.0;
    if (r <= r_min) return 1.0;
    double d = distance_to_body(*shape, pose, x);
    return smoothstep_quintic(1.0 - d / margin);
}

CutoffField make_cutoff(const BodyShape& shape, const Pose2D& pose, double margin, const Cavity& cavity,
                        const std::vector<const BodyShape*>& others, const std::vector<Pose2D>& other_poses) {
    if (!(margin > 0.0)) throw GeometryError("make_cutoff: margin must be > 0");
    PlacedCurve pc{&shape, pose};
    const int probes = 128;
    CutoffField field;
    field.shape = &shape;
    field.pose = pose;
    field.margin = margin;
    field.anchor = pc.anchor();
    field.r_min = 1e300;
    field.r_max = 0.0;
    for (int i = 0; i < probes; ++i) {
        double s = static_cast<double>(i) / probes;
        Vec2 x = pc.point(s);
        double r = (x - field.anchor).norm();
        field.r_min = std::min(field.r_min, r);
        field.r_max = std::max(field.r_max, r);
        if (cavity.wall_distance(x) <= margin)
            throw GeometryError("make_cutoff: body within margin of the cavity wall");
        for (std::size_t b = 0; b < others.size(); ++b) {
            if (distance_to_body(*others[b], other_poses[b], x) <= margin)
                throw GeometryError("make_cutoff: bodies within margin of each other");
        }
    }
    field.r_min = std::max(0.0, field.r_min - 1e-9);
    return field;
}

// --------------------------------------------------------------------------
// PressureAtom
// --------------------------------------------------------------------------

double PressureAtom::chart_xi(double s) const {
    PlacedCurve pc{shape, pose};
    return (pc.point(s) - x0).dot(e1);
}

namespace {

// Chart slope factor H = upsilon' / |gamma'| = sine of the tangent angle.
double chart_H(const PressureAtom& atom, double s) {
    PlacedCurve pc{atom.shape, atom.pose};
    Vec2 g1 = pc.d1(s);
    return g1.dot(atom.e2) / g1.norm();
}

// Invert xi(s) on the monotone chart interval.
double chart_param_for_xi(const PressureAtom& atom, double xi_target) {
    double lo = atom.s_lo, hi = atom.s_hi;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (atom.chart_xi(mid) < xi_target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bump_even(double u) {
    // even C^2 bump on (-1, 1)
    double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    return w * w * w;
}

}  // namespace

double PressureAtom::boundary_value(double s) const {
    if (coefficient == 0.0) return 0.0;
    double su = unwrap_param(s, s0);
    if (su <= s_lo || su >= s_hi) return 0.0;
    double xi = chart_xi(su);
    double u = xi / chart_halfwidth;
    if (std::abs(u) >= 1.0) return 0.0;
    double f;
    if (std::abs(u) < 1e-7) {
        f = 1.0;
    } else {
        double h_here = chart_H(*this, su);
        double s_mirror = chart_param_for_xi(*this, -xi);
        double h_mirror = chart_H(*this, s_mirror);
        double ratio = -h_mirror / h_here;
        if (!(ratio > 0.0)) throw NumericError("force atom: chart slope lost its sign");
        f = std::sqrt(ratio);
    }
    PlacedCurve pc{shape, pose};
    Vec2 g1 = pc.d1(su);
    double xi_prime_over_speed = g1.dot(e1) / g1.norm();  // = 1 / sqrt(1 + h'^2)
    return coefficient * bump_even(u) * f * xi_prime_over_speed;
}

double PressureAtom::eval(Vec2 x) const {
    if (coefficient == 0.0) return 0.0;
    if ((x - x0).norm() > reach) return 0.0;
    PlacedCurve pc{shape, pose};
    ClosestPoint cp = closest_boundary_point(pc, x);
    double base = boundary_value(cp.param);
    if (base == 0.0) return 0.0;
    return base * smoothstep_quintic(1.0 - std::abs(cp.signed_distance) / collar_width);
}

namespace {

struct ChartFrame {
    Vec2 x0, e1, e2;
};

ChartFrame chart_frame(const PlacedCurve& pc, double s0) {
    NormalFrame nf = normal_at(pc, s0);
    ChartFrame cf;
    cf.x0 = pc.point(s0);
    cf.e2 = -nf.n;       // into the body; the boundary graph is h >= 0
    cf.e1 = nf.n_perp;   // tangent
    return cf;
}

struct MarchResult {
    double xi_extent = 0.0;     // admissible |xi| on this side
    double param_extent = 0.0;  // |s - s0| reached while admissible
};

// March outward while the boundary stays a steep-free graph over e1 and the
// optional predicates hold. xi' = gamma'.e1 stays positive on both sides of a
// valid chart; the tangent-angle bound keeps it a single-valued graph.
MarchResult march_side(const PlacedCurve& pc, const ChartFrame& cf, double s0, int dir,
                       const AtomOptions& opts) {
    const double ds = 1.0 / 2048.0;
    MarchResult res;
    for (int i = 1; i <= 1024; ++i) {
        double s = s0 + dir * i * ds;
        Vec2 g1 = pc.d1(s);
        double xi_prime = g1.dot(cf.e1);
        if (xi_prime <= 0.5 * g1.norm()) break;  // tangent angle beyond 60 deg
        if (in_exclusion(s, opts.exclusion_arcs)) break;
        if (opts.restrict_lever_sign) {
            Vec2 t = g1.normalized();
            Vec2 n{t.y, -t.x};
            double lever = (pc.point(s) - opts.barycenter).cross(n);
            if (lever * opts.lever_sign <= 0.0) break;
        }
        double xi = (pc.point(s) - cf.x0).dot(cf.e1);
        res.xi_extent = std::max(res.xi_extent, std::abs(xi));
        res.param_extent = i * ds;
    }
    return res;
}

PressureAtom try_build_atom(const BodyShape& shape, const Pose2D& pose, double s0, double force_magnitude,
                            double R, const MarchResult& side_p, const MarchResult& side_m,
                            const AtomOptions& opts) {
    PlacedCurve pc{&shape, pose};
    ChartFrame cf = chart_frame(pc, s0);

    PressureAtom atom;
    atom.shape = &shape;
    atom.pose = pose;
    atom.s0 = s0;
    atom.x0 = cf.x0;
    atom.e1 = cf.e1;
    atom.e2 = cf.e2;
    atom.chart_halfwidth = R;
    atom.collar_width = opts.collar_width;

    // Bracket s with xi(s) = +-R inside the marched region, where xi is
    // monotone in s.
    auto side_param = [&](int dir, double extent) {
        double lo = s0, hi = s0 + dir * extent;
        double xi_hi = (pc.point(hi) - cf.x0).dot(cf.e1) * dir;
        if (xi_hi < R) throw NumericError("force atom: chart bracket collapsed");
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            double xi = (pc.point(mid) - cf.x0).dot(cf.e1) * dir;
            if (xi < R)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double sp = side_param(+1, side_p.param_extent);
    double sm = side_param(-1, side_m.param_extent);
    atom.s_lo = std::min(sm, sp);
    atom.s_hi = std::max(sm, sp);
    if (!(atom.s_lo < s0 && s0 < atom.s_hi)) throw NumericError("force atom: degenerate chart interval");

    // Wrench of the unscaled profile.
    atom.coefficient = 1.0;
    QuadRule1D rule = composite_gauss(8, opts.quad_panels, atom.s_lo, atom.s_hi);
    Vec2 fhat{0.0, 0.0};
    double that = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double s = rule.nodes[i];
        double val = atom.boundary_value(s);
        if (val < 0.0) throw NumericError("force atom: negative profile sample");
        Vec2 g1 = pc.d1(s);
        Vec2 t = g1.normalized();
        Vec2 n{t.y, -t.x};
        double dS = rule.weights[i] * g1.norm();
        fhat += val * dS * n;
        that += val * dS * (pc.point(s) - opts.barycenter).cross(n);
    }
    Vec2 n_axis = -cf.e2;
    double c_val = fhat.dot(n_axis);
    if (!(c_val > 0.0)) throw NumericError("force atom: nonpositive normalization integral");
    double tangential = std::abs(fhat.dot(cf.e1));
    if (tangential > 1e-8 * c_val) throw NumericError("force atom: tangential leak above tolerance");

    atom.coefficient = force_magnitude / c_val;
    atom.force = fhat * atom.coefficient;
    atom.torque = that * atom.coefficient;

    double reach = 0.0;
    reach = std::max(reach, (pc.point(atom.s_lo) - cf.x0).norm());
    reach = std::max(reach, (pc.point(atom.s_hi) - cf.x0).norm());
    atom.reach = reach + opts.collar_width + 1e-12;
    return atom;
}

}  // namespace

PressureAtom force_atom_2d(const BodyShape& shape, const Pose2D& pose, double s0, double force_magnitude,
                           const AtomOptions& opts) {
    if (force_magnitude < 0.0) throw InputError("force_atom_2d: magnitude must be >= 0");
    PlacedCurve pc{&shape, pose};
    ChartFrame cf = chart_frame(pc, s0);
    if (force_magnitude == 0.0) {
        PressureAtom atom;
        atom.shape = &shape;
        atom.pose = pose;
        atom.s0 = s0;
        atom.s_lo = s0;
        atom.s_hi = s0;
        atom.x0 = cf.x0;
        atom.e1 = cf.e1;
        atom.e2 = cf.e2;
        atom.coefficient = 0.0;
        atom.collar_width = opts.collar_width;
        return atom;
    }

    MarchResult side_p = march_side(pc, cf, s0, +1, opts);
    MarchResult side_m = march_side(pc, cf, s0, -1, opts);
    double R = 0.8 * std::min(side_p.xi_extent, side_m.xi_extent);
    if (opts.chart_cap > 0.0) R = std::min(R, opts.chart_cap);
    if (!(R > 0.0)) throw NumericError("force_atom_2d: no admissible chart around x0");

    for (int attempt = 0; attempt <= 6; ++attempt) {
        try {
            return try_build_atom(shape, pose, s0, force_magnitude, R, side_p, side_m, opts);
        } catch (const NumericError&) {
            if (attempt == 6) throw;
            R *= 0.5;
        }
    }
    throw NumericError("force_atom_2d: construction failed after retries");
}

// --------------------------------------------------------------------------
// Torque pressure
// --------------------------------------------------------------------------

TorquePressure torque_pressure_2d(const BodyShape& shape, const Pose2D& pose, Vec2 x_barycenter,
                                  int torque_sign, const TorqueOptions& opts) {
    if (torque_sign != 1 && torque_sign != -1) throw InputError("torque_pressure_2d: sign must be +-1");
    PlacedCurve pc{&shape, pose};
    double diameter = 2.0 * shape.bounding_radius();

    auto build_for_grid = [&](int grid) -> TorquePressure {
        std::vector<Vec2> dirs(grid);
        std::vector<double> tvals(grid);
        double max_abs_t = 0.0;
        for (int i = 0; i < grid; ++i) {
            double a = kTwoPi * i / grid;
            dirs[i] = {std::cos(a), std::sin(a)};
            tvals[i] = torque_indicator(pc, x_barycenter, dirs[i]);
            max_abs_t = std::max(max_abs_t, std::abs(tvals[i]));
        }
        if (max_abs_t <= opts.circle_tol_factor * diameter)
            throw TorqueUnreachableError("circle with centered barycenter (max |T| = " +
                                         std::to_string(max_abs_t) + ")");

        // Atoms located where T has sign -torque_sign give lever torque of
        // the requested sign.
        double family = -static_cast<double>(torque_sign);
        double best = -1e300;
        int best_idx = -1;
        for (int i = 0; i < grid; ++i) {
            double v = family * tvals[i];
            if (v > best) {
                best = v;
                best_idx = i;
            }
        }
        if (best <= 0.2 * max_abs_t)
            throw NumericError("torque_pressure_2d: requested torque family has no strong direction");

        AtomOptions aopts = opts.atom;
        aopts.restrict_lever_sign = true;
        aopts.lever_sign = torque_sign;
        aopts.barycenter = x_barycenter;

        std::vector<std::pair<Vec2, double>> picks;  // (direction, coefficient)
        int anti = (best_idx + grid / 2) % grid;
        if (family * tvals[anti] > 0.2 * best) {
            picks.push_back({dirs[best_idx], 0.5});
            picks.push_back({dirs[anti], 0.5});
        } else {
            // Three directions with positive hull containing the origin.
            std::vector<int> cand;
            for (int i = 0; i < grid; ++i)
                if (family * tvals[i] >= 0.2 * best) cand.push_back(i);
            const double ca = 1.0 / 3.0;
            Vec2 ma = dirs[best_idx];
            double best_quality = 0.0;
            int pick_b = -1, pick_c = -1;
            double cb_best = 0.0, cc_best = 0.0;
            for (int b : cand) {
                for (int c : cand) {
                    if (b == c) continue;
                    Vec2 mb = dirs[b], mc = dirs[c];
                    double det = mb.cross(mc);
                    if (std::abs(det) < 1e-9) continue;
                    Vec2 rhs = -ca * ma;
                    double cb = rhs.cross(mc) / det;
                    double cc = mb.cross(rhs) / det;
                    if (cb <= 0.0 || cc <= 0.0) continue;
                    double quality = std::min(cb, cc) / std::max({cb, cc, ca});
                    if (quality > best_quality) {
                        best_quality = quality;
                        pick_b = b;
                        pick_c = c;
                        cb_best = cb;
                        cc_best = cc;
                    }
                }
            }
            if (pick_b < 0)
                throw NumericError("torque_pressure_2d: zero-force coefficient system infeasible");
            picks.push_back({ma, ca});
            picks.push_back({dirs[pick_b], cb_best});
            picks.push_back({dirs[pick_c], cc_best});
        }

        double budget = 0.0;
        for (auto& p : picks) budget += p.second;
        TorquePressure tp;
        tp.budget = budget;
        for (auto& [m, coeff] : picks) {
            double s = gauss_map_inverse(pc, m);
            tp.atoms.push_back(force_atom_2d(shape, pose, s, coeff, aopts));
        }
        for (const auto& a : tp.atoms) {
            tp.force_residual += a.force;
            tp.torque += a.torque;
        }
        if (tp.force_residual.norm() > 1e-8 * budget)
            throw NumericError("torque_pressure_2d: net force above tolerance");
        if (std::abs(tp.torque) < opts.torque_fraction * max_abs_t * budget)
            throw NumericError("torque_pressure_2d: torque below the configured fraction");
        if (tp.torque * torque_sign <= 0.0)
            throw NumericError("torque_pressure_2d: torque has the wrong sign");
        return tp;
    };

    try {
        return build_for_grid(opts.direction_grid);
    } catch (const TorqueUnreachableError&) {
        throw;
    } catch (const NumericError&) {
        // one grid refinement, then give up
        return build_for_grid(2 * opts.direction_grid);
    }
}

// --------------------------------------------------------------------------
// BodyPressureField / SlicePressure
// --------------------------------------------------------------------------

double BodyPressureField::eval(Vec2 x) const {
    double acc = 0.0;
    if (ball_coeff != 0.0) acc += ball_coeff * (ball_eta_dot.dot(x - ball_center) + ball_shift);
    for (const auto& a : atoms) acc += a.eval(x);
    if (acc == 0.0) return 0.0;
    return acc * cutoff.eval(x);
}

double BodyPressureField::boundary_value(double s, const PlacedCurve& curve) const {
    double acc = 0.0;
    if (ball_coeff != 0.0) {
        Vec2 x = curve.point(s);
        acc += ball_coeff * (ball_eta_dot.dot(x - ball_center) + ball_shift);
    }
    for (const auto& a : atoms) acc += a.boundary_value(s);
    return acc;  // sigma_U == 1 on the boundary
}

double SlicePressure::tilde(Vec2 x) const {
    double acc = 0.0;
    for (const auto& b : bodies) acc += b.eval(x);
    return acc;
}

Vec2 SlicePressure::grad(Vec2 x, double step) const {
    double px = eval({x.x + step, x.y}) - eval({x.x - step, x.y});
    double py = eval({x.x, x.y + step}) - eval({x.x, x.y - step});
    return {px / (2.0 * step), py / (2.0 * step)};
}

BodyPressureField ball_translation_pressure(const BodyShape& shape, const Pose2D& pose, double body_mass,
                                            Vec2 eta_dot, const CutoffField& cutoff) {
    if (shape.kind != BodyShape::Kind::Ball2D)
        throw InputError("ball_translation_pressure: 2D ball shape required");
    BodyPressureField field;
    field.cutoff = cutoff;
    double speed = eta_dot.norm();
    if (speed == 0.0) return field;  // zero field before p0
    double area = body_area(shape);
    field.ball_coeff = body_mass / area;
    field.ball_eta_dot = eta_dot;
    field.ball_center = pose.apply_point(shape.center2);
    // Shift keeps the bracket nonnegative on supp sigma; constants do not
    // change the boundary force (closed-surface identity).
    field.ball_shift = speed * (shape.radius + cutoff.margin);
    return field;
}

MotionPressureResult motion_pressure_2d(const BodyShape& shape, const Pose2D& pose, Vec2 x_barycenter,
                                        Vec2 force, double torque, const CutoffField& cutoff,
                                        const TorquePressure* torque_ccw, const TorquePressure* torque_cw,
                                        const AtomOptions& atom_opts, double wrench_rel_tol) {
    MotionPressureResult out;
    out.field.cutoff = cutoff;
    PlacedCurve pc{&shape, pose};
    double diameter = 2.0 * shape.bounding_radius();

    AtomOptions aopts = atom_opts;
    aopts.barycenter = x_barycenter;

    Vec2 f_ach{0.0, 0.0};
    double t_ach = 0.0;
    double fmag = force.norm();
    if (fmag > 0.0) {
        // Two atoms at +-45 degrees from the force direction, snapped to the
        // 720-entry table; a third atom along the force if the solve ever
        // leaves the positive cone.
        const int grid = 720;
        auto snap = [&](double angle) {
            double step = kTwoPi / grid;
            double snapped = std::round(angle / step) * step;
            return Vec2{std::cos(snapped), std::sin(snapped)};
        };
        double phi = std::atan2(force.y, force.x);
        Vec2 m1 = snap(phi - kPi / 4.0), m2 = snap(phi + kPi / 4.0);
        double det = m1.cross(m2);
        double c1 = force.cross(m2) / det;
        double c2 = m1.cross(force) / det;
        std::vector<std::pair<Vec2, double>> picks;
        if (c1 > 0.0 && c2 > 0.0) {
            picks = {{m1, c1}, {m2, c2}};
        } else {
            Vec2 m0 = snap(phi);
            double half = 0.5 * fmag;
            Vec2 rest = force - half * m0;
            double cr1 = rest.cross(m2) / det;
            double cr2 = m1.cross(rest) / det;
            if (cr1 <= 0.0 || cr2 <= 0.0)
                throw NumericError("motion_pressure_2d: force decomposition infeasible");
            picks = {{m0, half}, {m1, cr1}, {m2, cr2}};
        }
        for (auto& [m, coeff] : picks) {
            double s = gauss_map_inverse(pc, m);
            out.field.atoms.push_back(force_atom_2d(shape, pose, s, coeff, aopts));
        }
        for (auto& a : out.field.atoms) {
            f_ach += a.force;
            t_ach += a.torque;
        }
    }

    double deficit = torque - t_ach;
    double torque_scale = std::max(std::abs(torque), fmag * diameter);
    if (std::abs(deficit) > wrench_rel_tol * std::max(torque_scale, 1e-30)) {
        const TorquePressure* tp = deficit > 0.0 ? torque_ccw : torque_cw;
        out.torque_repaired = deficit < 0.0;
        if (tp == nullptr || tp->atoms.empty())
            throw TorqueUnreachableError("body admits no independent torque pressure");
        double lambda = deficit / tp->torque;
        if (lambda < 0.0) throw NumericError("motion_pressure_2d: nonnegativity repair failed");
        for (const auto& a : tp->atoms) {
            PressureAtom scaled = a;
            scaled.coefficient *= lambda;
            scaled.force *= lambda;
            scaled.torque *= lambda;
            out.field.atoms.push_back(scaled);
            f_ach += scaled.force;
            t_ach += scaled.torque;
        }
    }

    out.achieved_force = f_ach;
    out.achieved_torque = t_ach;
    double fscale = std::max({fmag, std::abs(torque) / diameter, 1e-30});
    if ((f_ach - force).norm() > wrench_rel_tol * fscale * 10.0)
        throw NumericError("motion_pressure_2d: force target missed");
    if (std::abs(t_ach - torque) > wrench_rel_tol * std::max(torque_scale, 1e-30) * 10.0)
        throw NumericError("motion_pressure_2d: torque target missed");
    return out;
}

// --------------------------------------------------------------------------
// Mass offset
// --------------------------------------------------------------------------

MassOffsetResult mass_offset(const std::function<double(Vec2)>& p_tilde, const PressureLaw& law,
                             double m_fluid, const FluidDomainQuadrature& quad) {
    if (!(m_fluid > 0.0)) throw InputError("mass_offset: fluid mass must be > 0");

    auto mass_at = [&](double p0) {
        return quad.integrate([&](Vec2 x) {
            double p = p_tilde(x) + p0;
            return p > 0.0 ? law.density(p) : 0.0;
        });
    };

    // Feasibility: the mass at p0 -> 0+ bounds m_fluid from below.
    double m_floor = mass_at(1e-300);
    if (m_fluid <= m_floor)
        throw InputError("mass_offset: fluid mass out of range; feasible interval is (" +
                         std::to_string(m_floor) + ", inf)");

    // Bracket upward from a pressure scale.
    double p_hi = law.pressure(m_fluid / quad.fluid_area) + 1.0;
    for (int guard = 0; guard < 200 && mass_at(p_hi) < m_fluid; ++guard) p_hi *= 2.0;
    double p_lo = 1e-300;

    for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (p_lo + p_hi);
        if (mass_at(mid) < m_fluid)
            p_lo = mid;
        else
            p_hi = mid;
    }
    double p0 = 0.5 * (p_lo + p_hi);
    // Newton polish on M(p0) - m_fluid.
    for (int it = 0; it < 8; ++it) {
        double m = mass_at(p0);
        double dm = quad.integrate([&](Vec2 x) {
            double p = p_tilde(x) + p0;
            return p > 0.0 ? law.density_derivative(p) : 0.0;
        });
        if (!(dm > 0.0)) break;
        double step = (m - m_fluid) / dm;
        double next = p0 - step;
        if (!(next > 0.0)) next = 0.5 * p0;
        p0 = next;
        if (std::abs(step) < 1e-14 * p0) break;
    }

    MassOffsetResult res;
    res.p0 = p0;
    res.residual = std::abs(mass_at(p0) - m_fluid);
    if (res.residual > 1e-10 * m_fluid)
        throw NumericError("mass_offset: root residual above 1e-10 relative");
    double min_p = 1e300;
    for (const auto& x : quad.cavity_nodes) min_p = std::min(min_p, p_tilde(x) + p0);
    res.min_pressure = std::min(min_p, p0);  // far field has p_tilde = 0
    if (!(res.min_pressure > 0.0)) throw NumericError("mass_offset: pressure not strictly positive");
    return res;
}

MassOffsetResult mass_offset(const CachedFieldSamples& samples, const PressureLaw& law, double m_fluid) {
    if (!(m_fluid > 0.0)) throw InputError("mass_offset: fluid mass must be > 0");
    auto mass_at = [&](double p0) {
        return samples.integrate_composed(
            [&](double p) { return p > 0.0 ? law.density(p) : 0.0; }, p0);
    };
    double m_floor = mass_at(1e-300);
    if (m_fluid <= m_floor)
        throw InputError("mass_offset: fluid mass out of range; feasible interval is (" +
                         std::to_string(m_floor) + ", inf)");
    double p_hi = law.pressure(m_fluid / samples.fluid_area) + 1.0;
    for (int guard = 0; guard < 200 && mass_at(p_hi) < m_fluid; ++guard) p_hi *= 2.0;
    double p_lo = 1e-300;
    for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (p_lo + p_hi);
        if (mass_at(mid) < m_fluid)
            p_lo = mid;
        else
            p_hi = mid;
    }
    double p0 = 0.5 * (p_lo + p_hi);
    for (int it = 0; it < 8; ++it) {
        double m = mass_at(p0);
        double dm = samples.integrate_composed(
            [&](double p) { return p > 0.0 ? law.density_derivative(p) : 0.0; }, p0);
        if (!(dm > 0.0)) break;
        double step = (m - m_fluid) / dm;
        double next = p0 - step;
        if (!(next > 0.0)) next = 0.5 * p0;
        p0 = next;
        if (std::abs(step) < 1e-14 * p0) break;
    }
    MassOffsetResult res;
    res.p0 = p0;
    res.residual = std::abs(mass_at(p0) - m_fluid);
    if (res.residual > 1e-10 * m_fluid)
        throw NumericError("mass_offset: root residual above 1e-10 relative");
    double min_tilde = 0.0;
    for (double v : samples.values) min_tilde = std::min(min_tilde, v);
    res.min_pressure = min_tilde + p0;
    if (!(res.min_pressure > 0.0)) throw NumericError("mass_offset: pressure not strictly positive");
    return res;
}

}  // namespace rigidflow
