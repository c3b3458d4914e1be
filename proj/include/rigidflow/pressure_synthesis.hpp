#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rigidflow/core.hpp"
#include "rigidflow/domain_quadrature.hpp"
#include "rigidflow/eos.hpp"
#include "rigidflow/geometry.hpp"

namespace rigidflow {

/// Raised when no boundary pressure can produce the requested torque
/// (homogeneous balls; offset-barycenter disks with an incompatible target).
struct TorqueUnreachableError : GeometryError {
    explicit TorqueUnreachableError(const std::string& msg) : GeometryError("torque unreachable: " + msg) {}
};

// ---------------------------------------------------------------------------
// Smooth cutoff sigma with chi_B <= sigma <= chi_U, U = {dist(x,B) < margin}.
// ---------------------------------------------------------------------------

struct CutoffField {
    const BodyShape* shape = nullptr;
    Pose2D pose;
    double margin = 0.1;
    // cached radial bounds about the anchor for quick accept/reject
    double r_min = 0.0, r_max = 0.0;
    Vec2 anchor;

    double eval(Vec2 x) const;
};

/// Checks the margin against the cavity wall and the other bodies at this
/// placement; GeometryError on violation.
CutoffField make_cutoff(const BodyShape& shape, const Pose2D& pose, double margin, const Cavity& cavity,
                        const std::vector<const BodyShape*>& others = {},
                        const std::vector<Pose2D>& other_poses = {});

// ---------------------------------------------------------------------------
// Force atom: a C^1 nonnegative boundary bump whose net force is
// F_magnitude * n(x0) (outward), built in a tangent chart around x0.
// ---------------------------------------------------------------------------

struct PressureAtom {
    const BodyShape* shape = nullptr;
    Pose2D pose;
    double s0 = 0.0;            // chart origin parameter
    double s_lo = 0.0, s_hi = 0.0;  // support interval, unwrapped around s0
    double chart_halfwidth = 0.0;   // R
    Vec2 x0;                    // world chart origin
    Vec2 e1, e2;                // chart axes: tangent, inward normal
    double coefficient = 0.0;   // overall scale alpha
    double collar_width = 0.05; // off-boundary extension width
    double reach = 0.0;         // world-radius quick-reject bound

    Vec2 force;                 // quadrature wrench of the built atom
    double torque = 0.0;        // lever form about the barycenter passed at build

    /// Chart abscissa of boundary parameter s (s unwrapped near s0).
    double chart_xi(double s) const;
    /// Boundary pressure at parameter s (0 outside the support interval).
    double boundary_value(double s) const;
    /// Extension to the plane: boundary profile times a C^2 collar bump.
    double eval(Vec2 x) const;
};

struct AtomOptions {
    double chart_cap = 0.0;       // max chart halfwidth; 0 = automatic
    double collar_width = 0.05;
    int quad_panels = 32;         // wrench quadrature panels over the patch
    // parameter intervals atoms must avoid (the "shifted slightly aside" rule)
    std::vector<std::pair<double, double>> exclusion_arcs;
    // optional cap: keep the patch where sign(lever) stays fixed
    bool restrict_lever_sign = false;
    double lever_sign = 0.0;
    Vec2 barycenter;              // world, for lever restriction / torque
};

/// Lemma-style construction. Retries with halved chart width up to 6 times,
/// then throws NumericError.
PressureAtom force_atom_2d(const BodyShape& shape, const Pose2D& pose, double s0, double force_magnitude,
                           const AtomOptions& opts = {});

// ---------------------------------------------------------------------------
// Zero-net-force torque pressure (combination of atoms).
// ---------------------------------------------------------------------------

struct TorquePressure {
    std::vector<PressureAtom> atoms;
    double torque = 0.0;        // lever form, for unit force budget
    Vec2 force_residual;
    double budget = 1.0;        // sum of atom force magnitudes
};

struct TorqueOptions {
    int direction_grid = 720;
    double torque_fraction = 0.05;  // required |torque| vs max |T| * budget
    double circle_tol_factor = 1e-6;  // max|T| <= factor * diameter => circle
    AtomOptions atom;
};

/// Builds a pressure with zero net force and lever torque of the requested
/// sign (+1/-1). Throws TorqueUnreachableError on circles with centered
/// barycenter; NumericError when no coefficient system is feasible.
TorquePressure torque_pressure_2d(const BodyShape& shape, const Pose2D& pose, Vec2 x_barycenter,
                                  int torque_sign, const TorqueOptions& opts = {});

// ---------------------------------------------------------------------------
// Per-body synthesized pressure at one time slice.
// ---------------------------------------------------------------------------

struct BodyPressureField {
    std::vector<PressureAtom> atoms;
    CutoffField cutoff;
    // interior term for balls: coeff * (eta_dot . (x - center) + shift)
    double ball_coeff = 0.0;
    Vec2 ball_eta_dot;
    double ball_shift = 0.0;
    Vec2 ball_center;

    double eval(Vec2 x) const;
    /// Value on the body boundary at parameter s (cutoff is 1 there).
    double boundary_value(double s, const PlacedCurve& curve) const;
};

/// Whole-domain pressure at one slice: sum of body fields plus the spatially
/// constant offset p0. Strictly positive once p0 is set.
struct SlicePressure {
    std::vector<BodyPressureField> bodies;
    double p0 = 0.0;

    double tilde(Vec2 x) const;                 // before p0
    double eval(Vec2 x) const { return tilde(x) + p0; }
    Vec2 grad(Vec2 x, double step = 1e-6) const;  // central differences
};

/// The ball construction: p = (m_B/|B|) (eta_dot . (x - c) + shift) sigma_U,
/// nonnegative before p0; boundary force is exactly m_B eta_dot.
BodyPressureField ball_translation_pressure(const BodyShape& shape, const Pose2D& pose, double body_mass,
                                            Vec2 eta_dot, const CutoffField& cutoff);

struct MotionPressureResult {
    BodyPressureField field;
    Vec2 achieved_force;
    double achieved_torque = 0.0;  // lever form
    bool torque_repaired = false;  // opposite-sign torque pressure was used
};

/// Composed pressure p1 + lambda p2 realizing (force, lever torque) on a
/// strictly convex body. `torque_unit` carries prebuilt torque pressure(s);
/// pass nullptrs for balls (then torque must match the ball identity).
MotionPressureResult motion_pressure_2d(const BodyShape& shape, const Pose2D& pose, Vec2 x_barycenter,
                                        Vec2 force, double torque, const CutoffField& cutoff,
                                        const TorquePressure* torque_ccw, const TorquePressure* torque_cw,
                                        const AtomOptions& atom_opts = {}, double wrench_rel_tol = 1e-7);

// ---------------------------------------------------------------------------
// Mass-normalizing offset p0.
// ---------------------------------------------------------------------------

struct MassOffsetResult {
    double p0 = 0.0;
    double residual = 0.0;   // |M(p0) - m_F|
    double min_pressure = 0.0;
};

/// Solves integral of law^-1(p_tilde + p0) over Omega_F = m_fluid for p0
/// (bracketing + bisection with a Newton polish, relative tolerance 1e-10).
/// InputError naming the feasible interval when m_fluid is out of range.
MassOffsetResult mass_offset(const std::function<double(Vec2)>& p_tilde, const PressureLaw& law,
                             double m_fluid, const FluidDomainQuadrature& quad);

/// Same root problem on presampled field values (ring quadrature); the fast
/// path used per time slice.
MassOffsetResult mass_offset(const CachedFieldSamples& samples, const PressureLaw& law, double m_fluid);

}  // namespace rigidflow
