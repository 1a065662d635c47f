#pragma once

#include "tmix/torus.hpp"

namespace tmix {

/// Scalar stream function psi(t,x); u = (d2 psi, -d1 psi) is automatically
/// divergence-free. An analytic spatial gradient may be supplied; without
/// it velocity_from_stream falls back to 6th-order central differences.
struct StreamFunction {
    std::function<double(double, Vec2)> eval;
    std::function<Vec2(double, Vec2)> gradient;  // optional (empty = FD)
    SmoothnessTag tag = SmoothnessTag::Smooth;
    double sobolev_p = 0.0;
    std::string name;
};

/// Prescribed area-preserving isotopy: forward map Phi_t and its inverse
/// for t in [0,1], plus the Jacobian determinant rule.
struct IsotopySpec {
    std::function<Vec2(double, Vec2)> forward;
    std::function<Vec2(double, Vec2)> inverse;
    std::function<double(double, Vec2)> jacobian;
    std::string name;
};

/// u = (d2 psi, -d1 psi). Rejects stream functions whose sampling is not
/// 1-periodic. Divergence-free by construction; asserted spectrally by the
/// module's gate tests.
VelocityModel velocity_from_stream(const StreamFunction& psi, double fd_step = 1e-4);

/// u(t,x) = dPhi_t/dt evaluated at Phi_t^{-1}(x); time derivative by
/// centered differences with step h_t. Validates Phi_0 = id, Jacobian = 1
/// (tol 1e-8) and forward/inverse consistency on sample points, then
/// checks the spectral divergence a posteriori against tol 1e-3 and throws
/// with the measured value on failure.
VelocityModel velocity_from_isotopy(const IsotopySpec& iso, double h_t = 1e-4,
                                    int check_grid = 96);

/// Radial stream field: rigid rotation at angle_rate inside radius_core,
/// zero outside radius_outer, C-infinity monotone transition in between.
VelocityModel rotation_field(Vec2 center, double radius_core, double radius_outer,
                             double angle_rate);

/// The same rotation as an isotopy (closed-form angle profile), for
/// cross-validation against the stream-generated field.
IsotopySpec rotation_isotopy(Vec2 center, double radius_core, double radius_outer,
                             double angle_rate);

/// Area-preserving bend: the rectangle [0, L] x [0, thickness] with
/// L = inner_radius * angle_span is carried to an annular sector via
/// theta = k xi, r = sqrt(inner_radius^2 + 2 eta / k), k = angle_span / L.
/// Interpolated in t so that Phi_0 = id; Jacobian is identically 1 at
/// every t. Works in rectangle coordinates (not torus-wrapped).
IsotopySpec bend_map(double inner_radius, double angle_span, double thickness);

/// Square-root pinch, Example-2.2 style: in neck-local coordinates s the
/// horizontal component is -rate * sgn(s1) * sqrt(|s1| + delta) times a
/// smooth vertical window, completed to an exactly divergence-free field
/// through its stream function (all cutoffs folded into psi). Supported in
/// the neck box. axis = 0 compresses s1 (splits across the horizontal
/// window); axis = 1 is the 90-degree-rotated variant.
/// delta = 0 yields a norm-measurement probe (integrable = false).
/// reach is the half-extent of the compression along the pinched axis.
VelocityModel pinch_field(Vec2 neck_center, double neck_width, double delta, double rate,
                          int axis = 0, double reach = 0.45);

/// Rigid translation of a disk along a smooth path: velocity equals
/// path'(t) inside radius_core around path(t), tapering to zero at
/// radius_outer. Divergence-free via its stream function.
VelocityModel moving_patch(std::function<Vec2(double)> path, std::function<Vec2(double)> path_dot,
                           double radius_core, double radius_outer);

// ---------------------------------------------------------------------------
// Slab carousel: the basic move of the snake mixer.
//
// Inside an axis-aligned cell (center, half-widths a x b) the level sets of
// the rounded-rectangle gauge m are concentric rounded rectangles. With
// the stream function Psi(m) chosen so that Psi'(m) = (2 A1 / T) m eta(m),
// A1 = area of the unit level, every level set with eta = 1 completes a
// full circuit in time T. Over T/2 each point reaches its antipode
// (central reflection through the cell center) exactly: the left and right
// halves of the cell swap while the velocity vanishes identically outside
// the cell. eta tapers to zero in the outermost gauge shell of relative
// width taper so the cell boundary is fixed.
// ---------------------------------------------------------------------------

struct CarouselSpec {
    Vec2 center;
    double half_width = 1.0 / 12.0;   // a
    double half_height = 0.5;         // b
    double corner_radius = 1.0 / 24.0;
    double taper = 1.5e-3;            // relative gauge width of the boundary layer
    double period = 2.0;              // full-circuit time; half-circuit at period/2
};

/// Rounded-rectangle gauge of the cell: m < 1 strictly inside, 1 on the
/// boundary level, > 1 outside (clamped queries only need m <= 1).
double carousel_gauge(const CarouselSpec& spec, Vec2 x);

StreamFunction carousel_stream(const CarouselSpec& spec);

/// Steady velocity of the carousel (stream-generated, analytic gradient).
VelocityModel carousel_field(const CarouselSpec& spec);

} // namespace tmix
