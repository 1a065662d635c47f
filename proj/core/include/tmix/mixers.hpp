#pragma once

#include "tmix/flowkit.hpp"
#include "tmix/torus.hpp"

namespace tmix {

/// One cell-local move of the recursive snake evolution. The isotopy works
/// in torus coordinates; its induced velocity vanishes on the cell
/// boundary, so neighboring cells evolve independently.
struct BasicMove {
    enum class Kind { Straight, Corner };
    Kind kind = Kind::Straight;
    Vec2 cell_center;
    double cell_scale = 1.0;
    int quarter_turns = 0;
    IsotopySpec isotopy;
};

/// A unit-time mixing block: velocity model + exact checkpoint
/// rearrangement + nominal two-valued pattern, satisfying
/// checkpoint_map(rho0) = rescale_pattern(rho0, lambda) exactly at grid
/// nodes (isometry R = identity for both shipped mixers).
struct MixerConstruction {
    std::string name;
    double lambda = 0.5;                 // 1/lambda integer
    VelocityModel u0;                    // defined on t in [0,1]
    std::function<ScalarField(const TorusGrid&)> initial_pattern;
    std::function<ScalarField(const ScalarField&)> checkpoint_map;
    SmoothnessTag regularity = SmoothnessTag::Lipschitz;
    double sobolev_p = 0.0;
    std::vector<BasicMove> moves;
    /// Closed-form Hdot^{-1} norm of the initial pattern (pattern oracle);
    /// NaN when no closed form exists.
    double hm1_closed_form = std::numeric_limits<double>::quiet_NaN();
};

/// Example-2.2 block, lambda = 1/2. Five equal-fifth stages with a smooth
/// time reparameterization vanishing to first order at stage boundaries:
/// (a) elongate, (b) square-root pinch across the horizontal window,
/// (c) the same pinch rotated 90 degrees on each piece, (d) carry the four
/// pieces toward the quarter centers. delta > 0 required: the delta = 0
/// field is not integrable through the singular time.
MixerConstruction build_pinch_mixer(double delta, const TorusGrid& grid);

/// Peano-snake block, lambda = 1/3, Lipschitz velocity. Initial pattern is
/// the reflection-symmetric three-band stripe (+1 iff |x1 - 1/2| < 1/4).
/// The unit-time evolution runs two slab carousels (the basic move,
/// replicated at positions x1 = 1/4 and 3/4); each swaps the two
/// half-slabs by an exact central reflection, which on the stripe pattern
/// is precisely the refinement to period 1/3. The checkpoint map is the
/// corresponding piecewise reflection in exact index arithmetic.
MixerConstruction build_snake_mixer(const TorusGrid& grid);

/// lambda = 1/4 variant of the pinch block (two pinch periods compressed
/// into unit time); pattern layer rescales by 1/4 per checkpoint.
MixerConstruction build_pinch_squared_mixer(double delta, const TorusGrid& grid);

/// rescale_pattern applied n times (isometry R = identity): the exact
/// solution at patch boundary T_n. Errors out when the grid cannot hold 8
/// cells per pattern period.
ScalarField nominal_pattern(const MixerConstruction& mixer, int n, const TorusGrid& grid);

/// Number of connected components of {field = +1} under 4-neighbor
/// adjacency with torus wrap.
int component_count(const ScalarField& field);

/// Closed-form Hdot^{-1} norm of the snake stripe pattern:
/// sum_{k odd} 2 (2/(pi k))^2 (2 pi k)^{-2} = 1/48, so the norm is
/// 1/(4 sqrt(3)).
double snake_stripe_hm1_exact();

/// Reference Hdot^{-1} of the ideal area-1/2 disk pattern via its Bessel
/// series (truncated at |k_i| <= kmax).
double disk_pattern_hm1_reference(int kmax = 1024);

} // namespace tmix
