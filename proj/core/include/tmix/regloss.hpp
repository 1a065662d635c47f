#pragma once

#include <array>

#include "tmix/mixers.hpp"
#include "tmix/norms.hpp"

namespace tmix {

struct CubeSpec {
    Vec2 center;
    double side = 0.0;       // lambda_n
    double tau = 0.0;        // time scale tau_n
    double amplitude = 0.0;  // C_n
};

/// Disjoint cube family accumulating at a single point, plus the rescaling
/// parameters per cube.
struct CubeSchedule {
    std::vector<CubeSpec> cubes;  // cubes[k] is Q_{k+1}
    Vec2 accumulation_point;

    int N() const { return static_cast<int>(cubes.size()); }
    /// Throws when any pair violates the gap >= max(side)/4 separation or
    /// a cube leaves the unit square.
    void validate() const;
};

/// lambda_n = 4^{-n}, tau_n = 1/(8 n^3), C_n = exp(-2 n^2), centers on a
/// contracting spiral around the accumulation point (1/2, 1/2). The three
/// regularity gates (velocity tails, datum smoothness, theta divergence)
/// are checked numerically by loss_report, not assumed.
CubeSchedule default_schedule(int N);

/// The smooth base scalar of the section: the snake stripe mollified at a
/// recorded 2-cell spectral scale and cut off smoothly inside the unit
/// cube, so the datum is compactly supported and C-infinity.
struct RegBase {
    TorusGrid grid;
    ScalarField theta;        // mollified + cut stripe, values in [-1,1]
    double mollify_sigma;     // recorded constant: 2 * spacing
    double cut_margin;        // recorded constant: 1/24

    explicit RegBase(const TorusGrid& g);
};

/// Per-cube assembly: v_n(t,x) = (lambda_n/tau_n) u(t/tau_n, (x-a_n)/lambda_n),
/// theta_n(t,x) = C_n rho(t/tau_n, (x-a_n)/lambda_n) with a_n the cube corner
/// and u the mixer's global-in-time block velocity (periods repeat).
struct Assembly {
    CubeSchedule schedule;
    MixerConstruction mixer;
    int cube_grid_n;  // per-cube evaluation grid (>= 64)

    /// Velocity in cube-local unit coordinates at cube index (0-based).
    VelocityModel cube_velocity(int k) const;
    /// Global velocity rule on the plane (unit square): sum of the
    /// disjointly supported per-cube fields.
    VelocityModel velocity() const;
    /// theta_n(0,.) on the cube-local grid.
    ScalarField cube_datum(int k, const RegBase& base) const;
};

Assembly assemble(const CubeSchedule& schedule, const MixerConstruction& mixer,
                  int cube_grid_n = 192);

/// Saturation probe on exact mixer checkpoints: fits the decay rate of
/// Hdot^{-s} of the sharp patterns and the growth rate of Hdot^{+s} of the
/// self-similarly mollified patterns, checks growth >= decay - 10% and the
/// interpolation inequality at every probed checkpoint.
struct SaturationReport {
    struct Row {
        double s = 0.0;
        double decay_rate = 0.0;   // of Hdot^{-s}, per checkpoint step
        double growth_rate = 0.0;  // of Hdot^{+s}
        bool saturates = false;    // growth >= decay * 0.9
        int measured_levels = 0;   // grid-validated levels of the growth chain
    };
    std::vector<Row> rows;
    bool interpolation_ok = true;
};

SaturationReport saturation_probe(const MixerConstruction& mixer, const std::vector<double>& s_list,
                                  int n_checkpoints, const TorusGrid& grid);

/// Partial-sum diagnostics. Disjoint supports make the norms add in the
/// p-th / 2nd power; per-cube values at level m = floor(t/tau_n) use the
/// exact pattern-scaling identities (levels beyond the base grid are
/// closed-form extensions and are flagged in measured_levels).
struct LossReport {
    int N = 0;
    std::vector<double> t_list, s_list, p_list;
    // theta_partial[it][is][k]: ||theta^{(k+1)}(t,.)||_{H^s} partial sums.
    std::vector<std::vector<std::vector<long double>>> theta_partial;
    // v_partial_pow[ip][k]: sum of ||v_n||_{W^{1,p}}^p over n <= k+1.
    std::vector<std::vector<long double>> v_partial_pow;
    // smoothness_proxy[k][d-1]: max |d-th derivative| of theta_{k+1}(0,.), d = 1..4.
    std::vector<std::array<double, 4>> smoothness_proxy;

    struct Verdicts {
        std::vector<bool> velocity_bounded;        // per p: tail of last two cubes < 1%
        bool datum_smooth = false;                 // proxies decreasing in n
        std::vector<std::vector<std::string>> theta_trend;  // per (t,s): "divergent-trend" | "convergent"
    } verdicts;
};

LossReport loss_report(const CubeSchedule& schedule, const MixerConstruction& mixer,
                       const std::vector<double>& t_list, const std::vector<double>& s_list,
                       const std::vector<double>& p_list, int N, const TorusGrid& base_grid);

} // namespace tmix
