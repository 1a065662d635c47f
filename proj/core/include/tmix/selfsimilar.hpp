#pragma once

#include "tmix/advect.hpp"
#include "tmix/mixers.hpp"

namespace tmix {

enum class DecayRegime { FiniteTime, Exponential, Polynomial };

const char* regime_name(DecayRegime r);

/// Self-similar patching data: tau = lambda^{1-s} exactly, T_n = sum of
/// tau^i for i < n, M = sup over sampled t of the functional mixing scale
/// of the unit block.
struct MixSchedule {
    double s = 1.0;
    double p = 2.0;
    double lambda = 0.5;
    double tau = 0.5;
    double M = 0.0;
    DecayRegime regime = DecayRegime::Exponential;

    double T(int n) const;
    double T_infinity() const;  // finite only for s < 1
    /// Largest n with T_n <= t (t < T_infinity in the finite-time regime).
    int patch_index(double t) const;
};

/// Builds the schedule for the given exponent pair. M is computed by
/// sampling the Hdot^{-1} norm of the evolving block solution at
/// m_samples equispaced times via the advect module. lambda must match the
/// mixer's scale factor.
MixSchedule make_schedule(double s, double p, double lambda, const MixerConstruction& mixer,
                          const TorusGrid& grid, const IntegratorConfig& cfg, int m_samples = 33);

/// u_n(t,x) = (lambda^n / tau^n) u_0(t / tau^n, x / lambda^n) on [0, tau^n].
VelocityModel rescaled_velocity(const MixerConstruction& mixer, const MixSchedule& schedule,
                                int n);

/// The patched solution: exact nominal patterns at the checkpoints T_n,
/// numerical advection seeded at the last checkpoint in between, zero
/// field past T_infinity in the finite-time regime (perfect mixing).
struct CompositeSolution {
    MixSchedule schedule;
    MixerConstruction mixer;

    bool perfectly_mixed(double t) const;
    /// Deepest pattern level representable on the grid (>= 8 cells per
    /// pattern period); reported, never silently truncated.
    int max_level(const TorusGrid& grid) const;
    VelocityModel velocity() const;
    ScalarField evaluate(double t, const TorusGrid& grid, const IntegratorConfig& cfg) const;
};

CompositeSolution composite(const MixerConstruction& mixer, const MixSchedule& schedule);

/// The paper's decay envelope: M lambda^n on [T_n, T_{n+1}).
double envelope(const MixSchedule& schedule, double t);

/// Closed forms: M lambda^{t-1} for s = 1 and the polynomial envelope
/// M [1 + t(lambda^{1-s} - 1)]^{-1/(s-1)} / lambda for s > 1.
double envelope_closed_form(const MixSchedule& schedule, double t);

} // namespace tmix
