#pragma once

#include "tmix/torus.hpp"

namespace tmix {

enum class Sampling { Nearest, Bicubic };

/// Fixed-step classical RK4. No adaptivity: golden files must be
/// bit-stable across reruns.
struct IntegratorConfig {
    double dt = 1e-3;
    Sampling sampling = Sampling::Nearest;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
    }
};

/// Stability-oriented step bound dt <= 0.25 / sup|u| (sup estimated by
/// sampling the model on a coarse grid at a few times).
double dt_max(const VelocityModel& vm, double t0, double t1, int probe_grid = 64);

/// Endpoint of the characteristic x' = u(t,x) from (t0, x) to t1 (either
/// time direction). Throws with the failure time if the state leaves the
/// finite range.
Vec2 trace(const VelocityModel& vm, double t0, double t1, Vec2 x, const IntegratorConfig& cfg);

struct FlowMap {
    double t0 = 0.0;
    double t1 = 0.0;
    std::function<Vec2(Vec2)> eval;
};

FlowMap flow_map(const VelocityModel& vm, double t0, double t1, const IntegratorConfig& cfg);

/// Finite-difference Jacobian determinant of the flow map at x.
double flow_jacobian(const VelocityModel& vm, double t0, double t1, Vec2 x,
                     const IntegratorConfig& cfg, double h = 2e-4);

/// Backward semi-Lagrangian evaluation of the continuity-equation solution:
/// rho(t, x) = rho0(Phi_{t->0}(x)) per grid node. Two-valued initial data
/// should use Sampling::Nearest (preserves the value set exactly).
ScalarField solve(const ScalarField& rho0, const VelocityModel& vm, double t,
                  const TorusGrid& grid, const IntegratorConfig& cfg);

/// As solve(), but integrating from an arbitrary start time t0 (used by the
/// patched composite evolution where fields live on [T_n, T_{n+1}]).
ScalarField solve_between(const ScalarField& rho0, const VelocityModel& vm, double t0, double t1,
                          const TorusGrid& grid, const IntegratorConfig& cfg);

struct ConservationReport {
    double l2_drift = 0.0;          // relative
    double mean_drift = 0.0;        // absolute
    double twovalue_violation = 0.0;  // fraction of cells off +-1 (two-valued inputs)
};

ConservationReport conservation_report(const ScalarField& rho0, const VelocityModel& vm, double t,
                                       const IntegratorConfig& cfg);

} // namespace tmix
