#include "tmix/advect.hpp"

#include <cmath>

namespace tmix {

double dt_max(const VelocityModel& vm, double t0, double t1, int probe_grid) {
    TorusGrid grid(probe_grid);
    double sup = 0.0;
    for (int s = 0; s <= 4; ++s) {
        const double t = t0 + (t1 - t0) * s / 4.0;
        for (int j = 0; j < grid.n(); ++j)
            for (int i = 0; i < grid.n(); ++i) sup = std::max(sup, vm(t, grid.point(i, j)).norm());
    }
    return sup == 0.0 ? std::numeric_limits<double>::infinity() : 0.25 / sup;
}

namespace {

inline Vec2 rk4_step(const VelocityModel& vm, double t, double h, Vec2 x) {
    const Vec2 k1 = vm(t, x);
    const Vec2 k2 = vm(t + 0.5 * h, x + (0.5 * h) * k1);
    const Vec2 k3 = vm(t + 0.5 * h, x + (0.5 * h) * k2);
    const Vec2 k4 = vm(t + h, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

Vec2 trace(const VelocityModel& vm, double t0, double t1, Vec2 x, const IntegratorConfig& cfg) {
    cfg.validate();
    if (!vm.integrable)
        throw std::invalid_argument("trace: velocity model '" + vm.name +
                                    "' is a norm-measurement probe, not integrable");
    const double span = t1 - t0;
    if (span == 0.0) return x;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / cfg.dt)));
    const double h = span / nsteps;
    double t = t0;
    for (int s = 0; s < nsteps; ++s) {
        x = rk4_step(vm, t, h, x);
        t = t0 + (s + 1) * h;
        if (!std::isfinite(x.x) || !std::isfinite(x.y))
            throw std::runtime_error("trace: non-finite state at t = " + std::to_string(t));
    }
    return x;
}

FlowMap flow_map(const VelocityModel& vm, double t0, double t1, const IntegratorConfig& cfg) {
    FlowMap fm;
    fm.t0 = t0;
    fm.t1 = t1;
    fm.eval = [&vm, t0, t1, cfg](Vec2 x) { return trace(vm, t0, t1, x, cfg); };
    return fm;
}

double flow_jacobian(const VelocityModel& vm, double t0, double t1, Vec2 x,
                     const IntegratorConfig& cfg, double h) {
    const Vec2 xp = trace(vm, t0, t1, {x.x + h, x.y}, cfg);
    const Vec2 xm = trace(vm, t0, t1, {x.x - h, x.y}, cfg);
    const Vec2 yp = trace(vm, t0, t1, {x.x, x.y + h}, cfg);
    const Vec2 ym = trace(vm, t0, t1, {x.x, x.y - h}, cfg);
    const double a11 = torus_delta(xp.x, xm.x) / (2 * h);
    const double a21 = torus_delta(xp.y, xm.y) / (2 * h);
    const double a12 = torus_delta(yp.x, ym.x) / (2 * h);
    const double a22 = torus_delta(yp.y, ym.y) / (2 * h);
    return a11 * a22 - a12 * a21;
}

namespace {

double sample_nearest(const ScalarField& f, Vec2 p) {
    const int n = f.n();
    const int i = static_cast<int>(std::lround(wrap01(p.x) * n)) % n;
    const int j = static_cast<int>(std::lround(wrap01(p.y) * n)) % n;
    return f.at(i, j);
}

inline void catmull_rom_weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2 * t2 - t);
    w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
    w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

double sample_bicubic(const ScalarField& f, Vec2 p) {
    const int n = f.n();
    const double gx = wrap01(p.x) * n, gy = wrap01(p.y) * n;
    int i0 = static_cast<int>(std::floor(gx));
    int j0 = static_cast<int>(std::floor(gy));
    const double fx = gx - i0, fy = gy - j0;
    double wx[4], wy[4];
    catmull_rom_weights(fx, wx);
    catmull_rom_weights(fy, wy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        const int j = ((j0 + b - 1) % n + n) % n;
        double row = 0.0;
        for (int a = 0; a < 4; ++a) {
            const int i = ((i0 + a - 1) % n + n) % n;
            row += wx[a] * f.at(i, j);
        }
        acc += wy[b] * row;
    }
    return acc;
}

} // namespace

ScalarField solve_between(const ScalarField& rho0, const VelocityModel& vm, double t0, double t1,
                          const TorusGrid& grid, const IntegratorConfig& cfg) {
    cfg.validate();
    if (rho0.n() % grid.n() != 0 && grid.n() % rho0.n() != 0)
        throw std::invalid_argument("solve: initial-data grid incompatible with output grid");
    ScalarField out(grid);
    const int n = grid.n();
    parallel_for(grid.size(), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t k = lo; k < hi; ++k) {
            const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
            const Vec2 y = trace(vm, t1, t0, grid.point(i, j), cfg);
            out.values()[k] = cfg.sampling == Sampling::Nearest ? sample_nearest(rho0, y)
                                                                : sample_bicubic(rho0, y);
        }
    });
    return out;
}

ScalarField solve(const ScalarField& rho0, const VelocityModel& vm, double t,
                  const TorusGrid& grid, const IntegratorConfig& cfg) {
    return solve_between(rho0, vm, 0.0, t, grid, cfg);
}

ConservationReport conservation_report(const ScalarField& rho0, const VelocityModel& vm, double t,
                                       const IntegratorConfig& cfg) {
    const ScalarField rho_t = solve(rho0, vm, t, rho0.grid(), cfg);
    ConservationReport rep;
    const double l2_0 = rho0.l2_norm();
    rep.l2_drift = l2_0 == 0.0 ? 0.0 : std::abs(rho_t.l2_norm() - l2_0) / l2_0;
    rep.mean_drift = std::abs(rho_t.mean() - rho0.mean());

    bool two_valued = true;
    for (double v : rho0.values()) {
        if (std::abs(v - 1.0) > 1e-6 && std::abs(v + 1.0) > 1e-6) {
            two_valued = false;
            break;
        }
    }
    if (two_valued) {
        std::int64_t off = 0;
        for (double v : rho_t.values())
            if (std::abs(v - 1.0) > 1e-6 && std::abs(v + 1.0) > 1e-6) ++off;
        rep.twovalue_violation = static_cast<double>(off) / static_cast<double>(rho_t.grid().size());
    }
    return rep;
}

} // namespace tmix
