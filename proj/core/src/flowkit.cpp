#include "tmix/flowkit.hpp"

#include <array>
#include <cmath>

namespace tmix {

namespace {

/// Derivative of the standard exp-based smoothstep.
double smoothstep_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    const double s = a + b;
    return a * b * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / (s * s);
}

Vec2 nearest_image(Vec2 x, Vec2 center) {
    return {torus_delta(x.x, center.x), torus_delta(x.y, center.y)};
}

} // namespace

// ---------------------------------------------------------------------------
// velocity_from_stream
// ---------------------------------------------------------------------------

VelocityModel velocity_from_stream(const StreamFunction& psi, double fd_step) {
    if (!psi.eval) throw std::invalid_argument("velocity_from_stream: stream has no eval rule");

    // Periodicity probe: psi must agree across one full period in each axis.
    const std::array<Vec2, 4> probes = {Vec2{0.13, 0.41}, Vec2{0.77, 0.29}, Vec2{0.5, 0.9},
                                        Vec2{0.031, 0.62}};
    for (Vec2 p : probes) {
        const double v0 = psi.eval(0.0, p);
        const double vx = psi.eval(0.0, {p.x + 1.0, p.y});
        const double vy = psi.eval(0.0, {p.x, p.y + 1.0});
        const double scale = std::max(1.0, std::abs(v0));
        if (std::abs(vx - v0) > 1e-8 * scale || std::abs(vy - v0) > 1e-8 * scale)
            throw std::invalid_argument("velocity_from_stream: stream sampling is not 1-periodic");
    }

    VelocityModel vm;
    vm.tag = psi.tag;
    vm.sobolev_p = psi.sobolev_p;
    vm.name = psi.name.empty() ? "stream" : psi.name;
    if (psi.gradient) {
        auto grad = psi.gradient;
        vm.eval = [grad](double t, Vec2 x) {
            const Vec2 g = grad(t, x);
            return Vec2{g.y, -g.x};
        };
    } else {
        auto f = psi.eval;
        const double h = fd_step;
        // 6th-order central differences keep the random band-limited
        // property test under 1e-10 spectral divergence at 512^2.
        vm.eval = [f, h](double t, Vec2 x) {
            static const double w[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};
            double d1 = 0.0, d2 = 0.0;
            for (int m = 1; m <= 3; ++m) {
                const double c = w[m - 1] / h;
                d1 += c * (f(t, {x.x + m * h, x.y}) - f(t, {x.x - m * h, x.y}));
                d2 += c * (f(t, {x.x, x.y + m * h}) - f(t, {x.x, x.y - m * h}));
            }
            return Vec2{d2, -d1};
        };
    }
    return vm;
}

// ---------------------------------------------------------------------------
// velocity_from_isotopy
// ---------------------------------------------------------------------------

VelocityModel velocity_from_isotopy(const IsotopySpec& iso, double h_t, int check_grid) {
    if (!iso.forward || !iso.inverse)
        throw std::invalid_argument("velocity_from_isotopy: need forward and inverse rules");

    // Validation samples: a coarse lattice of the unit square.
    std::vector<Vec2> samples;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) samples.push_back({0.1 + 0.19 * i, 0.07 + 0.2 * j});

    for (Vec2 p : samples) {
        const Vec2 q = iso.forward(0.0, p);
        if ((q - p).norm() > 1e-8)
            throw std::invalid_argument("velocity_from_isotopy: Phi_0 is not the identity");
    }
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        for (Vec2 p : samples) {
            const Vec2 q = iso.forward(t, p);
            const Vec2 r = iso.inverse(t, q);
            if ((r - p).norm() > 1e-8)
                throw std::invalid_argument(
                    "velocity_from_isotopy: forward/inverse mismatch at t = " + std::to_string(t));
            if (iso.jacobian) {
                const double J = iso.jacobian(t, p);
                if (std::abs(J - 1.0) > 1e-8)
                    throw std::invalid_argument(
                        "velocity_from_isotopy: Jacobian deviates from 1 by " +
                        std::to_string(std::abs(J - 1.0)) + " (not area-preserving)");
            }
        }
    }

    auto fwd = iso.forward;
    auto inv = iso.inverse;
    const double h = h_t;
    VelocityModel vm;
    vm.t_begin = 0.0;
    vm.t_end = 1.0;
    vm.div_tol = 1e-3;
    vm.tag = SmoothnessTag::Lipschitz;
    vm.name = iso.name.empty() ? "isotopy" : iso.name;
    vm.eval = [fwd, inv, h](double t, Vec2 x) {
        const Vec2 y = inv(t, x);
        Vec2 d;
        if (t - h >= 0.0 && t + h <= 1.0) {
            const Vec2 a = fwd(t + h, y), b = fwd(t - h, y);
            d = (a - b) * (0.5 / h);
        } else if (t + h > 1.0) {
            const Vec2 f0 = fwd(t, y), f1 = fwd(t - h, y), f2 = fwd(t - 2 * h, y);
            d = (3.0 * f0 - 4.0 * f1 + f2) * (0.5 / h);
        } else {
            const Vec2 f0 = fwd(t, y), f1 = fwd(t + h, y), f2 = fwd(t + 2 * h, y);
            d = (-3.0 * f0 + 4.0 * f1 - f2) * (0.5 / h);
        }
        return d;
    };

    // A-posteriori divergence check. Pointwise FD at the validation samples
    // always runs; the spectral gate runs when a torus-periodic sampling
    // grid is requested.
    double div_max = 0.0;
    for (double t : {0.25, 0.75}) {
        for (Vec2 p : samples) div_max = std::max(div_max, std::abs(divergence_fd(vm, t, p, 1e-4)));
    }
    if (div_max > vm.div_tol)
        throw std::invalid_argument("velocity_from_isotopy: divergence check failed, measured " +
                                    std::to_string(div_max) + " > " + std::to_string(vm.div_tol) +
                                    " (non-area-preserving isotopy?)");
    if (check_grid > 0) {
        const double dspec = divergence_l2(vm, 0.5, TorusGrid(check_grid));
        if (dspec > vm.div_tol)
            throw std::invalid_argument(
                "velocity_from_isotopy: spectral divergence check failed, measured " +
                std::to_string(dspec));
    }
    return vm;
}

// ---------------------------------------------------------------------------
// rotation_field / rotation_isotopy
// ---------------------------------------------------------------------------

namespace {

struct RotationProfile {
    Vec2 center;
    double r_core, r_outer, rate;

    double step(double r) const {
        if (r <= r_core) return 1.0;
        if (r >= r_outer) return 0.0;
        return smoothstep((r_outer - r) / (r_outer - r_core));
    }
    // g'(r) = -rate * r * S(r); psi = g(r) with g(r_outer) = 0.
    double g_prime(double r) const { return -rate * r * step(r); }
    double g(double r) const {
        if (r >= r_outer) return 0.0;
        const int panels = 64;
        const double lo = r, hi = r_outer;
        const double h = (hi - lo) / (2 * panels);
        double s = -g_prime(lo) - g_prime(hi);
        for (int i = 1; i < 2 * panels; ++i) s -= (i % 2 ? 4.0 : 2.0) * g_prime(lo + i * h);
        return s * h / 3.0;
    }
};

void check_rotation_params(double r_core, double r_outer) {
    if (!(r_core > 0.0) || !(r_core < r_outer) || !(r_outer <= 0.5))
        throw std::invalid_argument(
            "rotation: need 0 < radius_core < radius_outer <= 1/2 (overlapping parameters)");
}

} // namespace

VelocityModel rotation_field(Vec2 center, double radius_core, double radius_outer,
                             double angle_rate) {
    check_rotation_params(radius_core, radius_outer);
    RotationProfile prof{center, radius_core, radius_outer, angle_rate};

    StreamFunction psi;
    psi.name = "rotation";
    psi.tag = SmoothnessTag::Smooth;
    psi.eval = [prof](double, Vec2 x) {
        const Vec2 p = nearest_image(x, prof.center);
        return prof.g(p.norm());
    };
    psi.gradient = [prof](double, Vec2 x) {
        const Vec2 p = nearest_image(x, prof.center);
        const double r = p.norm();
        if (r < 1e-14 || r >= prof.r_outer) return Vec2{0.0, 0.0};
        return (prof.g_prime(r) / r) * p;
    };
    VelocityModel vm = velocity_from_stream(psi);
    vm.div_tol = 1e-8;
    return vm;
}

IsotopySpec rotation_isotopy(Vec2 center, double radius_core, double radius_outer,
                             double angle_rate) {
    check_rotation_params(radius_core, radius_outer);
    RotationProfile prof{center, radius_core, radius_outer, angle_rate};
    auto angle = [prof](double t, double r) { return prof.rate * t * prof.step(r); };

    IsotopySpec iso;
    iso.name = "rotation-isotopy";
    iso.forward = [prof, angle](double t, Vec2 x) {
        const Vec2 p = nearest_image(x, prof.center);
        const double r = p.norm();
        const double th = angle(t, r);
        const double c = std::cos(th), s = std::sin(th);
        return wrap01(Vec2{prof.center.x + c * p.x - s * p.y, prof.center.y + s * p.x + c * p.y});
    };
    iso.inverse = [prof, angle](double t, Vec2 x) {
        const Vec2 p = nearest_image(x, prof.center);
        const double r = p.norm();
        const double th = -angle(t, r);
        const double c = std::cos(th), s = std::sin(th);
        return wrap01(Vec2{prof.center.x + c * p.x - s * p.y, prof.center.y + s * p.x + c * p.y});
    };
    iso.jacobian = [](double, Vec2) { return 1.0; };
    return iso;
}

// ---------------------------------------------------------------------------
// bend_map
// ---------------------------------------------------------------------------

IsotopySpec bend_map(double inner_radius, double angle_span, double thickness) {
    if (!(inner_radius > 0.0) || !(angle_span > 0.0 && angle_span <= M_PI) || !(thickness > 0.0))
        throw std::invalid_argument("bend_map: need inner_radius > 0, 0 < angle_span <= pi, "
                                    "thickness > 0");
    const double L = inner_radius * angle_span;  // rectangle length; k1 = 1/inner_radius
    const double k1 = angle_span / L;

    // r_t^2 = (1-t)/k_t^2 + t r_in^2 interpolates the bend center from
    // infinity (identity) to the requested inner radius.
    struct BendGeom {
        double k1, r_in, L, thickness;
        double kt(double t) const { return std::max(t, 1e-12) * k1; }
        double rt2(double t) const {
            const double k = kt(t);
            return (1.0 - t) / (k * k) + t * r_in * r_in;
        }
    };
    BendGeom g{k1, inner_radius, L, thickness};

    IsotopySpec iso;
    iso.name = "bend";
    // Bend center sits at (0, -r_t); y is written to avoid the r_t - rho
    // cancellation as k -> 0, so Phi_t -> identity smoothly.
    iso.forward = [g](double t, Vec2 q) {
        if (t <= 0.0) return q;
        const double k = g.kt(t);
        const double rt2 = g.rt2(t);
        const double rt = std::sqrt(rt2);
        const double rho2 = rt2 + 2.0 * q.y / k;
        if (rho2 <= 0.0)
            throw std::invalid_argument("bend_map: r^2 nonpositive at eta = " + std::to_string(q.y));
        const double rho = std::sqrt(rho2);
        const double th = k * q.x;
        const double sin_half = std::sin(0.5 * th);
        const double y = std::cos(th) * (2.0 * q.y / k) / (rt + rho) - 2.0 * rt * sin_half * sin_half;
        return Vec2{rho * std::sin(th), y};
    };
    iso.inverse = [g](double t, Vec2 p) {
        if (t <= 0.0) return p;
        const double k = g.kt(t);
        const double rt = std::sqrt(g.rt2(t));
        const double th = std::atan2(p.x, p.y + rt);
        // rho^2 - rt^2 without forming rho^2 (stable for rt >> 1).
        const double eta = 0.5 * k * (p.x * p.x + p.y * p.y + 2.0 * p.y * rt);
        return Vec2{th / k, eta};
    };
    // Symbolic product of the polar-map partials; identically 1.
    iso.jacobian = [g](double t, Vec2 q) {
        if (t <= 0.0) return 1.0;
        const double k = g.kt(t);
        const double rho2 = g.rt2(t) + 2.0 * q.y / k;
        if (rho2 <= 0.0) throw std::invalid_argument("bend_map: r^2 nonpositive in jacobian");
        const double rho = std::sqrt(rho2);
        const double th = k * q.x;
        const double dxdxi = rho * k * std::cos(th);
        const double dxdeta = std::sin(th) / (k * rho);
        const double dydxi = -rho * k * std::sin(th);
        const double dydeta = std::cos(th) / (k * rho);
        return dxdxi * dydeta - dxdeta * dydxi;
    };
    return iso;
}

// ---------------------------------------------------------------------------
// pinch_field
// ---------------------------------------------------------------------------

VelocityModel pinch_field(Vec2 neck_center, double neck_width, double delta, double rate,
                          int axis, double reach) {
    if (delta < 0.0) throw std::invalid_argument("pinch_field: delta must be >= 0");
    if (!(neck_width > 0.0) || neck_width > 0.33)
        throw std::invalid_argument("pinch_field: neck_width must lie in (0, 0.33]");
    if (axis != 0 && axis != 1) throw std::invalid_argument("pinch_field: axis must be 0 or 1");
    if (!(reach > 0.0) || reach > 0.499)
        throw std::invalid_argument("pinch_field: reach must lie in (0, 0.499]");

    struct PinchGeom {
        Vec2 center;
        double Ly;          // transverse half-extent of the active window
        double Lx;          // reach of the compression along the pinched axis
        double delta, rate;
        int axis;

        // sgn(s) sqrt(|s|+delta) with an outer cutoff.
        double cutC(double r) const {
            const double t0 = 0.75 * Lx;
            if (r <= t0) return 1.0;
            return 1.0 - smoothstep((r - t0) / (Lx - t0));
        }
        double cutC_d(double r) const {
            const double t0 = 0.75 * Lx;
            if (r <= t0 || r >= Lx) return 0.0;
            return -smoothstep_deriv((r - t0) / (Lx - t0)) / (Lx - t0);
        }
        double q(double s) const {
            const double r = std::abs(s);
            if (r >= Lx) return 0.0;
            return (s >= 0 ? 1.0 : -1.0) * std::sqrt(r + delta) * cutC(r);
        }
        double q_d(double s) const {
            const double r = std::abs(s);
            if (r >= Lx) return 0.0;
            if (delta == 0.0 && r == 0.0) return 0.0;  // probe-only singular line
            return cutC(r) / (2.0 * std::sqrt(r + delta)) + std::sqrt(r + delta) * cutC_d(r);
        }
        // Odd saturating ramp times the far cutoff: g = W(s) D(|s|).
        double W(double s) const { return 0.5 * Ly * (2.0 * smoothstep((s / Ly + 1.0) * 0.5) - 1.0); }
        double W_d(double s) const { return smoothstep_deriv((s / Ly + 1.0) * 0.5); }
        double D(double r) const {
            if (r <= Ly) return 1.0;
            return 1.0 - smoothstep((r - Ly) / (0.5 * Ly));
        }
        double D_d(double r) const {
            if (r <= Ly || r >= 1.5 * Ly) return 0.0;
            return -smoothstep_deriv((r - Ly) / (0.5 * Ly)) / (0.5 * Ly);
        }
        double gfun(double s) const { return W(s) * D(std::abs(s)); }
        double gfun_d(double s) const {
            const double r = std::abs(s);
            return W_d(s) * D(r) + W(s) * D_d(r) * (s >= 0 ? 1.0 : -1.0);
        }
        // psi = -rate q(s1) g(s2) in pinch-local axes.
        double psi(Vec2 s) const { return -rate * q(s.x) * gfun(s.y); }
        Vec2 grad(Vec2 s) const {
            return {-rate * q_d(s.x) * gfun(s.y), -rate * q(s.x) * gfun_d(s.y)};
        }
    };
    PinchGeom geom{neck_center, neck_width, reach, delta, rate, axis};

    StreamFunction psi;
    psi.name = axis == 0 ? "pinch-x" : "pinch-y";
    psi.tag = SmoothnessTag::SobolevP;
    psi.sobolev_p = 2.0;
    psi.eval = [geom](double, Vec2 x) {
        Vec2 s = nearest_image(x, geom.center);
        if (geom.axis == 1) s = {s.y, -s.x};  // rotate chart by -90deg
        if (std::abs(s.x) >= geom.Lx || std::abs(s.y) >= 1.5 * geom.Ly) return 0.0;
        return geom.psi(s);
    };
    psi.gradient = [geom](double, Vec2 x) {
        Vec2 s = nearest_image(x, geom.center);
        Vec2 g;
        if (geom.axis == 1) {
            const Vec2 sl = {s.y, -s.x};
            if (std::abs(sl.x) >= geom.Lx || std::abs(sl.y) >= 1.5 * geom.Ly) return Vec2{0, 0};
            const Vec2 gl = geom.grad(sl);
            g = {-gl.y, gl.x};  // pull the gradient back through the chart rotation
        } else {
            if (std::abs(s.x) >= geom.Lx || std::abs(s.y) >= 1.5 * geom.Ly) return Vec2{0, 0};
            g = geom.grad(s);
        }
        return g;
    };
    VelocityModel vm = velocity_from_stream(psi);
    // The sqrt kink at the neck line limits spectral regularity to C^{1,1};
    // the sampled-grid divergence gate is the numerical-tier one.
    vm.div_tol = 1e-3;
    vm.integrable = delta > 0.0;
    vm.tag = SmoothnessTag::SobolevP;
    vm.sobolev_p = 2.0;
    return vm;
}

// ---------------------------------------------------------------------------
// moving_patch
// ---------------------------------------------------------------------------

VelocityModel moving_patch(std::function<Vec2(double)> path, std::function<Vec2(double)> path_dot,
                           double radius_core, double radius_outer) {
    check_rotation_params(radius_core, radius_outer);
    auto taper = [radius_core, radius_outer](double r) {
        if (r <= radius_core) return 1.0;
        if (r >= radius_outer) return 0.0;
        return smoothstep((radius_outer - r) / (radius_outer - radius_core));
    };
    auto taper_d = [radius_core, radius_outer](double r) {
        if (r <= radius_core || r >= radius_outer) return 0.0;
        return -smoothstep_deriv((radius_outer - r) / (radius_outer - radius_core)) /
               (radius_outer - radius_core);
    };

    StreamFunction psi;
    psi.name = "moving-patch";
    psi.eval = [=](double t, Vec2 x) {
        const Vec2 c = path(t);
        const Vec2 v = path_dot(t);
        const Vec2 p = nearest_image(x, c);
        const double r = p.norm();
        if (r >= radius_outer) return 0.0;
        return (-v.y * p.x + v.x * p.y) * taper(r);
    };
    psi.gradient = [=](double t, Vec2 x) {
        const Vec2 c = path(t);
        const Vec2 v = path_dot(t);
        const Vec2 p = nearest_image(x, c);
        const double r = p.norm();
        if (r >= radius_outer) return Vec2{0, 0};
        const double lin = -v.y * p.x + v.x * p.y;
        Vec2 g{-v.y * taper(r), v.x * taper(r)};
        if (r > 1e-14) {
            const double td = taper_d(r);
            g.x += lin * td * p.x / r;
            g.y += lin * td * p.y / r;
        }
        return g;
    };
    VelocityModel vm = velocity_from_stream(psi);
    vm.div_tol = 1e-8;
    return vm;
}

// ---------------------------------------------------------------------------
// Slab carousel
// ---------------------------------------------------------------------------

namespace {

struct CarouselGeom {
    Vec2 center;
    double a, b, rc, taper, period;
    double c0x, c0y;  // arc centers (first quadrant)
    double A1;        // area of the unit level set

    explicit CarouselGeom(const CarouselSpec& s)
        : center(s.center), a(s.half_width), b(s.half_height), rc(s.corner_radius),
          taper(s.taper), period(s.period) {
        if (!(a > 0) || !(b > 0)) throw std::invalid_argument("carousel: half-widths must be > 0");
        if (!(rc > 0) || rc > std::min(a, b) * 0.75)
            throw std::invalid_argument("carousel: corner_radius must lie in (0, 0.75*min(a,b)]");
        if (!(taper > 0) || taper >= 0.5)
            throw std::invalid_argument("carousel: taper must lie in (0, 0.5)");
        if (!(period > 0)) throw std::invalid_argument("carousel: period must be > 0");
        c0x = a - rc;
        c0y = b - rc;
        A1 = 4.0 * a * b - (4.0 - M_PI) * rc * rc;
    }

    // Gauge of the rounded rectangle. m < 1 inside, 1 on the cell boundary
    // level. Returns a large sentinel outside the bounding box.
    double gauge(double qx, double qy) const {
        if (qx >= a || qy >= b) return 2.0;
        if (qx * (b - rc) >= qy * a) return qx / a;       // vertical edge zone
        if (qy * (a - rc) >= qx * b) return qy / b;       // horizontal edge zone
        const double A = c0x * c0x + c0y * c0y - rc * rc; // corner zone
        const double B = qx * c0x + qy * c0y;
        const double C = qx * qx + qy * qy;
        const double disc = std::max(B * B - A * C, 0.0);
        return (B - std::sqrt(disc)) / A;
    }

    // Gradient of the gauge in first-quadrant coordinates.
    Vec2 gauge_grad(double qx, double qy, double m) const {
        if (qx * (b - rc) >= qy * a) return {1.0 / a, 0.0};
        if (qy * (a - rc) >= qx * b) return {0.0, 1.0 / b};
        const double rx = qx - m * c0x, ry = qy - m * c0y;
        const double nr = std::hypot(rx, ry);
        if (nr < 1e-15) return {0.0, 0.0};
        const double ux = rx / nr, uy = ry / nr;
        const double denom = c0x * ux + c0y * uy + rc;
        return {ux / denom, uy / denom};
    }

    double eta(double m) const {
        if (m <= 1.0 - taper) return 1.0;
        if (m >= 1.0) return 0.0;
        return smoothstep((1.0 - m) / taper);
    }

    // Psi'(m) = (2 A1 / period) m eta(m): isochronous circulation, full
    // circuit in `period` wherever eta = 1.
    double psi_prime(double m) const { return (2.0 * A1 / period) * m * eta(m); }

    // Psi(m) by closed form below the taper, small quadrature inside it.
    double psi_value(double m) const {
        const double m0 = 1.0 - taper;
        const double base = (2.0 * A1 / period) * 0.5;
        if (m <= m0) return base * m * m;
        const double cap = std::min(m, 1.0);
        const int panels = 32;
        const double h = (cap - m0) / (2 * panels);
        double s = psi_prime(m0) + psi_prime(cap);
        for (int i = 1; i < 2 * panels; ++i) s += (i % 2 ? 4.0 : 2.0) * psi_prime(m0 + i * h);
        return base * m0 * m0 + s * h / 3.0;
    }
};

} // namespace

double carousel_gauge(const CarouselSpec& spec, Vec2 x) {
    CarouselGeom g(spec);
    const Vec2 p = nearest_image(x, spec.center);
    return g.gauge(std::abs(p.x), std::abs(p.y));
}

StreamFunction carousel_stream(const CarouselSpec& spec) {
    CarouselGeom g(spec);
    StreamFunction psi;
    psi.name = "carousel";
    psi.tag = SmoothnessTag::Lipschitz;
    psi.eval = [g](double, Vec2 x) {
        const Vec2 p = nearest_image(x, g.center);
        const double m = g.gauge(std::abs(p.x), std::abs(p.y));
        if (m >= 1.0) return g.psi_value(1.0);
        return g.psi_value(m);
    };
    psi.gradient = [g](double, Vec2 x) {
        const Vec2 p = nearest_image(x, g.center);
        const double qx = std::abs(p.x), qy = std::abs(p.y);
        const double m = g.gauge(qx, qy);
        if (m >= 1.0 || m <= 0.0) return Vec2{0.0, 0.0};
        const double pp = g.psi_prime(m);
        if (pp == 0.0) return Vec2{0.0, 0.0};
        const Vec2 gq = g.gauge_grad(qx, qy, m);
        const double sx = p.x >= 0 ? 1.0 : -1.0;
        const double sy = p.y >= 0 ? 1.0 : -1.0;
        return Vec2{pp * gq.x * sx, pp * gq.y * sy};
    };
    return psi;
}

VelocityModel carousel_field(const CarouselSpec& spec) {
    VelocityModel vm = velocity_from_stream(carousel_stream(spec));
    vm.name = "carousel";
    vm.tag = SmoothnessTag::Lipschitz;
    // Analytically divergence-free; the boundary taper is far below any
    // affordable sampling grid, so the certification route is pointwise FD.
    vm.div_tol = 1e-8;
    return vm;
}

} // namespace tmix
