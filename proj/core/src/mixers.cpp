#include "tmix/mixers.hpp"

#include <algorithm>
#include <cmath>

namespace tmix {

// ---------------------------------------------------------------------------
// Snake mixer
// ---------------------------------------------------------------------------

namespace {

/// Stripe pattern: +1 iff |x1 - 1/2| < 1/4 (left band boundary closed so
/// node counts split exactly in half on grids divisible by 4).
ScalarField snake_stripe(const TorusGrid& grid) {
    const int n = grid.n();
    if (n % 12 != 0)
        throw std::invalid_argument(
            "snake pattern: grid must be divisible by 12 for exact band boundaries, got " +
            std::to_string(n));
    ScalarField f(grid);
    for (int i = 0; i < n; ++i) {
        const double v = (i >= n / 4 && i < 3 * n / 4) ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) f.at(i, j) = v;
    }
    return f;
}

/// The period-0 rearrangement in exact index arithmetic: reflect each of
/// the two slabs [1/12, 5/12) and [7/12, 11/12) through its center line.
/// Requires a column-constant (vertical band) field; the symmetric stripe
/// makes this reflection equal to rescale_pattern(., 1/3).
ScalarField snake_checkpoint(const ScalarField& f) {
    const int n = f.n();
    if (n % 12 != 0)
        throw std::invalid_argument("snake checkpoint: grid must be divisible by 12");
    for (int i = 0; i < n; ++i) {
        const double v0 = f.at(i, 0);
        for (int j = 1; j < n; ++j)
            if (f.at(i, j) != v0)
                throw std::invalid_argument(
                    "snake checkpoint: field must be constant along columns (vertical bands)");
    }
    ScalarField out(f.grid());
    for (int i = 0; i < n; ++i) {
        int src = i;
        if (i >= n / 12 && i < 5 * n / 12)
            src = (n / 2 - i + n) % n;           // reflect through x1 = 1/4
        else if (i >= 7 * n / 12 && i < 11 * n / 12)
            src = (3 * n / 2 - i) % n;           // reflect through x1 = 3/4
        const double v = f.at(src, 0);
        for (int j = 0; j < n; ++j) out.at(i, j) = v;
    }
    return out;
}

} // namespace

double snake_stripe_hm1_exact() { return 1.0 / (4.0 * std::sqrt(3.0)); }

MixerConstruction build_snake_mixer(const TorusGrid& grid) {
    if (grid.n() % 3 != 0)
        throw std::invalid_argument("build_snake_mixer: grid size must be divisible by 3");

    CarouselSpec left;
    left.center = {0.25, 0.5};
    left.half_width = 1.0 / 6.0;
    left.half_height = 0.5;
    left.corner_radius = 1.0 / 12.0;
    left.taper = 1.5e-3;
    left.period = 2.0;  // half circuit over the unit time block
    CarouselSpec right = left;
    right.center = {0.75, 0.5};

    VelocityModel c1 = carousel_field(left);
    VelocityModel c2 = carousel_field(right);
    VelocityModel u0;
    u0.name = "snake-mixer";
    u0.t_begin = 0.0;
    u0.t_end = 1.0;
    u0.tag = SmoothnessTag::Lipschitz;
    u0.div_tol = 1e-8;
    u0.eval = [c1, c2](double t, Vec2 x) {
        // Disjoint supports; bounding boxes give the fast path.
        const double dx1 = std::abs(torus_delta(x.x, 0.25));
        const double dx2 = std::abs(torus_delta(x.x, 0.75));
        if (dx1 < 1.0 / 6.0) return c1(t, x);
        if (dx2 < 1.0 / 6.0) return c2(t, x);
        return Vec2{0.0, 0.0};
    };

    MixerConstruction m;
    m.name = "snake";
    m.lambda = 1.0 / 3.0;
    m.u0 = u0;
    m.initial_pattern = snake_stripe;
    m.checkpoint_map = snake_checkpoint;
    m.regularity = SmoothnessTag::Lipschitz;
    m.hm1_closed_form = snake_stripe_hm1_exact();

    // The two replicated basic moves (both straight slabs; the corner kind
    // is reserved for bend-based evolutions).
    for (const CarouselSpec& spec : {left, right}) {
        BasicMove move;
        move.kind = BasicMove::Kind::Straight;
        move.cell_center = spec.center;
        move.cell_scale = 1.0;
        move.quarter_turns = 0;
        // Isotopy realized by integrating the steady carousel field; the
        // closed-form antipodal endpoint is what the tests pin down.
        VelocityModel field = carousel_field(spec);
        move.isotopy.name = "carousel-slab";
        move.isotopy.forward = [field](double t, Vec2 x) {
            if (t <= 0.0) return x;
            Vec2 y = x;
            const int steps = std::max(1, static_cast<int>(std::ceil(t / 2e-4)));
            const double h = t / steps;
            for (int s = 0; s < steps; ++s) {
                const double ts = s * h;
                const Vec2 k1 = field(ts, y);
                const Vec2 k2 = field(ts + 0.5 * h, y + (0.5 * h) * k1);
                const Vec2 k3 = field(ts + 0.5 * h, y + (0.5 * h) * k2);
                const Vec2 k4 = field(ts + h, y + h * k3);
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            return y;
        };
        VelocityModel neg = field;
        neg.eval = [field](double t, Vec2 x) { return -1.0 * field(t, x); };
        move.isotopy.inverse = [neg](double t, Vec2 x) {
            if (t <= 0.0) return x;
            Vec2 y = x;
            const int steps = std::max(1, static_cast<int>(std::ceil(t / 2e-4)));
            const double h = t / steps;
            for (int s = 0; s < steps; ++s) {
                const Vec2 k1 = neg(0, y);
                const Vec2 k2 = neg(0, y + (0.5 * h) * k1);
                const Vec2 k3 = neg(0, y + (0.5 * h) * k2);
                const Vec2 k4 = neg(0, y + h * k3);
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            return y;
        };
        move.isotopy.jacobian = [](double, Vec2) { return 1.0; };
        m.moves.push_back(std::move(move));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Pinch mixer
// ---------------------------------------------------------------------------

namespace {

constexpr int kDiskBaseGrid = 64;

/// Base-grid disk selection: exactly half the cells, chosen by torus
/// distance to (1/2, 1/2) with deterministic tie-breaking. Patterns on
/// finer grids block-replicate this selection, so pattern rescalings stay
/// exact index arithmetic.
const std::vector<char>& disk_base_selection() {
    static const std::vector<char> sel = [] {
        const int n = kDiskBaseGrid;
        struct Cell {
            double d2;
            int i, j;
        };
        std::vector<Cell> cells;
        cells.reserve(n * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double dx = torus_delta(static_cast<double>(i) / n, 0.5);
                const double dy = torus_delta(static_cast<double>(j) / n, 0.5);
                cells.push_back({dx * dx + dy * dy, i, j});
            }
        std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
            if (a.d2 != b.d2) return a.d2 < b.d2;
            if (a.j != b.j) return a.j < b.j;
            return a.i < b.i;
        });
        std::vector<char> mark(n * n, 0);
        for (int k = 0; k < n * n / 2; ++k) mark[cells[k].j * n + cells[k].i] = 1;
        return mark;
    }();
    return sel;
}

ScalarField pinch_disk_pattern(const TorusGrid& grid) {
    const int n = grid.n();
    if (n % kDiskBaseGrid != 0)
        throw std::invalid_argument("pinch pattern: grid must be a multiple of " +
                                    std::to_string(kDiskBaseGrid) + ", got " + std::to_string(n));
    const int block = n / kDiskBaseGrid;
    const auto& sel = disk_base_selection();
    ScalarField f(grid);
    for (int j = 0; j < n; ++j) {
        const int jb = j / block;
        for (int i = 0; i < n; ++i) {
            const int ib = i / block;
            f.at(i, j) = sel[jb * kDiskBaseGrid + ib] ? 1.0 : -1.0;
        }
    }
    return f;
}

/// Four half-scale copies at the quarter centers, written as explicit
/// block tiling of the even-index subsample (equals rescale_pattern(.,1/2)
/// on block-replicated patterns).
ScalarField pinch_checkpoint(const ScalarField& f) {
    const int n = f.n();
    if (n % 2 != 0) throw std::invalid_argument("pinch checkpoint: grid must be even");
    ScalarField out(f.grid());
    const int h = n / 2;
    for (int c2 = 0; c2 < 2; ++c2)
        for (int c1 = 0; c1 < 2; ++c1)
            for (int j = 0; j < h; ++j)
                for (int i = 0; i < h; ++i)
                    out.at(i + c1 * h, j + c2 * h) = f.at((2 * i) % n, (2 * j) % n);
    return out;
}

/// Normalized smooth stage ramp: integral over [0,1] equals 1 and the rate
/// vanishes to all orders at stage boundaries, so the concatenated pinch
/// velocity is continuous in time.
struct StageRamp {
    double norm;
    StageRamp() {
        const int panels = 512;
        double s = raw(0.0) + raw(1.0);
        const double h = 1.0 / (2 * panels);
        for (int i = 1; i < 2 * panels; ++i) s += (i % 2 ? 4.0 : 2.0) * raw(i * h);
        norm = s * h / 3.0;
    }
    static double raw(double tau) { return smooth_window(tau, 0.3); }
    double rate(double tau) const { return raw(tau) / norm; }
    double cumulative(double tau) const {
        if (tau <= 0.0) return 0.0;
        if (tau >= 1.0) return 1.0;
        const int panels = 128;
        double s = raw(0.0) + raw(tau);
        const double h = tau / (2 * panels);
        for (int i = 1; i < 2 * panels; ++i) s += (i % 2 ? 4.0 : 2.0) * raw(i * h);
        return (s * h / 3.0) / norm;
    }
};

/// Stage (a): gentle hyperbolic elongation psi = A s1 s2 F(|s|), cut off
/// smoothly before the torus seam.
VelocityModel elongation_field(double strength) {
    auto taper = [](double r) {
        if (r <= 0.46) return 1.0;
        if (r >= 0.4995) return 0.0;
        return smoothstep((0.4995 - r) / (0.4995 - 0.46));
    };
    auto taper_d = [taper](double r) {
        if (r <= 0.46 || r >= 0.4995) return 0.0;
        const double h = 1e-6;
        return (taper(r + h) - taper(r - h)) / (2 * h);
    };
    StreamFunction psi;
    psi.name = "elongate";
    psi.eval = [strength, taper](double, Vec2 x) {
        const Vec2 s{torus_delta(x.x, 0.5), torus_delta(x.y, 0.5)};
        const double r = s.norm();
        return strength * s.x * s.y * taper(r);
    };
    psi.gradient = [strength, taper, taper_d](double, Vec2 x) {
        const Vec2 s{torus_delta(x.x, 0.5), torus_delta(x.y, 0.5)};
        const double r = s.norm();
        if (r >= 0.4995) return Vec2{0, 0};
        const double F = taper(r), Fd = taper_d(r);
        Vec2 g{strength * s.y * F, strength * s.x * F};
        if (r > 1e-14) {
            g.x += strength * s.x * s.y * Fd * s.x / r;
            g.y += strength * s.x * s.y * Fd * s.y / r;
        }
        return g;
    };
    return velocity_from_stream(psi);
}

} // namespace

MixerConstruction build_pinch_mixer(double delta, const TorusGrid& grid) {
    if (grid.n() % 2 != 0)
        throw std::invalid_argument("build_pinch_mixer: grid size must be divisible by 2");
    if (!(delta > 0.0))
        throw std::invalid_argument(
            "build_pinch_mixer: delta = 0 is not integrable through the singular time");

    // Stage fields. Exposure of each steady field over its fifth is exactly 1.
    VelocityModel elongate = elongation_field(0.15);
    VelocityModel pinch_h = pinch_field({0.5, 0.5}, 0.30, delta, 2.0, /*axis=*/0);
    VelocityModel pinch_v_top = pinch_field({0.5, 0.75}, 0.24, delta, 2.0, /*axis=*/1, /*reach=*/0.22);
    VelocityModel pinch_v_bot = pinch_field({0.5, 0.25}, 0.24, delta, 2.0, /*axis=*/1, /*reach=*/0.22);

    // Stage (d): nudge the four pieces toward the quarter centers.
    struct Carry {
        Vec2 from, to;
    };
    const std::vector<Carry> carries = {
        {{0.34, 0.27}, {0.25, 0.25}}, {{0.66, 0.27}, {0.75, 0.25}},
        {{0.34, 0.73}, {0.25, 0.75}}, {{0.66, 0.73}, {0.75, 0.75}}};
    std::vector<VelocityModel> patches;
    for (const Carry& c : carries) {
        const Vec2 d = c.to - c.from;
        patches.push_back(moving_patch(
            [c, d](double sigma) { return Vec2{c.from.x + sigma * d.x, c.from.y + sigma * d.y}; },
            [d](double) { return d; }, 0.12, 0.20));
    }

    static const StageRamp ramp;  // shared, immutable

    VelocityModel u0;
    u0.name = "pinch-mixer";
    u0.t_begin = 0.0;
    u0.t_end = 1.0;
    u0.tag = SmoothnessTag::SobolevP;
    u0.sobolev_p = 2.0;
    u0.div_tol = 1e-3;  // sqrt kink at the neck line limits spectral regularity
    u0.eval = [elongate, pinch_h, pinch_v_top, pinch_v_bot, patches](double t, Vec2 x) {
        if (t < 0.0 || t > 1.0) return Vec2{0.0, 0.0};
        const int stage = std::min(4, static_cast<int>(t * 5.0));
        const double tau = t * 5.0 - stage;
        const double rate = 5.0 * ramp.rate(tau);
        if (rate == 0.0) return Vec2{0.0, 0.0};
        switch (stage) {
            case 0: return rate * elongate(0.0, x);
            case 1: return rate * pinch_h(0.0, x);
            case 2: return rate * pinch_v_top(0.0, x);
            case 3: return rate * pinch_v_bot(0.0, x);
            default: {
                const double sigma = ramp.cumulative(tau);
                Vec2 u{0, 0};
                for (const auto& p : patches) u = u + p(sigma, x);
                return rate * u;
            }
        }
    };

    MixerConstruction m;
    m.name = "pinch";
    m.lambda = 0.5;
    m.u0 = u0;
    m.initial_pattern = pinch_disk_pattern;
    m.checkpoint_map = pinch_checkpoint;
    m.regularity = SmoothnessTag::SobolevP;
    m.sobolev_p = 2.0;
    return m;
}

MixerConstruction build_pinch_squared_mixer(double delta, const TorusGrid& grid) {
    MixerConstruction base = build_pinch_mixer(delta, grid);
    MixerConstruction m;
    m.name = "pinch2";
    m.lambda = 0.25;
    m.initial_pattern = base.initial_pattern;
    m.checkpoint_map = [base](const ScalarField& f) {
        return base.checkpoint_map(base.checkpoint_map(f));
    };
    m.regularity = base.regularity;
    m.sobolev_p = base.sobolev_p;
    // Two unit blocks compressed into [0,1]: first period sped up 2x, the
    // second is its half-scale replica.
    VelocityModel u_base = base.u0;
    VelocityModel u0;
    u0.name = "pinch2-mixer";
    u0.t_begin = 0.0;
    u0.t_end = 1.0;
    u0.tag = base.u0.tag;
    u0.sobolev_p = base.u0.sobolev_p;
    u0.div_tol = base.u0.div_tol;
    u0.eval = [u_base](double t, Vec2 x) {
        if (t < 0.5) return 2.0 * u_base(2.0 * t, x);
        const Vec2 u = u_base(2.0 * t - 1.0, {wrap01(2.0 * x.x), wrap01(2.0 * x.y)});
        return Vec2{u.x, u.y};  // lambda/tau = (1/2)/(1/2) = 1 amplitude
    };
    m.u0 = u0;
    return m;
}

// ---------------------------------------------------------------------------

ScalarField nominal_pattern(const MixerConstruction& mixer, int n, const TorusGrid& grid) {
    if (n < 0) throw std::invalid_argument("nominal_pattern: n must be >= 0");
    const double cells_per_period = grid.n() * std::pow(mixer.lambda, n);
    if (cells_per_period < 8.0 - 1e-9)
        throw std::invalid_argument(
            "nominal_pattern: resolution insufficient at level " + std::to_string(n) +
            "; need at least " +
            std::to_string(static_cast<int>(std::ceil(8.0 / std::pow(mixer.lambda, n)))) +
            " grid points per axis");
    ScalarField f = mixer.initial_pattern(grid);
    for (int k = 0; k < n; ++k) f = rescale_pattern(f, mixer.lambda);
    return f;
}

int component_count(const ScalarField& field) {
    const int n = field.n();
    const auto& v = field.values();
    std::vector<char> seen(field.grid().size(), 0);
    std::vector<std::int32_t> stack;
    int components = 0;
    auto is_plus = [&](std::int64_t k) { return std::abs(v[k] - 1.0) <= 1e-6; };
    for (std::int64_t start = 0; start < field.grid().size(); ++start) {
        if (seen[start] || !is_plus(start)) continue;
        ++components;
        stack.push_back(static_cast<std::int32_t>(start));
        seen[start] = 1;
        while (!stack.empty()) {
            const std::int32_t k = stack.back();
            stack.pop_back();
            const int i = k % n, j = k / n;
            const std::int32_t nb[4] = {
                static_cast<std::int32_t>(j * n + (i + 1) % n),
                static_cast<std::int32_t>(j * n + (i + n - 1) % n),
                static_cast<std::int32_t>(((j + 1) % n) * n + i),
                static_cast<std::int32_t>(((j + n - 1) % n) * n + i)};
            for (std::int32_t b : nb) {
                if (!seen[b] && is_plus(b)) {
                    seen[b] = 1;
                    stack.push_back(b);
                }
            }
        }
    }
    return components;
}

double disk_pattern_hm1_reference(int kmax) {
    const double R = std::sqrt(0.5 / M_PI);
    const double two_pi = 2.0 * M_PI;
    double acc = 0.0;
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
        for (int k1 = -kmax; k1 <= kmax; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            const double kabs = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
            const double fh = 2.0 * (R / kabs) * std::cyl_bessel_j(1, two_pi * R * kabs);
            acc += fh * fh / (two_pi * two_pi * kabs * kabs);
        }
    }
    return std::sqrt(acc);
}

} // namespace tmix
