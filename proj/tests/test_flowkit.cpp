#include <doctest.h>

#include <random>

#include "tmix/advect.hpp"
#include "tmix/flowkit.hpp"
#include "tmix/norms.hpp"

using namespace tmix;

TEST_SUITE_BEGIN("unit");

TEST_CASE("velocity_from_stream: zero and hand-differentiated examples") {
    SUBCASE("psi = 0 -> zero velocity") {
        StreamFunction psi;
        psi.eval = [](double, Vec2) { return 0.0; };
        VelocityModel vm = velocity_from_stream(psi);
        CHECK(vm(0.0, {0.3, 0.7}).norm() == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("psi = sin(2 pi x1)/(2 pi) -> u = (0, -cos(2 pi x1)), FD path") {
        StreamFunction psi;
        psi.eval = [](double, Vec2 x) { return std::sin(2 * M_PI * x.x) / (2 * M_PI); };
        VelocityModel vm = velocity_from_stream(psi);
        double err = 0;
        for (double x1 : {0.0, 0.13, 0.31, 0.5, 0.77}) {
            const Vec2 u = vm(0.0, {x1, 0.4});
            err = std::max(err, std::abs(u.x));
            err = std::max(err, std::abs(u.y + std::cos(2 * M_PI * x1)));
        }
        CHECK(err <= 1e-10);
    }
    SUBCASE("non-periodic stream rejected") {
        StreamFunction psi;
        psi.eval = [](double, Vec2 x) { return x.x * x.x; };
        CHECK_THROWS_AS(velocity_from_stream(psi), std::invalid_argument);
    }
}

TEST_CASE("velocity_from_stream: random band-limited psi is divergence-free at 512^2") {
    std::mt19937_64 rng(414);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    struct Mode {
        int k1, k2;
        double a, b;
    };
    std::vector<Mode> modes;
    for (int k2 = -6; k2 <= 6; ++k2)
        for (int k1 = 0; k1 <= 6; ++k1) {
            if (k1 == 0 && k2 <= 0) continue;
            modes.push_back({k1, k2, uni(rng), uni(rng)});
        }
    StreamFunction psi;
    psi.eval = [modes](double, Vec2 x) {
        double v = 0;
        for (const Mode& m : modes) {
            const double ph = 2 * M_PI * (m.k1 * x.x + m.k2 * x.y);
            v += m.a * std::cos(ph) + m.b * std::sin(ph);
        }
        return v;
    };
    VelocityModel vm = velocity_from_stream(psi);  // FD gradient path
    CHECK(divergence_l2(vm, 0.0, TorusGrid(512)) <= 1e-10);
}

TEST_CASE("velocity_from_isotopy") {
    SUBCASE("identity isotopy -> zero velocity") {
        IsotopySpec iso;
        iso.forward = [](double, Vec2 x) { return x; };
        iso.inverse = [](double, Vec2 x) { return x; };
        iso.jacobian = [](double, Vec2) { return 1.0; };
        VelocityModel vm = velocity_from_isotopy(iso, 1e-4, 0);
        CHECK(vm(0.5, {0.3, 0.8}).norm() <= 1e-10);
    }
    SUBCASE("rigid rotation: tangential velocity of magnitude pi r in the core") {
        IsotopySpec iso = rotation_isotopy({0.5, 0.5}, 0.2, 0.4, M_PI);
        VelocityModel vm = velocity_from_isotopy(iso, 1e-4, 96);
        const double r = 0.1;
        const Vec2 u = vm(0.3, {0.5 + r, 0.5});
        CHECK(std::abs(u.x) <= 1e-8);
        CHECK(u.y == doctest::Approx(M_PI * r).epsilon(1e-6));
    }
    SUBCASE("linear squeeze diag(3^-t, 3^t): closed-form velocity, unit Jacobian") {
        IsotopySpec iso;
        iso.name = "squeeze";
        iso.forward = [](double t, Vec2 x) {
            return Vec2{0.5 + (x.x - 0.5) * std::pow(3.0, -t), 0.5 + (x.y - 0.5) * std::pow(3.0, t)};
        };
        iso.inverse = [](double t, Vec2 x) {
            return Vec2{0.5 + (x.x - 0.5) * std::pow(3.0, t), 0.5 + (x.y - 0.5) * std::pow(3.0, -t)};
        };
        iso.jacobian = [](double, Vec2) { return 1.0; };
        VelocityModel vm = velocity_from_isotopy(iso, 1e-4, 0);  // cell-local chart
        const Vec2 s{0.2, -0.13};
        const Vec2 u = vm(0.4, {0.5 + s.x, 0.5 + s.y});
        CHECK(u.x == doctest::Approx(-std::log(3.0) * s.x).epsilon(1e-7));
        CHECK(u.y == doctest::Approx(std::log(3.0) * s.y).epsilon(1e-7));
    }
    SUBCASE("non-area-preserving isotopy rejected with measured divergence") {
        IsotopySpec iso;
        iso.forward = [](double t, Vec2 x) {
            return Vec2{0.5 + (x.x - 0.5) * (1.0 + 0.1 * t), x.y};
        };
        iso.inverse = [](double t, Vec2 x) {
            return Vec2{0.5 + (x.x - 0.5) / (1.0 + 0.1 * t), x.y};
        };
        CHECK_THROWS_WITH_AS(velocity_from_isotopy(iso, 1e-4, 0),
                             doctest::Contains("divergence"), std::invalid_argument);
    }
}

TEST_CASE("rotation_field") {
    SUBCASE("angle_rate = 0 -> zero field") {
        VelocityModel vm = rotation_field({0.5, 0.5}, 0.1, 0.3, 0.0);
        CHECK(vm(0.0, {0.55, 0.5}).norm() <= 1e-14);
    }
    SUBCASE("orbit closes after one turn at rate 2 pi") {
        VelocityModel vm = rotation_field({0.5, 0.5}, 0.2, 0.4, 2 * M_PI);
        IntegratorConfig ic;
        ic.dt = 1e-3;
        const Vec2 x0{0.6, 0.5};  // distance r_core/2 from center
        const Vec2 x1 = trace(vm, 0.0, 1.0, x0, ic);
        CHECK(torus_dist(x1, x0) <= 1e-6);
    }
    SUBCASE("smooth tag; sup-gradient stable under grid doubling") {
        VelocityModel vm = rotation_field({0.5, 0.5}, 0.15, 0.35, M_PI);
        CHECK(vm.tag == SmoothnessTag::Smooth);
        W1pCheck c = w1p_seminorm_checked(vm, 0.0, std::numeric_limits<double>::infinity(),
                                          TorusGrid(192));
        CHECK(std::isfinite(c.value));
        CHECK(!c.under_resolved);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(rotation_field({0.5, 0.5}, 0.4, 0.3, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(rotation_field({0.5, 0.5}, 0.1, 0.6, 1.0), std::invalid_argument);
    }
}

TEST_CASE("isotopy- and stream-generated rotations agree pointwise") {
    VelocityModel a = rotation_field({0.5, 0.5}, 0.15, 0.35, M_PI);
    VelocityModel b = velocity_from_isotopy(rotation_isotopy({0.5, 0.5}, 0.15, 0.35, M_PI), 1e-4, 0);
    double err = 0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Vec2 x{uni(rng), uni(rng)};
        const Vec2 ua = a(0.37, x), ub = b(0.37, x);
        err = std::max(err, (ua - ub).norm());
    }
    CHECK(err <= 1e-4);
}

TEST_CASE("bend_map") {
    const double r_in = 0.2, span = M_PI / 2, th = 0.05;
    IsotopySpec bend = bend_map(r_in, span, th);
    const double L = r_in * span;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(0.0, L), uy(0.0, th), ut(0.0, 1.0);

    SUBCASE("symbolic Jacobian is 1 to 1e-12, smallest tested span pi/16") {
        IsotopySpec narrow = bend_map(r_in, M_PI / 16, th);
        const double Ln = r_in * (M_PI / 16);
        std::uniform_real_distribution<double> uxn(0.0, Ln);
        double worst = 0;
        for (int k = 0; k < 10000; ++k) {
            const Vec2 q{uxn(rng), uy(rng)};
            worst = std::max(worst, std::abs(narrow.jacobian(ut(rng), q) - 1.0));
        }
        CHECK(worst <= 1e-12);
    }
    SUBCASE("area preservation oracle: Monte Carlo mean of |J| over 1e6 points") {
        double acc = 0;
        const int n_samples = 1000000;
        for (int k = 0; k < n_samples; ++k) acc += std::abs(bend.jacobian(1.0, {ux(rng), uy(rng)}));
        const double area = (acc / n_samples) * L * th;
        CHECK(std::abs(area - L * th) <= 1e-10);
    }
    SUBCASE("forward then inverse is the identity to 1e-12") {
        double worst = 0;
        for (int k = 0; k < 2000; ++k) {
            const double t = ut(rng);
            const Vec2 q{ux(rng), uy(rng)};
            const Vec2 back = bend.inverse(t, bend.forward(t, q));
            worst = std::max(worst, (back - q).norm());
        }
        CHECK(worst <= 1e-12);
    }
    SUBCASE("Phi_0 is the identity and Phi_t is continuous down to t = 0") {
        const Vec2 q{0.7 * L, 0.3 * th};
        CHECK((bend.forward(0.0, q) - q).norm() == 0.0);
        CHECK((bend.forward(1e-9, q) - q).norm() <= 1e-6);
    }
    SUBCASE("nonpositive r^2 rejected") {
        CHECK_THROWS_AS(bend.forward(1.0, {0.1, -0.5}), std::invalid_argument);
        CHECK_THROWS_AS(bend_map(-0.1, 1.0, 0.05), std::invalid_argument);
    }
}

TEST_CASE("pinch_field") {
    SUBCASE("rate = 0 -> zero field") {
        VelocityModel vm = pinch_field({0.5, 0.5}, 0.3, 1e-3, 0.0);
        CHECK(vm(0.0, {0.52, 0.5}).norm() == 0.0);
    }
    SUBCASE("seeds straddling the neck separate past neck_width/2") {
        // Compression collapses the cross-neck offset; the compensating
        // decompression then ejects the seeds along the neck to a gap
        // beyond half the window width.
        const double W = 0.3;
        VelocityModel vm = pinch_field({0.5, 0.5}, W, 1e-3, 2.0);
        IntegratorConfig ic;
        ic.dt = 5e-4;
        const Vec2 a = trace(vm, 0.0, 1.0, {0.51, 0.51}, ic);
        const Vec2 b = trace(vm, 0.0, 1.0, {0.49, 0.49}, ic);
        CHECK(std::abs(a.y - b.y) > W / 2);
    }
    SUBCASE("delta = 0 is a probe: norms fine, integration rejected") {
        VelocityModel vm = pinch_field({0.5, 0.5}, 0.3, 0.0, 2.0);
        CHECK(!vm.integrable);
        CHECK(std::isfinite(w1p_seminorm(vm, 0.0, 2.0, TorusGrid(256))));
        IntegratorConfig ic;
        CHECK_THROWS_AS(trace(vm, 0.0, 0.1, {0.52, 0.5}, ic), std::invalid_argument);
    }
    SUBCASE("W^{1,2} grows as delta decreases (golden table at 512^2)") {
        TorusGrid g(512);
        std::vector<double> vals;
        for (double delta : {1e-2, 1e-3, 1e-4})
            vals.push_back(w1p_seminorm(pinch_field({0.5, 0.5}, 0.3, delta, 2.0), 0.0, 2.0, g));
        CHECK(vals[0] < vals[1]);
        CHECK(vals[1] < vals[2]);
        // Golden values recorded from this configuration.
        CHECK(vals[0] == doctest::Approx(36.12485718063958).epsilon(1e-9));
        CHECK(vals[1] == doctest::Approx(66.022896947334729).epsilon(1e-9));
        CHECK(vals[2] == doctest::Approx(334.47711108349728).epsilon(1e-9));
    }
}

TEST_CASE("moving_patch carries its core rigidly") {
    auto path = [](double s) { return Vec2{0.3 + 0.2 * s, 0.4 + 0.1 * s}; };
    auto path_dot = [](double) { return Vec2{0.2, 0.1}; };
    VelocityModel vm = moving_patch(path, path_dot, 0.08, 0.15);
    IntegratorConfig ic;
    ic.dt = 1e-3;
    const Vec2 start{0.33, 0.42};  // inside the core at s = 0
    const Vec2 end = trace(vm, 0.0, 1.0, start, ic);
    const Vec2 want{start.x + 0.2, start.y + 0.1};
    CHECK(torus_dist(end, want) <= 1e-8);
}

TEST_CASE("carousel: gauge, tangency, boundary, antipodal half-circuit") {
    CarouselSpec spec;
    spec.center = {0.25, 0.5};
    spec.half_width = 1.0 / 6.0;
    spec.half_height = 0.5;
    spec.corner_radius = 1.0 / 12.0;
    spec.taper = 1.5e-3;
    spec.period = 2.0;
    VelocityModel vm = carousel_field(spec);

    SUBCASE("gauge: 0 at center, 1 on the cell boundary") {
        CHECK(carousel_gauge(spec, {0.25, 0.5}) == doctest::Approx(0.0));
        CHECK(carousel_gauge(spec, {0.25 + 1.0 / 6.0, 0.5}) == doctest::Approx(1.0));
        CHECK(carousel_gauge(spec, {0.25, 0.0}) == doctest::Approx(1.0));
    }
    SUBCASE("velocity vanishes identically outside and on the boundary") {
        CHECK(vm(0.0, {0.25 + 1.0 / 6.0, 0.3}).norm() == 0.0);
        CHECK(vm(0.0, {0.25, 0.0}).norm() == 0.0);
        CHECK(vm(0.0, {0.6, 0.2}).norm() == 0.0);
    }
    SUBCASE("pointwise FD divergence off the junction lines") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> ux(0.25 - 0.15, 0.25 + 0.15);
        std::uniform_real_distribution<double> uy(0.1, 0.9);
        double worst = 0;
        int tested = 0;
        while (tested < 200) {
            const Vec2 x{ux(rng), uy(rng)};
            const double m = carousel_gauge(spec, x);
            if (m > 0.97 || m < 0.03) continue;  // keep FD stencils off the taper/center
            worst = std::max(worst, std::abs(divergence_fd(vm, 0.0, x, 1e-5)));
            ++tested;
        }
        CHECK(worst <= 1e-6);
    }
    SUBCASE("time period/2 reaches the antipode on every level") {
        IntegratorConfig ic;
        ic.dt = 2e-4;
        for (const Vec2 x0 : {Vec2{0.25 + 0.1, 0.5}, Vec2{0.25, 0.85}, Vec2{0.17, 0.31},
                              Vec2{0.25 - 0.12, 0.64}}) {
            const Vec2 x1 = trace(vm, 0.0, 1.0, x0, ic);
            const Vec2 want{2 * 0.25 - x0.x, 2 * 0.5 - x0.y};
            REQUIRE(torus_dist(x1, want) <= 5e-5);
        }
    }
}

TEST_SUITE_END();
