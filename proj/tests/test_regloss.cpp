#include <doctest.h>

#include "tmix/advect.hpp"
#include "tmix/regloss.hpp"

using namespace tmix;

TEST_SUITE_BEGIN("unit");

TEST_CASE("default_schedule: geometry and parameter checks") {
    SUBCASE("N = 1 is trivially disjoint") { CHECK_NOTHROW(default_schedule(1).validate()); }
    SUBCASE("N = 10 passes the pairwise gap scan") {
        CubeSchedule sched = default_schedule(10);
        CHECK(sched.N() == 10);
        sched.validate();
        double min_rel_gap = 1e9;
        for (int a = 0; a < 10; ++a)
            for (int b = a + 1; b < 10; ++b) {
                const auto& ca = sched.cubes[a];
                const auto& cb = sched.cubes[b];
                const double gap = std::max(std::abs(ca.center.x - cb.center.x),
                                            std::abs(ca.center.y - cb.center.y)) -
                                   0.5 * (ca.side + cb.side);
                min_rel_gap = std::min(min_rel_gap, gap / std::max(ca.side, cb.side));
            }
        CHECK(min_rel_gap >= 0.25);
    }
    SUBCASE("sides decrease, amplitudes lambda/tau decay for n >= 4") {
        CubeSchedule sched = default_schedule(10);
        for (int k = 1; k < 10; ++k) CHECK(sched.cubes[k].side < sched.cubes[k - 1].side);
        for (int k = 3; k < 9; ++k) {
            const double a0 = sched.cubes[k].side / sched.cubes[k].tau;
            const double a1 = sched.cubes[k + 1].side / sched.cubes[k + 1].tau;
            CHECK(a1 < a0);
        }
    }
    SUBCASE("N out of range rejected") {
        CHECK_THROWS_AS(default_schedule(0), std::invalid_argument);
        CHECK_THROWS_AS(default_schedule(13), std::invalid_argument);
    }
    SUBCASE("overlap detected") {
        CubeSchedule bad = default_schedule(3);
        bad.cubes[2].center = bad.cubes[1].center;
        CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("overlap"), std::invalid_argument);
    }
}

TEST_CASE("assemble: the single-cube identity reduction") {
    TorusGrid g(108);
    MixerConstruction snake = build_snake_mixer(g);
    CubeSchedule one;
    one.accumulation_point = {0.5, 0.5};
    one.cubes.push_back({{0.5, 0.5}, 1.0, 1.0, 1.0});
    Assembly asm1 = assemble(one, snake, 108);
    VelocityModel local = asm1.cube_velocity(0);
    for (double t : {0.1, 0.7}) {
        for (Vec2 x : {Vec2{0.3, 0.3}, Vec2{0.22, 0.81}}) {
            const Vec2 a = local(t, x);
            const Vec2 b = snake.u0(t, x);
            REQUIRE((a - b).norm() <= 1e-12);
        }
    }
}

TEST_CASE("assemble: datum L2 matches the change-of-variables rule exactly") {
    TorusGrid g(324);
    MixerConstruction snake = build_snake_mixer(g);
    CubeSchedule sched = default_schedule(3);
    Assembly a = assemble(sched, snake, 324);  // cube grid = base grid: no resampling
    RegBase base(g);
    const double base_l2 = base.theta.l2_norm();
    for (int k = 0; k < 3; ++k) {
        const ScalarField th = a.cube_datum(k, base);
        // ||theta_n(0)||_{L2(plane)} = C_n lambda_n ||rho_bar||_{L2(unit)}:
        // in cube-local samples that is exactly C_n times the base values.
        const double want = sched.cubes[k].amplitude * base_l2;
        REQUIRE(th.l2_norm() == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("assemble: cube advection probe equals the base-block advection") {
    // The local chart turns v_n into (1/tau) u(t/tau, .), so tracing over
    // [0, 0.3 tau] with matched steps reproduces the base trace over
    // [0, 0.3]; this is the continuity-equation consistency check per cube.
    TorusGrid g(108);
    MixerConstruction snake = build_snake_mixer(g);
    CubeSchedule sched = default_schedule(2);
    Assembly a = assemble(sched, snake, 108);
    const int k = 1;
    const double tau = sched.cubes[k].tau;
    VelocityModel local = a.cube_velocity(k);
    IntegratorConfig ic_local;
    ic_local.dt = 3e-4 * tau;
    IntegratorConfig ic_base;
    ic_base.dt = 3e-4;
    for (Vec2 x : {Vec2{0.31, 0.42}, Vec2{0.7, 0.2}}) {
        const Vec2 via_cube = trace(local, 0.0, 0.3 * tau, x, ic_local);
        const Vec2 via_base = trace(snake.u0, 0.0, 0.3, x, ic_base);
        REQUIRE(torus_dist(via_cube, via_base) <= 1e-10);
    }
}

TEST_CASE("assemble: velocity validation") {
    TorusGrid g(108);
    MixerConstruction snake = build_snake_mixer(g);
    CHECK_THROWS_AS(assemble(default_schedule(2), snake, 32), std::invalid_argument);
    Assembly a = assemble(default_schedule(2), snake, 108);
    // Outside every cube the assembled velocity is zero.
    VelocityModel v = a.velocity();
    CHECK(v(0.1, {0.02, 0.02}).norm() == 0.0);
}

TEST_CASE("saturation probe on the snake") {
    TorusGrid g(648);
    MixerConstruction snake = build_snake_mixer(g);
    SaturationReport rep = saturation_probe(snake, {0.5, 1.0}, 5, g);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        const double expect = row.s * std::log(3.0);
        CHECK(std::abs(row.decay_rate - expect) <= 0.10 * expect);
        CHECK(row.growth_rate >= 0.9 * row.decay_rate);
        CHECK(row.measured_levels == 1);
        CHECK(row.saturates);
    }
    CHECK(rep.interpolation_ok);
    CHECK_THROWS_AS(saturation_probe(snake, {0.5}, 3, g), std::invalid_argument);
    CHECK_THROWS_AS(saturation_probe(snake, {0.7}, 5, g), std::invalid_argument);
}

TEST_CASE("loss report: tails, smoothness, divergence trends") {
    TorusGrid g(324);
    MixerConstruction snake = build_snake_mixer(g);
    CubeSchedule sched = default_schedule(10);
    const std::vector<double> t_list = {0.0, 0.25, 0.5, 1.0};
    const std::vector<double> s_list = {0.25, 0.5};
    const std::vector<double> p_list = {1.0, 2.0, 4.0};
    LossReport rep = loss_report(sched, snake, t_list, s_list, p_list, 10, g);

    SUBCASE("velocity partial sums converge: last-two-cube tail below 1%") {
        for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
            CHECK(rep.verdicts.velocity_bounded[ip]);
            const long double total = rep.v_partial_pow[ip][9];
            const long double head = rep.v_partial_pow[ip][7];
            CHECK(static_cast<double>((total - head) / total) < 0.01);
        }
    }
    SUBCASE("smoothness proxies decrease in n for the first 4 derivatives") {
        CHECK(rep.verdicts.datum_smooth);
    }
    SUBCASE("partial sums are nondecreasing in N for every probe") {
        for (std::size_t it = 0; it < t_list.size(); ++it)
            for (std::size_t is = 0; is < s_list.size(); ++is)
                for (int k = 1; k < 10; ++k)
                    REQUIRE(rep.theta_partial[it][is][k] >= rep.theta_partial[it][is][k - 1]);
    }
    SUBCASE("t = 0 sums convergent; t > 0 divergent trend") {
        for (std::size_t is = 0; is < s_list.size(); ++is) {
            CHECK(rep.verdicts.theta_trend[0][is] == "convergent");
            for (std::size_t it = 1; it < t_list.size(); ++it)
                CHECK(rep.verdicts.theta_trend[it][is] == "divergent-trend");
        }
    }
    SUBCASE("t = 1, s = 1/2: N = 10 sum exceeds 10x the N = 1 value, final increment largest") {
        const auto& partial = rep.theta_partial[3][1];
        CHECK(partial[9] > 10.0L * partial[0]);
        // Final increment dominates: the last partial sum dwarfs the previous.
        CHECK(partial[9] * partial[9] - partial[8] * partial[8] >
              partial[8] * partial[8] - partial[7] * partial[7]);
    }
    SUBCASE("N guard") {
        CHECK_THROWS_AS(loss_report(sched, snake, t_list, s_list, p_list, 11, g),
                        std::invalid_argument);
    }
}

TEST_SUITE_END();
