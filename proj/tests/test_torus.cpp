#include <doctest.h>

#include <random>

#include "tmix/torus.hpp"

using namespace tmix;

namespace {

/// Random real band-limited field: modes |k_i| <= kmax, built in physical
/// space so it is exactly real.
ScalarField random_band_field(const TorusGrid& grid, int kmax, std::uint64_t seed,
                              bool mean_zero = true) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ScalarField f(grid, 0.0);
    const int n = grid.n();
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
        for (int k1 = 0; k1 <= kmax; ++k1) {
            if (k1 == 0 && k2 <= 0) continue;
            const double a = uni(rng), b = uni(rng);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double ph = 2 * M_PI *
                                      (k1 * static_cast<double>(i) + k2 * static_cast<double>(j)) /
                                      n;
                    f.at(i, j) += a * std::cos(ph) + b * std::sin(ph);
                }
        }
    }
    if (!mean_zero)
        for (auto& v : f.values()) v += 0.37;
    return f;
}

} // namespace

TEST_SUITE_BEGIN("unit");

TEST_CASE("grid admissibility") {
    CHECK_NOTHROW(TorusGrid(64));
    CHECK_NOTHROW(TorusGrid(108));
    CHECK_NOTHROW(TorusGrid(972));
    CHECK_THROWS_AS(TorusGrid(3), std::invalid_argument);   // below minimum
    CHECK_THROWS_AS(TorusGrid(100), std::invalid_argument); // factor 5^2
    CHECK_THROWS_AS(TorusGrid(56), std::invalid_argument);  // factor 7
}

TEST_CASE("to_spectral: zero field, constant field, single mode") {
    TorusGrid g(256);
    SUBCASE("zero field -> all-zero coefficients") {
        SpectralField sf = to_spectral(ScalarField(g, 0.0));
        for (const auto& c : sf.coeffs()) CHECK(std::abs(c) == 0.0);
    }
    SUBCASE("constant 1 -> coefficient 1 at k = 0") {
        SpectralField sf = to_spectral(ScalarField(g, 1.0));
        CHECK(std::abs(sf.at_bin(0, 0) - 1.0) < 1e-14);
        double off = 0;
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i)
                if (i || j) off = std::max(off, std::abs(sf.at_bin(i, j)));
        CHECK(off < 1e-13);
    }
    SUBCASE("sin(2 pi x1): coefficients -i/2 at k=(1,0), +i/2 at k=(-1,0)") {
        ScalarField f(g);
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) f.at(i, j) = std::sin(2 * M_PI * i / g.n());
        SpectralField sf = to_spectral(f);
        CHECK(std::abs(sf.at_bin(1, 0) - std::complex<double>(0, -0.5)) < 1e-12);
        CHECK(std::abs(sf.at_bin(g.n() - 1, 0) - std::complex<double>(0, 0.5)) < 1e-12);
        double off = 0;
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) {
                if ((i == 1 || i == g.n() - 1) && j == 0) continue;
                off = std::max(off, std::abs(sf.at_bin(i, j)));
            }
        CHECK(off <= 1e-12);
    }
}

TEST_CASE("to_spectral rejects non-finite input with the offending index") {
    TorusGrid g(64);
    ScalarField f(g, 0.0);
    f.at(5, 7) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(to_spectral(f), doctest::Contains("(5,7)"), std::invalid_argument);
}

TEST_CASE("Parseval on random data") {
    TorusGrid g(192);
    ScalarField f = random_band_field(g, 9, 11, false);
    SpectralField sf = to_spectral(f);
    double sum_sq = 0;
    for (const auto& c : sf.coeffs()) sum_sq += std::norm(c);
    double avg_sq = 0;
    for (double v : f.values()) avg_sq += v * v;
    avg_sq /= static_cast<double>(g.size());
    CHECK(std::abs(sum_sq - avg_sq) <= 1e-10 * avg_sq);
}

TEST_CASE("from_spectral: inverse of the single-mode example") {
    TorusGrid g(256);
    std::vector<std::complex<double>> c(g.size(), 0.0);
    TorusGrid gc = g;
    c[gc.index(1, 0)] = {0, -0.5};
    c[gc.index(g.n() - 1, 0)] = {0, 0.5};
    ScalarField f = from_spectral(SpectralField(g, std::move(c)));
    double err = 0;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i)
            err = std::max(err, std::abs(f.at(i, j) - std::sin(2 * M_PI * i / g.n())));
    CHECK(err <= 1e-12);
}

TEST_CASE("from_spectral rejects Hermitian violations") {
    TorusGrid g(64);
    std::vector<std::complex<double>> c(g.size(), 0.0);
    c[g.index(1, 0)] = {0.3, 0.1};  // no conjugate partner
    CHECK_THROWS_AS(from_spectral(SpectralField(g, std::move(c))), std::invalid_argument);
}

TEST_CASE("round trip: property over random draws") {
    std::mt19937_64 seed_src(2024);
    for (int rep = 0; rep < 100; ++rep) {
        TorusGrid g(rep % 2 ? 96 : 108);
        ScalarField f = random_band_field(g, 6, seed_src(), rep % 3 == 0);
        ScalarField back = from_spectral(to_spectral(f));
        double scale = 0, err = 0;
        for (std::int64_t k = 0; k < g.size(); ++k) {
            scale = std::max(scale, std::abs(f.values()[k]));
            err = std::max(err, std::abs(back.values()[k] - f.values()[k]));
        }
        REQUIRE(err <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("rescale_pattern: identity, checkerboard, composition, mean") {
    SUBCASE("lambda = 1 is the identity") {
        TorusGrid g(72);
        ScalarField f = random_band_field(g, 4, 5);
        CHECK(rescale_pattern(f, 1.0).values() == f.values());
    }
    SUBCASE("checkerboard of cell 1/2 -> cell 1/4, verified cell by cell") {
        TorusGrid g(64);
        ScalarField f(g);
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) f.at(i, j) = ((i / 32) + (j / 32)) % 2 ? -1.0 : 1.0;
        ScalarField out = rescale_pattern(f, 0.5);
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) {
                const double want = ((i / 16) + (j / 16)) % 2 ? -1.0 : 1.0;
                REQUIRE(out.at(i, j) == want);
            }
    }
    SUBCASE("composition: rescale(rescale(f,1/2),1/2) == rescale(f,1/4) exactly") {
        TorusGrid g(96);
        ScalarField f = random_band_field(g, 5, 17);
        ScalarField a = rescale_pattern(rescale_pattern(f, 0.5), 0.5);
        ScalarField b = rescale_pattern(f, 0.25);
        CHECK(a.values() == b.values());
    }
    SUBCASE("mean preserved exactly on block-constant patterns") {
        // Reindexing is bijective on fields constant on aligned 3-blocks.
        TorusGrid g(108);
        ScalarField f(g);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uni(-1, 1);
        for (int jb = 0; jb < 36; ++jb)
            for (int ib = 0; ib < 36; ++ib) {
                const double v = uni(rng);
                for (int j = 3 * jb; j < 3 * jb + 3; ++j)
                    for (int i = 3 * ib; i < 3 * ib + 3; ++i) f.at(i, j) = v;
            }
        ScalarField out = rescale_pattern(f, 1.0 / 3.0);
        double s_in = 0, s_out = 0;
        for (std::int64_t k = 0; k < g.size(); ++k) {
            s_in += f.values()[k];
            s_out += out.values()[k];
        }
        CHECK(std::abs(s_in - s_out) <= 1e-9 * std::max(1.0, std::abs(s_in)));
    }
    SUBCASE("divisibility failure rejected") {
        TorusGrid g(64);
        ScalarField f(g, 1.0);
        CHECK_THROWS_AS(rescale_pattern(f, 1.0 / 3.0), std::invalid_argument);
    }
}

TEST_CASE("snapshot: lossless round trip") {
    TorusGrid g(96);
    ScalarField f = random_band_field(g, 7, 99);
    const std::string path = "/tmp/tmix_snapshot_test.bin";
    save_snapshot(f, path);
    ScalarField back = load_snapshot(path);
    CHECK(back.n() == f.n());
    CHECK(back.values() == f.values());
}

TEST_CASE("spectral divergence gate on analytic fields") {
    // u = (sin(2 pi x2), sin(2 pi x1)) is divergence-free.
    VelocityModel vm;
    vm.eval = [](double, Vec2 x) {
        return Vec2{std::sin(2 * M_PI * x.y), std::sin(2 * M_PI * x.x)};
    };
    CHECK(divergence_l2(vm, 0.0, TorusGrid(128)) <= 1e-10);
    VelocityModel bad;
    bad.eval = [](double, Vec2 x) { return Vec2{std::sin(2 * M_PI * x.x), 0.0}; };
    CHECK(divergence_l2(bad, 0.0, TorusGrid(128)) > 1.0);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("slow");

TEST_CASE("round trip identity across the full admissible size ladder") {
    std::vector<int> sizes;
    for (int n = 64; n <= 4096; ++n)
        if (is_2a3b(n)) sizes.push_back(n);
    REQUIRE(sizes.size() > 20);
    for (int n : sizes) {
        TorusGrid g(n);
        ScalarField f(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                f.at(i, j) =
                    std::sin(2 * M_PI * i / n) + 0.5 * std::cos(2 * M_PI * (i + 2. * j) / n);
        ScalarField back = from_spectral(to_spectral(f));
        double err = 0;
        for (std::int64_t k = 0; k < g.size(); ++k)
            err = std::max(err, std::abs(back.values()[k] - f.values()[k]));
        REQUIRE_MESSAGE(err <= 1e-12, "grid " << n);
    }
}

TEST_SUITE_END();
