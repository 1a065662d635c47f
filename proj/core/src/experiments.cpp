#include "tmix/experiments.hpp"

#include "tmix/advect.hpp"
#include "tmix/flowkit.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace tmix {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("config: trailing characters in value for '" + key + "'");
    return x;
}

} // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "command") command = value;
    else if (key == "mixer") mixer = value;
    else if (key == "s") s = parse_double(key, value);
    else if (key == "p") p = value == "inf" ? std::numeric_limits<double>::infinity()
                                            : parse_double(key, value);
    else if (key == "lambda") lambda = parse_double(key, value);
    else if (key == "n_max") n_max = static_cast<int>(parse_double(key, value));
    else if (key == "grid_n") grid_n = static_cast<int>(parse_double(key, value));
    else if (key == "dt") dt = parse_double(key, value);
    else if (key == "kappa") kappa = parse_double(key, value);
    else if (key == "delta") delta = parse_double(key, value);
    else if (key == "sampling") sampling = value;
    else if (key == "output_dir") output_dir = value;
    else if (key == "input") input = value;
    else if (key == "golden_dir") golden_dir = value;
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "checkpoints_per_patch")
        checkpoints_per_patch = static_cast<int>(parse_double(key, value));
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string ExperimentConfig::canonical_text() const {
    std::map<std::string, std::string> kv;
    auto num = [](double v) { return csv_double(v); };
    kv["command"] = command;
    kv["mixer"] = mixer;
    kv["s"] = num(s);
    kv["p"] = std::isinf(p) ? "inf" : num(p);
    kv["lambda"] = num(lambda);
    kv["n_max"] = std::to_string(n_max);
    kv["grid_n"] = std::to_string(grid_n);
    kv["dt"] = num(dt);
    kv["kappa"] = num(kappa);
    kv["delta"] = num(delta);
    kv["sampling"] = sampling;
    kv["output_dir"] = output_dir;
    kv["input"] = input;
    kv["golden_dir"] = golden_dir;
    kv["seed"] = std::to_string(seed);
    kv["checkpoints_per_patch"] = std::to_string(checkpoints_per_patch);
    std::ostringstream os;
    for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
    return os.str();
}

double ExperimentConfig::effective_lambda() const {
    if (lambda != 0.0) return lambda;
    return mixer == "snake" ? 1.0 / 3.0 : 0.5;
}

IntegratorConfig ExperimentConfig::integrator() const {
    IntegratorConfig ic;
    ic.dt = dt;
    if (sampling == "nearest") ic.sampling = Sampling::Nearest;
    else if (sampling == "bicubic") ic.sampling = Sampling::Bicubic;
    else throw std::invalid_argument("config: sampling must be 'nearest' or 'bicubic'");
    return ic;
}

MixerConstruction build_mixer(const ExperimentConfig& cfg, const TorusGrid& grid) {
    const double lam = cfg.effective_lambda();
    if (cfg.mixer == "snake") {
        if (std::abs(lam - 1.0 / 3.0) > 1e-12)
            throw std::invalid_argument("build_mixer: snake requires lambda = 1/3");
        return build_snake_mixer(grid);
    }
    if (cfg.mixer == "pinch") {
        if (std::abs(lam - 0.5) < 1e-12) return build_pinch_mixer(cfg.delta, grid);
        if (std::abs(lam - 0.25) < 1e-12) return build_pinch_squared_mixer(cfg.delta, grid);
        throw std::invalid_argument("build_mixer: pinch supports lambda = 1/2 or 1/4");
    }
    throw std::invalid_argument("build_mixer: mixer must be 'snake' or 'pinch'");
}

// ---------------------------------------------------------------------------
// run_mix
// ---------------------------------------------------------------------------

namespace {

struct CsvRow {
    double t, hm1, geom_eps, l2, h1, u_w1p;
};

void write_mix_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "t,hm1,geom_eps,l2,h1,u_w1p\n";
    for (const CsvRow& r : rows)
        os << csv_double(r.t) << ',' << csv_double(r.hm1) << ',' << csv_double(r.geom_eps) << ','
           << csv_double(r.l2) << ',' << csv_double(r.h1) << ',' << csv_double(r.u_w1p) << "\n";
}

/// Schedule-construction grid: small but compatible with the mixer's
/// pattern constraints (12 | n for the snake, 64 | n for the pinch).
int schedule_grid(const ExperimentConfig& cfg) {
    if (cfg.mixer == "snake") return std::min(cfg.grid_n, 324);
    return std::min(cfg.grid_n, 192);
}

} // namespace

RunReport run_mix(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.output_dir);

    RunReport rep;
    rep.command = "mix";
    rep.grid_n = cfg.grid_n;
    rep.config_hash = cfg.hash();

    TorusGrid grid(cfg.grid_n);
    MixerConstruction mixer = build_mixer(cfg, grid);
    const IntegratorConfig ic = cfg.integrator();

    TorusGrid sgrid(schedule_grid(cfg));
    MixerConstruction smixer = build_mixer(cfg, sgrid);
    MixSchedule sched = make_schedule(cfg.s, cfg.p, cfg.effective_lambda(), smixer, sgrid, ic);
    rep.regime = regime_name(sched.regime);
    rep.T_infinity = sched.T_infinity();
    rep.M = sched.M;

    CompositeSolution sol = composite(mixer, sched);
    rep.level_cap = sol.max_level(grid);
    const int n_levels = std::min(cfg.n_max, rep.level_cap);
    rep.levels_run = n_levels;

    GeomScaleParams gp;
    gp.kappa = cfg.kappa;
    gp.radius_set = GeomScaleParams::dyadic_radii(grid, 16);

    std::vector<CsvRow> rows;
    std::vector<std::pair<double, double>> hm1_samples, geom_samples;
    int violations = 0;

    for (int n = 0; n <= n_levels; ++n) {
        const double t = sched.T(n);
        const ScalarField pattern = nominal_pattern(mixer, n, grid);
        CsvRow row;
        row.t = t;
        row.hm1 = hs_norm(pattern, -1.0);
        const auto eps = geometric_scale(pattern, gp);
        row.geom_eps = eps ? *eps : std::numeric_limits<double>::quiet_NaN();
        row.l2 = pattern.l2_norm();
        row.h1 = hs_norm(pattern, 1.0);
        VelocityModel u_n = rescaled_velocity(mixer, sched, n);
        row.u_w1p = w1p_seminorm(u_n, 0.5 * std::pow(sched.tau, n), cfg.p, grid);
        rows.push_back(row);
        if (n >= 1) {
            hm1_samples.push_back({t, row.hm1});
            if (eps) geom_samples.push_back({t, *eps});
        }
        if (row.hm1 > envelope(sched, t) * 1.05) ++violations;

        // Intra-patch samples by numerical advection seeded at the pattern.
        if (n < n_levels && cfg.checkpoints_per_patch > 1) {
            const double tau_n = std::pow(sched.tau, n);
            ScalarField state = pattern;
            for (int k = 1; k < cfg.checkpoints_per_patch; ++k) {
                const double a = tau_n * (k - 1) / cfg.checkpoints_per_patch;
                const double b = tau_n * k / cfg.checkpoints_per_patch;
                state = solve_between(state, u_n, a, b, grid, ic);
                CsvRow r2;
                r2.t = t + b;
                r2.hm1 = hs_norm_demeaned(state, -1.0);
                r2.geom_eps = std::numeric_limits<double>::quiet_NaN();
                r2.l2 = state.l2_norm();
                r2.h1 = hs_norm_demeaned(state, 1.0);
                r2.u_w1p = row.u_w1p;
                rows.push_back(r2);
                if (r2.hm1 > envelope(sched, r2.t) * 1.05) ++violations;
            }
        }
    }
    rep.envelope_violations = violations;

    if (hm1_samples.size() >= 4) {
        rep.hm1_fit = fit_decay(hm1_samples, sched.regime == DecayRegime::Polynomial
                                                 ? RateModel::PowerLaw
                                                 : RateModel::Exponential);
    }
    if (geom_samples.size() >= 4) {
        rep.geom_fit = fit_decay(geom_samples, sched.regime == DecayRegime::Polynomial
                                                   ? RateModel::PowerLaw
                                                   : RateModel::Exponential);
    }

    // Regime gates.
    rep.passed = violations == 0;
    if (rep.passed && sched.regime == DecayRegime::Exponential && hm1_samples.size() >= 4) {
        const double expect = std::log(1.0 / sched.lambda);
        if (std::abs(rep.hm1_fit.rate - expect) > 0.10 * expect) {
            rep.passed = false;
            rep.failure = "exponential rate off by more than 10%";
        }
    }
    if (rep.passed && sched.regime == DecayRegime::FiniteTime) {
        for (std::size_t k = 1; k < hm1_samples.size(); ++k) {
            const double ratio = hm1_samples[k].second / hm1_samples[k - 1].second;
            if (std::abs(ratio - sched.lambda) > 0.02 * sched.lambda) {
                rep.passed = false;
                rep.failure = "finite-time checkpoint ratio deviates from lambda";
                break;
            }
        }
    }
    if (rep.passed && sched.regime == DecayRegime::Polynomial && hm1_samples.size() >= 4) {
        // Fit over the asymptotic window t >= 3 (the envelope is ~ only).
        std::vector<std::pair<double, double>> tail(hm1_samples.begin() + 1, hm1_samples.end());
        const RateFit f = fit_decay(tail, RateModel::PowerLaw);
        const double expect = 1.0 / (cfg.s - 1.0);
        if (std::abs(f.rate - expect) > 0.15 * expect) {
            rep.passed = false;
            rep.failure = "polynomial slope off by more than 15%";
        }
        rep.hm1_fit = f;
    }
    if (violations > 0) rep.failure = "envelope violations";

    rep.csv_path = cfg.output_dir + "/mix_" + cfg.mixer + ".csv";
    write_mix_csv(rep.csv_path, rows);

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    rep.report_path = cfg.output_dir + "/mix_" + cfg.mixer + "_report.txt";
    std::ofstream os(rep.report_path);
    os << "tmix mix report (version " << kVersion << ")\n"
       << "config_hash = " << std::hex << rep.config_hash << std::dec << "\n"
       << "regime = " << rep.regime << "\n"
       << "T_infinity = " << csv_double(rep.T_infinity) << "\n"
       << "M = " << csv_double(rep.M) << "\n"
       << "levels: cap = " << rep.level_cap << ", run = " << rep.levels_run << "\n"
       << "hm1 fit: rate = " << csv_double(rep.hm1_fit.rate)
       << ", amplitude = " << csv_double(rep.hm1_fit.amplitude)
       << ", residual = " << csv_double(rep.hm1_fit.residual) << "\n"
       << "geom fit: rate = " << csv_double(rep.geom_fit.rate) << "\n"
       << "envelope_violations = " << rep.envelope_violations << "\n"
       << "pass = " << (rep.passed ? "yes" : "no") << (rep.failure.empty() ? "" : " (" + rep.failure + ")")
       << "\n"
       << "wall_seconds = " << rep.wall_seconds << "\n"
       << "--- effective config ---\n"
       << cfg.canonical_text();
    return rep;
}

// ---------------------------------------------------------------------------
// run_regloss
// ---------------------------------------------------------------------------

RunReport run_regloss(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.output_dir);

    RunReport rep;
    rep.command = "regloss";
    rep.config_hash = cfg.hash();
    rep.grid_n = cfg.grid_n;

    const int N = std::min(cfg.n_max > 1 ? cfg.n_max : 10, 12);
    CubeSchedule sched = default_schedule(N);
    TorusGrid base_grid(std::min(cfg.grid_n, 324));
    MixerConstruction mixer = build_snake_mixer(base_grid);

    const std::vector<double> t_list = {0.0, 0.25, 0.5, 1.0};
    const std::vector<double> s_list = {0.25, 0.5};
    const std::vector<double> p_list = {1.0, 2.0, 4.0};
    LossReport lr = loss_report(sched, mixer, t_list, s_list, p_list, N, base_grid);

    // The probe needs five checkpoint levels, hence the finer grid.
    TorusGrid sat_grid(648);
    SaturationReport sat = saturation_probe(build_snake_mixer(sat_grid), {0.5, 1.0}, 5, sat_grid);

    rep.csv_path = cfg.output_dir + "/regloss.csv";
    {
        std::ofstream os(rep.csv_path);
        os << "N,t,s,theta_hs,p,v_w1p\n";
        for (int k = 0; k < N; ++k) {
            for (std::size_t it = 0; it < t_list.size(); ++it) {
                for (std::size_t is = 0; is < s_list.size(); ++is) {
                    for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
                        const long double vp =
                            std::pow(lr.v_partial_pow[ip][k],
                                     static_cast<long double>(1.0 / p_list[ip]));
                        char theta_buf[64], v_buf[64];
                        std::snprintf(theta_buf, sizeof(theta_buf), "%.17Lg",
                                      lr.theta_partial[it][is][k]);
                        std::snprintf(v_buf, sizeof(v_buf), "%.17Lg", vp);
                        os << (k + 1) << ',' << csv_double(t_list[it]) << ','
                           << csv_double(s_list[is]) << ',' << theta_buf << ','
                           << csv_double(p_list[ip]) << ',' << v_buf << "\n";
                    }
                }
            }
        }
    }

    // Verdicts: velocity bounded for every p, datum smooth, theta sums
    // divergent-trend for t > 0 and convergent at t = 0.
    rep.passed = lr.verdicts.datum_smooth;
    std::string fail;
    if (!rep.passed) fail = "datum smoothness proxies not decreasing";
    for (std::size_t ip = 0; rep.passed && ip < p_list.size(); ++ip) {
        if (!lr.verdicts.velocity_bounded[ip]) {
            rep.passed = false;
            fail = "velocity W^{1," + csv_double(p_list[ip]) + "} tail above 1%";
        }
    }
    for (std::size_t it = 0; rep.passed && it < t_list.size(); ++it) {
        for (std::size_t is = 0; rep.passed && is < s_list.size(); ++is) {
            const std::string& trend = lr.verdicts.theta_trend[it][is];
            const bool want_divergent = t_list[it] > 0.0;
            if (want_divergent && trend != "divergent-trend") {
                rep.passed = false;
                fail = "theta trend not divergent at t > 0";
            }
            if (!want_divergent && trend != "convergent") {
                rep.passed = false;
                fail = "theta sums not convergent at t = 0";
            }
        }
    }
    for (const auto& row : sat.rows) {
        if (!row.saturates) {
            rep.passed = false;
            fail = "saturation: growth rate below 0.9x decay rate";
        }
    }
    if (!sat.interpolation_ok) {
        rep.passed = false;
        fail = "interpolation inequality violated at a checkpoint";
    }
    rep.failure = fail;

    rep.report_path = cfg.output_dir + "/regloss_summary.json";
    {
        std::ofstream os(rep.report_path);
        os << "{\n  \"version\": \"" << kVersion << "\",\n";
        os << "  \"config_hash\": \"" << std::hex << rep.config_hash << std::dec << "\",\n";
        os << "  \"N\": " << N << ",\n";
        os << "  \"velocity_bounded\": {";
        for (std::size_t ip = 0; ip < p_list.size(); ++ip)
            os << (ip ? ", " : "") << "\"p=" << p_list[ip] << "\": "
               << (lr.verdicts.velocity_bounded[ip] ? "true" : "false");
        os << "},\n  \"datum_smooth\": " << (lr.verdicts.datum_smooth ? "true" : "false") << ",\n";
        os << "  \"theta_trends\": {";
        bool first = true;
        for (std::size_t it = 0; it < t_list.size(); ++it)
            for (std::size_t is = 0; is < s_list.size(); ++is) {
                os << (first ? "" : ", ") << "\"t=" << t_list[it] << ",s=" << s_list[is] << "\": \""
                   << lr.verdicts.theta_trend[it][is] << "\"";
                first = false;
            }
        os << "},\n  \"saturation\": [";
        for (std::size_t r = 0; r < sat.rows.size(); ++r) {
            const auto& row = sat.rows[r];
            os << (r ? ", " : "") << "{\"s\": " << row.s << ", \"decay_rate\": " << row.decay_rate
               << ", \"growth_rate\": " << row.growth_rate
               << ", \"saturates\": " << (row.saturates ? "true" : "false") << "}";
        }
        os << "],\n  \"pass\": " << (rep.passed ? "true" : "false") << "\n}\n";
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

// ---------------------------------------------------------------------------
// run_selftest
// ---------------------------------------------------------------------------

namespace {

struct Gate {
    std::string name;
    bool ok;
    std::string detail;
};

} // namespace

int run_selftest(const ExperimentConfig& cfg, std::ostream& os) {
    std::vector<Gate> gates;
    auto check = [&gates, &os](const std::string& name, bool ok, const std::string& detail) {
        gates.push_back({name, ok, detail});
        os << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        return ok;
    };

    try {
        // torus: spectral round trip on a random band-limited field.
        {
            TorusGrid g(108);
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> uni(-1.0, 1.0);
            ScalarField f(g);
            for (auto& v : f.values()) v = uni(rng);
            ScalarField back = from_spectral(to_spectral(f));
            double err = 0;
            for (std::int64_t k = 0; k < g.size(); ++k)
                err = std::max(err, std::abs(back.values()[k] - f.values()[k]));
            if (!check("torus.roundtrip", err <= 1e-12,
                       "max error " + csv_double(err) + " (required <= 1e-12)"))
                return 2;
        }
        // norms: the single-mode oracles.
        {
            TorusGrid g(256);
            ScalarField f(g);
            for (int j = 0; j < g.n(); ++j)
                for (int i = 0; i < g.n(); ++i) f.at(i, j) = std::sin(2 * M_PI * i / g.n());
            const double e1 = std::abs(hs_norm(f, -1.0) - 1.0 / (2 * std::sqrt(2.0) * M_PI));
            const double e2 = std::abs(hs_norm(f, 0.0) - 1.0 / std::sqrt(2.0));
            const double e3 = std::abs(hs_norm(f, 1.0) - std::sqrt(2.0) * M_PI);
            const bool ok = e1 < 1e-10 && e2 < 1e-10 && e3 < 1e-10;
            if (!check("norms.single_mode", ok,
                       "errors " + csv_double(e1) + ", " + csv_double(e2) + ", " + csv_double(e3)))
                return 2;
        }
        // flowkit: divergence gates.
        {
            VelocityModel rot = rotation_field({0.5, 0.5}, 0.15, 0.35, M_PI);
            const double d = divergence_l2(rot, 0.0, TorusGrid(192));
            if (!check("flowkit.divergence", d <= 1e-8,
                       "rotation spectral divergence " + csv_double(d) + " (required <= 1e-8)"))
                return 2;
            MixerConstruction snake = build_snake_mixer(TorusGrid(108));
            double fd = 0;
            std::mt19937_64 rng(7);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            for (int k = 0; k < 100; ++k) {
                const Vec2 x{uni(rng), uni(rng)};
                fd = std::max(fd, std::abs(divergence_fd(snake.u0, 0.3, x)));
            }
            if (!check("flowkit.carousel_divergence", fd <= 1e-6,
                       "pointwise FD divergence " + csv_double(fd) + " (required <= 1e-6)"))
                return 2;
        }
        // advect: order-4 convergence at the cfg dt (doubling dt beyond
        // stability makes this the failing gate).
        {
            VelocityModel rot = rotation_field({0.5, 0.5}, 0.2, 0.4, 2 * M_PI);
            const Vec2 x0{0.6, 0.5};
            auto orbit_err = [&](double dt) {
                IntegratorConfig ic;
                ic.dt = dt;
                const Vec2 x1 = trace(rot, 0.0, 1.0, x0, ic);
                return torus_dist(x1, x0);
            };
            const double e1 = orbit_err(cfg.dt);
            const double e2 = orbit_err(cfg.dt / 2);
            const double e4 = orbit_err(cfg.dt / 4);
            const double r1 = e1 / e2, r2 = e2 / e4;
            const bool ok = r1 >= 12.0 && r1 <= 20.0 && r2 >= 12.0 && r2 <= 20.0;
            if (!check("advect.order4", ok,
                       "error ratios " + csv_double(r1) + ", " + csv_double(r2) +
                           " (required within [12, 20])"))
                return 2;
        }
        // advect: measure preservation.
        {
            VelocityModel rot = rotation_field({0.5, 0.5}, 0.2, 0.4, 2 * M_PI);
            IntegratorConfig ic;
            ic.dt = 1e-3;
            double worst = 0;
            for (Vec2 x : {Vec2{0.55, 0.5}, Vec2{0.62, 0.58}, Vec2{0.3, 0.3}})
                worst = std::max(worst, std::abs(flow_jacobian(rot, 0.0, 0.5, x, ic) - 1.0));
            if (!check("advect.jacobian", worst <= 1e-4,
                       "max |J-1| = " + csv_double(worst) + " (required <= 1e-4)"))
                return 2;
        }
        // mixers: checkpoint self-similarity, exact.
        {
            MixerConstruction snake = build_snake_mixer(TorusGrid(108));
            const ScalarField rho = snake.initial_pattern(TorusGrid(108));
            const ScalarField lhs = snake.checkpoint_map(rho);
            const ScalarField rhs = rescale_pattern(rho, snake.lambda);
            bool equal = lhs.values() == rhs.values();
            MixerConstruction pinch = build_pinch_mixer(cfg.delta, TorusGrid(128));
            const ScalarField rho2 = pinch.initial_pattern(TorusGrid(128));
            equal = equal && pinch.checkpoint_map(rho2).values() ==
                                 rescale_pattern(rho2, 0.5).values();
            if (!check("mixers.checkpoint", equal, equal ? "exact equality" : "mismatch"))
                return 2;
        }
        // mixers: one snake period advected against the checkpoint oracle.
        {
            TorusGrid g(108);
            MixerConstruction snake = build_snake_mixer(g);
            IntegratorConfig ic = cfg.integrator();
            ic.dt = std::min(cfg.dt, 5e-4);
            ic.sampling = Sampling::Nearest;
            const ScalarField got = solve(snake.initial_pattern(g), snake.u0, 1.0, g, ic);
            const ScalarField want = nominal_pattern(snake, 1, g);
            std::int64_t bad = 0;
            for (std::int64_t k = 0; k < g.size(); ++k)
                if (got.values()[k] != want.values()[k]) ++bad;
            const double frac = static_cast<double>(bad) / g.size();
            if (!check("mixers.snake_period", frac <= 0.015,
                       "mismatched fraction " + csv_double(frac) + " (required <= 0.015)"))
                return 2;
        }
        // golden file checksum.
        {
            std::string dir = cfg.golden_dir;
            if (dir.empty()) {
                if (const char* env = std::getenv("TMIX_GOLDEN_DIR")) dir = env;
                else dir = "tests/golden";
            }
            const std::string path = dir + "/snake_pattern1_36.bin";
            std::ifstream is(path, std::ios::binary);
            if (!is) {
                check("golden.checksum", false, "cannot open " + path);
                return 2;
            }
            std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
            const std::uint64_t h = fnv1a(bytes.data(), bytes.size());
            const std::uint64_t expect = 0xc499f28aa64fee59ull;
            if (h != expect) {
                std::ostringstream detail;
                detail << "checksum mismatch: got " << std::hex << h << ", expect " << expect;
                check("golden.checksum", false, detail.str());
                return 2;
            }
            const ScalarField pat = load_snapshot(path);
            const double hm1 = hs_norm(pat, -1.0);
            const double frozen = 0.048740349918977181;
            if (std::abs(hm1 - frozen) > 1e-12) {
                check("golden.norm", false,
                      "hm1 " + csv_double(hm1) + " vs frozen " + csv_double(frozen));
                return 2;
            }
            check("golden.checksum", true, "checksum and frozen norm ok");
        }
    } catch (const std::exception& e) {
        os << "[FAIL] exception: " << e.what() << "\n";
        return 2;
    }
    os << "selftest: all " << gates.size() << " gates passed\n";
    return 0;
}

int run_norms(const ExperimentConfig& cfg, std::ostream& os) {
    if (cfg.input.empty()) {
        os << "norms: no input snapshot (set input = PATH)\n";
        return 1;
    }
    ScalarField f = load_snapshot(cfg.input);
    os << "n_per_axis = " << f.n() << "\n";
    os << "mean = " << csv_double(f.mean()) << "\n";
    os << "l2 = " << csv_double(f.l2_norm()) << "\n";
    os << "hm1 = " << csv_double(hs_norm_demeaned(f, -1.0)) << "\n";
    os << "h1 = " << csv_double(hs_norm_demeaned(f, 1.0)) << "\n";
    bool two_valued = true;
    for (double v : f.values())
        if (std::abs(v - 1.0) > 1e-6 && std::abs(v + 1.0) > 1e-6) { two_valued = false; break; }
    if (two_valued) {
        GeomScaleParams gp;
        gp.kappa = cfg.kappa;
        gp.radius_set = GeomScaleParams::dyadic_radii(f.grid(), 8);
        const auto eps = geometric_scale(f, gp);
        os << "geom_eps = " << (eps ? csv_double(*eps) : "NotMixed") << "\n";
    }
    return 0;
}

} // namespace tmix
