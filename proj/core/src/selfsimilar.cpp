#include "tmix/selfsimilar.hpp"

#include "tmix/norms.hpp"

#include <cmath>

namespace tmix {

const char* regime_name(DecayRegime r) {
    switch (r) {
        case DecayRegime::FiniteTime: return "finite-time";
        case DecayRegime::Exponential: return "exponential";
        default: return "polynomial";
    }
}

double MixSchedule::T(int n) const {
    if (n < 0) throw std::invalid_argument("MixSchedule::T: n must be >= 0");
    if (std::abs(tau - 1.0) < 1e-15) return static_cast<double>(n);
    return (std::pow(tau, n) - 1.0) / (tau - 1.0);
}

double MixSchedule::T_infinity() const {
    if (tau < 1.0) return 1.0 / (1.0 - tau);
    return std::numeric_limits<double>::infinity();
}

int MixSchedule::patch_index(double t) const {
    if (t < 0.0) throw std::invalid_argument("MixSchedule::patch_index: t must be >= 0");
    if (t >= T_infinity())
        throw std::invalid_argument("MixSchedule::patch_index: t beyond T_infinity");
    int n = 0;
    while (T(n + 1) <= t) ++n;
    return n;
}

MixSchedule make_schedule(double s, double p, double lambda, const MixerConstruction& mixer,
                          const TorusGrid& grid, const IntegratorConfig& cfg, int m_samples) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("make_schedule: lambda must lie in (0,1)");
    const double inv = 1.0 / lambda;
    if (std::abs(inv - std::lround(inv)) > 1e-12)
        throw std::invalid_argument("make_schedule: 1/lambda must be an integer");
    if (std::abs(lambda - mixer.lambda) > 1e-12)
        throw std::invalid_argument("make_schedule: lambda does not match the mixer scale");
    if (s < 0.0) throw std::invalid_argument("make_schedule: s must be >= 0");
    if (p < 1.0) throw std::invalid_argument("make_schedule: p must be >= 1");

    // Assumption gate: the checkpoint rearrangement must equal the lambda
    // rescaling of the initial pattern exactly on this grid.
    {
        const ScalarField rho0 = mixer.initial_pattern(grid);
        const ScalarField lhs = mixer.checkpoint_map(rho0);
        const ScalarField rhs = rescale_pattern(rho0, lambda);
        for (std::int64_t k = 0; k < grid.size(); ++k)
            if (lhs.values()[k] != rhs.values()[k])
                throw std::invalid_argument(
                    "make_schedule: mixer violates the checkpoint self-similarity");
    }

    MixSchedule sched;
    sched.s = s;
    sched.p = p;
    sched.lambda = lambda;
    sched.tau = std::pow(lambda, 1.0 - s);
    sched.regime = s < 1.0 ? DecayRegime::FiniteTime
                           : (s == 1.0 ? DecayRegime::Exponential : DecayRegime::Polynomial);

    // M = sup over sampled t of ||rho_0(t,.)||_{H^-1}, marching the block
    // solution checkpoint to checkpoint.
    ScalarField state = mixer.initial_pattern(grid);
    double M = hs_norm_demeaned(state, -1.0);
    for (int k = 1; k < m_samples; ++k) {
        const double t0 = static_cast<double>(k - 1) / (m_samples - 1);
        const double t1 = static_cast<double>(k) / (m_samples - 1);
        state = solve_between(state, mixer.u0, t0, t1, grid, cfg);
        M = std::max(M, hs_norm_demeaned(state, -1.0));
    }
    sched.M = M;
    return sched;
}

VelocityModel rescaled_velocity(const MixerConstruction& mixer, const MixSchedule& schedule,
                                int n) {
    if (n < 0) throw std::invalid_argument("rescaled_velocity: n must be >= 0");
    const double lam_n = std::pow(schedule.lambda, n);
    const double tau_n = std::pow(schedule.tau, n);
    const double amp = lam_n / tau_n;
    const double inv_lam_n = 1.0 / lam_n;
    VelocityModel base = mixer.u0;
    VelocityModel vm;
    vm.name = mixer.name + "-level" + std::to_string(n);
    vm.t_begin = 0.0;
    vm.t_end = tau_n;
    vm.tag = base.tag;
    vm.sobolev_p = base.sobolev_p;
    vm.div_tol = base.div_tol;
    vm.eval = [base, amp, tau_n, inv_lam_n](double t, Vec2 x) {
        const Vec2 y{wrap01(x.x * inv_lam_n), wrap01(x.y * inv_lam_n)};
        return amp * base(t / tau_n, y);
    };
    return vm;
}

bool CompositeSolution::perfectly_mixed(double t) const {
    return schedule.regime == DecayRegime::FiniteTime && t >= schedule.T_infinity();
}

int CompositeSolution::max_level(const TorusGrid& grid) const {
    int n = 0;
    while (grid.n() * std::pow(mixer.lambda, n + 1) >= 8.0 - 1e-9) ++n;
    return n;
}

VelocityModel CompositeSolution::velocity() const {
    const MixSchedule sched = schedule;
    const MixerConstruction mix = mixer;
    VelocityModel vm;
    vm.name = mix.name + "-composite";
    vm.t_begin = 0.0;
    vm.t_end = sched.T_infinity();
    vm.tag = mix.u0.tag;
    vm.sobolev_p = mix.u0.sobolev_p;
    vm.div_tol = mix.u0.div_tol;
    vm.eval = [sched, mix](double t, Vec2 x) {
        if (sched.regime == DecayRegime::FiniteTime && t >= sched.T_infinity())
            return Vec2{0.0, 0.0};
        const int n = sched.patch_index(t);
        const double lam_n = std::pow(sched.lambda, n);
        const double tau_n = std::pow(sched.tau, n);
        const Vec2 y{wrap01(x.x / lam_n), wrap01(x.y / lam_n)};
        return (lam_n / tau_n) * mix.u0((t - sched.T(n)) / tau_n, y);
    };
    return vm;
}

ScalarField CompositeSolution::evaluate(double t, const TorusGrid& grid,
                                        const IntegratorConfig& cfg) const {
    if (t < 0.0) throw std::invalid_argument("CompositeSolution::evaluate: t must be >= 0");
    if (perfectly_mixed(t)) return ScalarField(grid, 0.0);
    const int n = schedule.patch_index(t);
    if (n > max_level(grid))
        throw std::invalid_argument(
            "CompositeSolution::evaluate: patch level " + std::to_string(n) +
            " exceeds the grid resolution cap " + std::to_string(max_level(grid)));
    const ScalarField pattern = nominal_pattern(mixer, n, grid);
    const double local = t - schedule.T(n);
    if (local == 0.0) return pattern;
    VelocityModel u_n = rescaled_velocity(mixer, schedule, n);
    return solve_between(pattern, u_n, 0.0, local, grid, cfg);
}

CompositeSolution composite(const MixerConstruction& mixer, const MixSchedule& schedule) {
    return CompositeSolution{schedule, mixer};
}

double envelope(const MixSchedule& schedule, double t) {
    if (t < 0.0) throw std::invalid_argument("envelope: t must be >= 0");
    if (schedule.regime == DecayRegime::FiniteTime && t >= schedule.T_infinity())
        throw std::invalid_argument("envelope: t beyond T_infinity in the finite-time regime");
    const int n = schedule.patch_index(t);
    return schedule.M * std::pow(schedule.lambda, n);
}

double envelope_closed_form(const MixSchedule& schedule, double t) {
    if (schedule.regime == DecayRegime::Exponential)
        return schedule.M * std::pow(schedule.lambda, t - 1.0);
    if (schedule.regime == DecayRegime::Polynomial) {
        const double s = schedule.s;
        const double base = 1.0 + t * (std::pow(schedule.lambda, 1.0 - s) - 1.0);
        return schedule.M * std::pow(base, -1.0 / (s - 1.0)) / schedule.lambda;
    }
    throw std::invalid_argument("envelope_closed_form: defined for s >= 1 regimes only");
}

} // namespace tmix
