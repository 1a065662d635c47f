#include "tmix/norms.hpp"

#include <algorithm>
#include <cmath>

namespace tmix {

double hs_norm(const SpectralField& sf, double s) {
    const int n = sf.n();
    const TorusGrid& grid = sf.grid();
    const double two_pi = 2.0 * M_PI;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == 0 && j == 0) continue;
            const double k1 = grid.freq(i), k2 = grid.freq(j);
            const double k2abs = k1 * k1 + k2 * k2;
            const double w = std::pow(two_pi * two_pi * k2abs, s);
            acc += w * std::norm(sf.at_bin(i, j));
        }
    }
    return std::sqrt(acc);
}

double hs_norm(const ScalarField& field, double s) {
    if (s < 0.0) {
        const double m = std::abs(field.mean());
        if (m > 1e-8)
            throw std::invalid_argument("hs_norm: s < 0 requires a mean-zero field (|mean| = " +
                                        std::to_string(m) + " > 1e-8)");
    }
    return hs_norm(to_spectral(field), s);
}

double hs_norm_demeaned(const ScalarField& field, double s) {
    const double m = field.mean();
    if (m == 0.0) return hs_norm(to_spectral(field), s);
    ScalarField shifted = field;
    for (double& v : shifted.values()) v -= m;
    return hs_norm(to_spectral(shifted), s);
}

// ---------------------------------------------------------------------------

namespace {

/// Spectral partial derivative along the given axis; the Nyquist mode is
/// zeroed (odd derivative of the unpaired mode).
SpectralField spectral_derivative(const SpectralField& sf, int axis) {
    const int n = sf.n();
    const TorusGrid& grid = sf.grid();
    std::vector<std::complex<double>> c(sf.coeffs());
    const double two_pi = 2.0 * M_PI;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int kb = axis == 0 ? i : j;
            const double k = grid.freq(kb);
            std::complex<double>& v = c[grid.index(i, j)];
            if (n % 2 == 0 && kb == n / 2)
                v = 0.0;
            else
                v *= std::complex<double>(0.0, two_pi * k);
        }
    }
    return SpectralField(grid, std::move(c));
}

} // namespace

double w1p_seminorm(const VelocityModel& vm, double t, double p, const TorusGrid& grid) {
    if (p < 1.0) throw std::invalid_argument("w1p_seminorm: p must be >= 1");
    auto [u1, u2] = sample_velocity(vm, t, grid);
    SpectralField s1 = to_spectral(u1);
    SpectralField s2 = to_spectral(u2);
    ScalarField d11 = from_spectral(spectral_derivative(s1, 0));
    ScalarField d12 = from_spectral(spectral_derivative(s1, 1));
    ScalarField d21 = from_spectral(spectral_derivative(s2, 0));
    ScalarField d22 = from_spectral(spectral_derivative(s2, 1));

    const std::int64_t sz = grid.size();
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::int64_t k = 0; k < sz; ++k) {
            const double g = d11.values()[k] * d11.values()[k] + d12.values()[k] * d12.values()[k] +
                             d21.values()[k] * d21.values()[k] + d22.values()[k] * d22.values()[k];
            mx = std::max(mx, g);
        }
        return std::sqrt(mx);
    }
    double acc = 0.0;
    for (std::int64_t k = 0; k < sz; ++k) {
        const double g = d11.values()[k] * d11.values()[k] + d12.values()[k] * d12.values()[k] +
                         d21.values()[k] * d21.values()[k] + d22.values()[k] * d22.values()[k];
        acc += std::pow(g, 0.5 * p);
    }
    return std::pow(acc / static_cast<double>(sz), 1.0 / p);
}

W1pCheck w1p_seminorm_checked(const VelocityModel& vm, double t, double p, const TorusGrid& grid) {
    W1pCheck c;
    c.value = w1p_seminorm(vm, t, p, grid);
    c.value_refined = w1p_seminorm(vm, t, p, TorusGrid(2 * grid.n()));
    const double denom = std::max(std::abs(c.value_refined), 1e-300);
    c.under_resolved = std::abs(c.value - c.value_refined) / denom > 0.01;
    return c;
}

// ---------------------------------------------------------------------------
// Geometric mixing scale via one FFT convolution per radius: counts of
// (+1) cells and of all cells inside the discrete ball around every node,
// then min/max over strided centers. Convolution values are integers up to
// FFT roundoff and are rounded back exactly.
// ---------------------------------------------------------------------------

std::vector<double> GeomScaleParams::dyadic_radii(const TorusGrid& grid, int substeps) {
    std::vector<double> radii;
    const double r_min = 4.0 * grid.spacing();
    const double ratio = std::pow(2.0, 1.0 / substeps);
    for (double r = 0.5; r >= r_min; r /= ratio) radii.push_back(r);
    std::sort(radii.begin(), radii.end());
    return radii;
}

std::optional<double> geometric_scale(const ScalarField& field, const GeomScaleParams& params) {
    if (!(params.kappa > 0.0 && params.kappa < 0.5))
        throw std::invalid_argument("geometric_scale: kappa must lie in (0, 1/2)");
    if (params.radius_set.empty())
        throw std::invalid_argument("geometric_scale: empty radius set");
    for (std::size_t i = 0; i < params.radius_set.size(); ++i) {
        const double r = params.radius_set[i];
        if (!(r > 0.0 && r <= 0.5))
            throw std::invalid_argument("geometric_scale: radii must lie in (0, 1/2]");
        if (i > 0 && r <= params.radius_set[i - 1])
            throw std::invalid_argument("geometric_scale: radius set must be strictly increasing");
    }
    const TorusGrid& grid = field.grid();
    const int n = grid.n();
    if (params.center_stride < 1 || n % params.center_stride != 0)
        throw std::invalid_argument("geometric_scale: center_stride must divide n_per_axis");

    // Indicator of the (+1) set, rejecting non-two-valued fields.
    std::vector<double> chi(grid.size());
    {
        const auto& v = field.values();
        for (std::int64_t k = 0; k < grid.size(); ++k) {
            if (std::abs(v[k] - 1.0) <= 1e-6)
                chi[k] = 1.0;
            else if (std::abs(v[k] + 1.0) <= 1e-6)
                chi[k] = 0.0;
            else
                throw std::invalid_argument(
                    "geometric_scale: field is not two-valued (+-1) after rounding");
        }
    }
    SpectralField chi_hat = to_spectral(ScalarField(grid, std::move(chi)));

    for (double eps : params.radius_set) {
        // Ball mask centered at node (0,0).
        std::vector<double> mask(grid.size(), 0.0);
        std::int64_t count = 0;
        const int reach = static_cast<int>(std::floor(eps * n)) + 1;
        for (int j = -reach; j <= reach; ++j) {
            for (int i = -reach; i <= reach; ++i) {
                const double dx = static_cast<double>(i) / n;
                const double dy = static_cast<double>(j) / n;
                if (dx * dx + dy * dy <= eps * eps + 1e-15) {
                    mask[grid.index((i % n + n) % n, (j % n + n) % n)] = 1.0;
                    ++count;
                }
            }
        }
        if (count == 0) continue;
        SpectralField mask_hat = to_spectral(ScalarField(grid, std::move(mask)));
        // Correlation: counts(x) = sum_y chi(y) mask(y - x); take conj on mask side.
        std::vector<std::complex<double>> prod(grid.size());
        const double scale = static_cast<double>(grid.size());
        for (std::int64_t k = 0; k < grid.size(); ++k)
            prod[k] = chi_hat.coeffs()[k] * std::conj(mask_hat.coeffs()[k]) * scale;
        ScalarField counts = from_spectral(SpectralField(grid, std::move(prod)));

        bool ok = true;
        const double lo = params.kappa * count - 0.25;
        const double hi = (1.0 - params.kappa) * count + 0.25;
        for (int j = 0; j < n && ok; j += params.center_stride) {
            for (int i = 0; i < n; i += params.center_stride) {
                const double c = std::round(counts.at(i, j));
                if (c < lo || c > hi) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return eps;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

RateFit fit_decay(const std::vector<std::pair<double, double>>& samples, RateModel model) {
    if (samples.size() < 4) throw std::invalid_argument("fit_decay: need >= 4 samples");
    std::vector<double> x, y;
    double prev_t = -std::numeric_limits<double>::infinity();
    for (auto [t, v] : samples) {
        if (!(v > 0.0)) throw std::invalid_argument("fit_decay: values must be strictly positive");
        if (!(t > prev_t)) throw std::invalid_argument("fit_decay: times must be strictly increasing");
        prev_t = t;
        if (model == RateModel::PowerLaw && !(t > 0.0))
            throw std::invalid_argument("fit_decay: power-law fit requires t > 0");
        x.push_back(model == RateModel::Exponential ? t : std::log(t));
        y.push_back(std::log(v));
    }
    const LineFit lf = fit_line(x, y);
    RateFit f;
    f.model = model;
    f.rate = -lf.slope;
    f.amplitude = std::exp(lf.intercept);
    f.residual = lf.rms_residual;
    f.samples = samples.size();
    return f;
}

InterpolationReport interpolation_check(const ScalarField& field, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("interpolation_check: s must be positive");
    if (std::abs(field.mean()) > 1e-8)
        throw std::invalid_argument("interpolation_check: field must be mean-zero");
    SpectralField sf = to_spectral(field);
    InterpolationReport rep;
    rep.lhs = hs_norm(sf, 0.0);
    rep.rhs = std::sqrt(hs_norm(sf, s) * hs_norm(sf, -s));
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-10);
    return rep;
}

} // namespace tmix
