#pragma once

#include <optional>
#include <vector>

#include "tmix/torus.hpp"

namespace tmix {

// ---------------------------------------------------------------------------
// Homogeneous Sobolev norms. Frequency weight (2 pi |k|)^s, k = 0 excluded
// for every s, so the value never depends on the grid mean.
// ---------------------------------------------------------------------------

/// ( sum_{k != 0} (2 pi |k|)^{2s} |f_hat(k)|^2 )^{1/2}.
/// For s < 0 the field must be mean-zero to |mean| <= 1e-8, else rejected
/// (the norm would silently ignore mass).
double hs_norm(const ScalarField& field, double s);

/// hs_norm of (field - mean). Negative-order norms of numerically advected
/// two-valued fields pick up O(1e-5) mean drift from resampling; this is
/// the documented entry point for those measurements.
double hs_norm_demeaned(const ScalarField& field, double s);

double hs_norm(const SpectralField& sf, double s);

/// L^p norm over the unit-measure torus of the pointwise Frobenius norm of
/// the velocity gradient, gradient computed spectrally from grid samples.
/// p = infinity: max over grid nodes. Rejects p < 1.
double w1p_seminorm(const VelocityModel& vm, double t, double p, const TorusGrid& grid);

/// Doubling check: recompute at 2n and flag when the value moves > 1%.
struct W1pCheck {
    double value = 0.0;
    double value_refined = 0.0;
    bool under_resolved = false;
};
W1pCheck w1p_seminorm_checked(const VelocityModel& vm, double t, double p, const TorusGrid& grid);

// ---------------------------------------------------------------------------
// Geometric mixing scale
// ---------------------------------------------------------------------------

struct GeomScaleParams {
    double kappa = 0.25;              // in (0, 1/2)
    std::vector<double> radius_set;   // strictly increasing radii in (0, 1/2]
    int center_stride = 1;            // evaluate every stride-th node as ball center

    /// Dyadic radii 2^{-j} refined by substeps per octave, descending from
    /// 1/2 down to >= 4 grid cells, returned increasing.
    static std::vector<double> dyadic_radii(const TorusGrid& grid, int substeps_per_octave = 8);
};

/// Smallest radius in radius_set such that every tested ball center has a
/// (+1)-fraction within [kappa, 1-kappa]; nullopt = NotMixed. Field values
/// must round to +-1 within 1e-6. Ball membership counts grid cells whose
/// centers lie within torus distance epsilon of the center; fractions are
/// counts over counts.
std::optional<double> geometric_scale(const ScalarField& field, const GeomScaleParams& params);

// ---------------------------------------------------------------------------
// Decay-rate fitting (least squares in log space)
// ---------------------------------------------------------------------------

enum class RateModel { Exponential, PowerLaw };

struct RateFit {
    RateModel model = RateModel::Exponential;
    double rate = 0.0;       // exponential: per unit time; power law: exponent
    double amplitude = 0.0;  // A in v = A exp(-rate t) or v = A t^{-rate}
    double residual = 0.0;   // rms misfit in log space
    std::size_t samples = 0;
};

/// Exponential fits log v = log A - rate*t; power law fits
/// log v = log A - rate*log t (requires all t > 0). Needs >= 4 samples with
/// strictly positive values at strictly increasing times.
RateFit fit_decay(const std::vector<std::pair<double, double>>& samples, RateModel model);

// ---------------------------------------------------------------------------
// Interpolation inequality ||f||_L2 <= ||f||_{H^s}^{1/2} ||f||_{H^-s}^{1/2}
// ---------------------------------------------------------------------------

struct InterpolationReport {
    double lhs = 0.0;   // ||f||_L2 (k=0 excluded; field must be mean-zero)
    double rhs = 0.0;
    bool holds = false; // lhs <= rhs * (1 + 1e-10)
};

InterpolationReport interpolation_check(const ScalarField& field, double s);

} // namespace tmix
