#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tmix/util.hpp"

namespace tmix {

/// Uniform periodic grid on the unit torus [0,1)^2. Sample points are the
/// nodes x_ij = (i/n, j/n); each node represents the cell of side 1/n
/// centered on it. Admissible sizes are n = 2^a 3^b, n >= 4, so that both
/// lambda = 1/2 and lambda = 1/3 pattern rescalings land exactly on
/// sub-grids.
class TorusGrid {
public:
    explicit TorusGrid(int n_per_axis);

    int n() const { return n_; }
    std::int64_t size() const { return static_cast<std::int64_t>(n_) * n_; }
    double spacing() const { return 1.0 / n_; }

    Vec2 point(int i, int j) const { return {i * spacing(), j * spacing()}; }
    std::int64_t index(int i, int j) const { return static_cast<std::int64_t>(j) * n_ + i; }

    /// Integer frequency for FFT bin i: i for i <= n/2, else i - n.
    int freq(int i) const { return i <= n_ / 2 ? i : i - n_; }

    bool operator==(const TorusGrid& o) const { return n_ == o.n_; }

private:
    int n_;
};

/// Real scalar grid function (row-major, index = j*n + i).
class ScalarField {
public:
    ScalarField(TorusGrid grid, double fill = 0.0);
    ScalarField(TorusGrid grid, std::vector<double> values);

    const TorusGrid& grid() const { return grid_; }
    int n() const { return grid_.n(); }
    double& at(int i, int j) { return v_[grid_.index(i, j)]; }
    double at(int i, int j) const { return v_[grid_.index(i, j)]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double mean() const;
    double l2_norm() const;       // sqrt of grid average of squares
    bool all_finite() const;

    /// |grid mean| <= 1e-12, the "mean_zero" flag of the spec.
    bool mean_zero() const { return std::abs(mean()) <= 1e-12; }

    /// Content hash (used as spectral cache key).
    std::uint64_t content_hash() const;

private:
    TorusGrid grid_;
    std::vector<double> v_;
};

/// Complex Fourier coefficients, FFT bin layout, normalized so that
/// coeff(k) = (1/n^2) sum_x f(x) exp(-2 pi i k.x). Parseval then reads
/// sum |coeff|^2 = grid average of f^2.
class SpectralField {
public:
    SpectralField(TorusGrid grid, std::vector<std::complex<double>> coeffs);

    const TorusGrid& grid() const { return grid_; }
    int n() const { return grid_.n(); }
    const std::vector<std::complex<double>>& coeffs() const { return c_; }
    std::vector<std::complex<double>>& coeffs() { return c_; }
    std::complex<double> at_bin(int i, int j) const { return c_[grid_.index(i, j)]; }

    /// Max |coeff(-k) - conj(coeff(k))| over all bins.
    double hermitian_defect() const;

private:
    TorusGrid grid_;
    std::vector<std::complex<double>> c_;
};

enum class SmoothnessTag { Smooth, Lipschitz, SobolevP };

/// Time-dependent velocity evaluable at arbitrary (t,x); periodic in x by
/// construction of every factory in this project. t_end = +inf means
/// unbounded in time.
struct VelocityModel {
    std::function<Vec2(double, Vec2)> eval;
    double t_begin = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
    double div_tol = 1e-8;   // declared divergence gate (1e-3 for numerically generated)
    bool integrable = true;  // false: norm-measurement probe only (pinch delta=0)
    SmoothnessTag tag = SmoothnessTag::Smooth;
    double sobolev_p = 0.0;  // meaningful when tag == SobolevP
    std::string name;

    Vec2 operator()(double t, Vec2 x) const { return eval(t, x); }
};

VelocityModel zero_velocity();

// ---------------------------------------------------------------------------
// Spectral transforms (FFTW-backed, plans cached per grid size)
// ---------------------------------------------------------------------------

/// Forward transform. Rejects non-finite input naming the offending index.
SpectralField to_spectral(const ScalarField& field);

/// Inverse transform. Rejects Hermitian-symmetry violations beyond 1e-10.
ScalarField from_spectral(const SpectralField& sf);

/// Sample both velocity components on the grid at time t.
std::pair<ScalarField, ScalarField> sample_velocity(const VelocityModel& vm, double t,
                                                    const TorusGrid& grid);

/// L2 norm of the spectral divergence of the sampled velocity at time t.
double divergence_l2(const VelocityModel& vm, double t, const TorusGrid& grid);

/// Pointwise divergence by 6th-order central differences at x (h ~ 1e-4).
/// Useful where the grid under-resolves sharp (but smooth) layers.
double divergence_fd(const VelocityModel& vm, double t, Vec2 x, double h = 1e-4);

// ---------------------------------------------------------------------------
// Pattern rescaling
// ---------------------------------------------------------------------------

/// output(x) = field(x/lambda mod 1) exactly at grid nodes; 1/lambda must be
/// a positive integer dividing n. The output is lambda-periodic per axis.
ScalarField rescale_pattern(const ScalarField& field, double lambda);

// ---------------------------------------------------------------------------
// Snapshot file format
// ---------------------------------------------------------------------------
// Header: magic "TMIX01", n_per_axis u32 little-endian, flags byte
// (bit 0: mean_zero), then n^2 row-major float64 little-endian.

void save_snapshot(const ScalarField& field, const std::string& path);
ScalarField load_snapshot(const std::string& path);

} // namespace tmix
