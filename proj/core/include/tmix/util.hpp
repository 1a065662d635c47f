#pragma once

#include <cstdint>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmix {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double a, Vec2 v) { return {a * v.x, a * v.y}; }

/// Wrap a coordinate into the fundamental domain [0,1).
inline double wrap01(double x) {
    double r = x - std::floor(x);
    return (r == 1.0) ? 0.0 : r;
}

inline Vec2 wrap01(Vec2 p) { return {wrap01(p.x), wrap01(p.y)}; }

/// Signed displacement x-y on the circle, in (-1/2, 1/2].
inline double torus_delta(double x, double y) {
    double d = x - y;
    d -= std::round(d);
    return d;
}

/// Torus distance between two points of [0,1)^2.
inline double torus_dist(Vec2 a, Vec2 b) {
    return std::hypot(torus_delta(a.x, b.x), torus_delta(a.y, b.y));
}

/// The standard C-infinity step built from exp(-1/x):
/// 0 for t <= 0, 1 for t >= 1, strictly increasing in between.
/// This is the single smoothing primitive used by every cutoff in the
/// project so that golden norm values are stable.
double smoothstep(double t);

/// Bump supported on (0,1), equal to 1 on [lo,hi] (plateau), built from
/// smoothstep ramps.
double smooth_window(double t, double ramp);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ull);

inline std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

/// n = 2^a * 3^b?  (grid admissibility: both lambda=1/2 and lambda=1/3
/// rescalings must land on sub-grids)
bool is_2a3b(int n);

/// Deterministic static-partition parallel map over [0,n).
/// Thread count is min(TMIX_THREADS or hardware_concurrency, n).
/// Each index is processed exactly once by exactly one thread; chunks are
/// contiguous, so any per-index output is identical to the serial run.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

int effective_thread_count();

/// Format a double with 17 significant digits; NaN spelled "NaN" (CSV schema).
std::string csv_double(double v);

/// Least squares line fit y = a + b x. Returns {a, b, rms_residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace tmix
