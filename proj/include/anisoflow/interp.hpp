#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace aniso {

/// Sub-pixel sampling scheme along a line of samples.
enum class InterpScheme { Linear, Cubic };

namespace interp_detail {

/// Global accounting of interpolation evaluations (fractional-position
/// samples only; integer positions reproduce samples and are not counted).
/// Used by instrumentation tests; zero overhead beyond one branch when off.
inline std::atomic<bool> g_count_enabled{false};
inline std::atomic<long long> g_count{0};

inline void note_interp() {
    if (g_count_enabled.load(std::memory_order_relaxed))
        g_count.fetch_add(1, std::memory_order_relaxed);
}

/// Cubic-convolution (a = -1/2) weights for fraction f in [0,1),
/// taps at offsets -1, 0, 1, 2.
inline void cubic_weights(double f, double w[4]) {
    const double f2 = f * f, f3 = f2 * f;
    w[0] = 0.5 * (-f3 + 2.0 * f2 - f);
    w[1] = 0.5 * (3.0 * f3 - 5.0 * f2 + 2.0);
    w[2] = 0.5 * (-3.0 * f3 + 4.0 * f2 + f);
    w[3] = 0.5 * (f3 - f2);
}

/// Natural end condition: ghost sample one step beyond s0 given the first
/// three samples inward (zero second derivative at the boundary).
inline double ghost(double s0, double s1, double s2) {
    return 3.0 * s0 - 3.0 * s1 + s2;
}

inline double sample_impl(const double* line, std::size_t n, double pos, InterpScheme scheme) {
    const double fi = std::floor(pos);
    std::size_t i = static_cast<std::size_t>(fi);
    double f = pos - fi;
    if (i >= n - 1) {  // pos == n-1 exactly
        i = n - 2;
        f = 1.0;
    }
    if (f == 0.0) return line[i];
    note_interp();
    if (scheme == InterpScheme::Linear) return (1.0 - f) * line[i] + f * line[i + 1];
    double w[4];
    cubic_weights(f, w);
    const double sm1 = i >= 1 ? line[i - 1] : ghost(line[0], line[1], line[2]);
    const double sp2 = i + 2 < n ? line[i + 2] : ghost(line[n - 1], line[n - 2], line[n - 3]);
    return w[0] * sm1 + w[1] * line[i] + w[2] * line[i + 1] + w[3] * sp2;
}

} // namespace interp_detail

inline void interp_counter_reset() { interp_detail::g_count.store(0); }
inline void interp_counter_enable(bool on) { interp_detail::g_count_enabled.store(on); }
inline long long interp_counter() { return interp_detail::g_count.load(); }

/// Value of the line at fractional position pos in [0, n-1].
/// Linear: 2-tap convex combination. Cubic: 4-tap cubic convolution
/// (a = -1/2); missing taps within 1 of a boundary are synthesized by the
/// natural end condition (zero second derivative).
inline double sample(const double* line, std::size_t n, double pos, InterpScheme scheme) {
    if (n < 4) throw std::invalid_argument("interp::sample: need at least 4 samples");
    if (!(pos >= 0.0) || !(pos <= static_cast<double>(n - 1)))
        throw std::out_of_range("interp::sample: position outside [0, n-1]");
    return interp_detail::sample_impl(line, n, pos, scheme);
}

/// Sampling under constant extension: positions beyond the ends evaluate to
/// the edge samples. The 2D filters use this to realize repeat-edge
/// boundaries on sheared lines.
inline double sample_clamped(const double* line, std::size_t n, double pos, InterpScheme scheme) {
    if (pos <= 0.0) return line[0];
    const double last = static_cast<double>(n - 1);
    if (pos >= last) return line[n - 1];
    return interp_detail::sample_impl(line, n, pos, scheme);
}

} // namespace aniso
