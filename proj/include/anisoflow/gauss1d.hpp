#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace aniso {

/// 3rd-order recursive Gaussian approximation (Young & van Vliet scheme).
/// Forward pass:  w[n] = gain*x[n] + (b1*w[n-1] + b2*w[n-2] + b3*w[n-3]) / b0
/// Backward pass: v[n] = gain*w[n] + (b1*v[n+1] + b2*v[n+2] + b3*v[n+3]) / b0
/// gain = 1 - (b1+b2+b3)/b0, so each pass has unit DC gain.
struct RecursiveCoeffs {
    double b0, b1, b2, b3;
    double gain;
    double sigma;

    double a1() const { return b1 / b0; }
    double a2() const { return b2 / b0; }
    double a3() const { return b3 / b0; }
};

inline constexpr double kMinRecursiveSigma = 0.5;

/// Experimental alternative parameterization (pole-based, variance-matched).
/// Off by default; retained for accuracy comparisons.
inline bool& use_pole_matched_coeffs() {
    static bool flag = false;
    return flag;
}

namespace detail {
inline RecursiveCoeffs pole_matched_coeffs(double sigma) {
    const std::complex<double> d1{1.41650, 1.00829};
    const double d3 = 1.86543;
    auto variance_of_q = [&](double q) {
        const std::complex<double> p1 = std::pow(d1, 1.0 / q);
        const double p3 = std::pow(d3, 1.0 / q);
        const std::complex<double> c1 = 2.0 * p1 / ((p1 - 1.0) * (p1 - 1.0));
        const double c3 = 2.0 * p3 / ((p3 - 1.0) * (p3 - 1.0));
        return 2.0 * c1.real() + c3;
    };
    double lo = 1e-3, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (variance_of_q(mid) < sigma * sigma ? lo : hi) = mid;
    }
    const double q = 0.5 * (lo + hi);
    const std::complex<double> p1 = std::pow(d1, 1.0 / q);
    const double p3 = std::pow(d3, 1.0 / q);
    // A(z) = (1 - z^-1/p1)(1 - z^-1/conj(p1))(1 - z^-1/p3)
    const double r = 1.0 / std::norm(p1);          // 1/(p1*conj(p1))
    const double s = 2.0 * p1.real() / std::norm(p1); // 1/p1 + 1/conj(p1)
    RecursiveCoeffs c{};
    c.b0 = 1.0;
    c.b1 = s + 1.0 / p3;
    c.b2 = -(r + s / p3);
    c.b3 = r / p3;
    c.gain = 1.0 - (c.b1 + c.b2 + c.b3);
    c.sigma = sigma;
    return c;
}
} // namespace detail

inline RecursiveCoeffs coeffs_for_sigma(double sigma) {
    if (!(sigma >= kMinRecursiveSigma))
        throw std::invalid_argument("coeffs_for_sigma: sigma must be >= 0.5");
    if (use_pole_matched_coeffs()) return detail::pole_matched_coeffs(sigma);
    const double q = sigma >= 2.5
                         ? 0.98711 * sigma - 0.96330
                         : 3.97156 - 4.14554 * std::sqrt(1.0 - 0.26891 * sigma);
    RecursiveCoeffs c{};
    c.b0 = 1.57825 + 2.44413 * q + 1.4281 * q * q + 0.422205 * q * q * q;
    c.b1 = 2.44413 * q + 2.85619 * q * q + 1.26661 * q * q * q;
    c.b2 = -(1.4281 * q * q + 1.26661 * q * q * q);
    c.b3 = 0.422205 * q * q * q;
    c.gain = 1.0 - (c.b1 + c.b2 + c.b3) / c.b0;
    c.sigma = sigma;
    return c;
}

/// 3x3 matrix initializing the anticausal pass from the last causal outputs
/// (Triggs & Sdika), for constant extension of the input beyond the border.
/// v_init = gain * M * (w - u_plus) + u_plus, where u_plus is the edge input
/// value (the causal steady state) which is also the anticausal steady state.
struct BoundaryHandler {
    std::array<double, 9> m;

    explicit BoundaryHandler(const RecursiveCoeffs& c) {
        const double a1 = c.a1(), a2 = c.a2(), a3 = c.a3();
        const double norm = 1.0 / ((1.0 + a1 - a2 + a3) * (1.0 - a1 - a2 - a3) *
                                   (1.0 + a2 + (a1 - a3) * a3));
        m[0] = norm * (-a3 * a1 + 1.0 - a3 * a3 - a2);
        m[1] = norm * (a3 + a1) * (a2 + a3 * a1);
        m[2] = norm * a3 * (a1 + a3 * a2);
        m[3] = norm * (a1 + a3 * a2);
        m[4] = norm * -(a2 - 1.0) * (a2 + a3 * a1);
        m[5] = norm * -(a3 * a1 + a3 * a3 + a2 - 1.0) * a3;
        m[6] = norm * (a3 * a1 + a2 + a1 * a1 - a2 * a2);
        m[7] = norm * (a1 * a2 + a3 * a2 * a2 - a1 * a3 * a3 - a3 * a3 * a3 - a3 * a2 + a3);
        m[8] = norm * a3 * (a1 + a3 * a2);
    }

    /// Initial anticausal state (v[N-1], v[N-2], v[N-3]) from the last three
    /// causal outputs and the constant continuation value u_plus.
    std::array<double, 3> init(const RecursiveCoeffs& c, double w1, double w2, double w3,
                               double u_plus) const {
        const double d1 = w1 - u_plus, d2 = w2 - u_plus, d3 = w3 - u_plus;
        return {c.gain * (m[0] * d1 + m[1] * d2 + m[2] * d3) + u_plus,
                c.gain * (m[3] * d1 + m[4] * d2 + m[5] * d3) + u_plus,
                c.gain * (m[6] * d1 + m[7] * d2 + m[8] * d3) + u_plus};
    }
};

namespace detail {
inline void check_line(std::size_t n) {
    if (n < 4) throw std::invalid_argument("gauss1d: line length must be >= 4");
}
} // namespace detail

/// Causal pass in place, history initialized to the edge value (the causal
/// steady state under constant extension).
inline void forward_pass(std::span<double> line, const RecursiveCoeffs& c) {
    detail::check_line(line.size());
    const double a1 = c.a1(), a2 = c.a2(), a3 = c.a3(), g = c.gain;
    double w1 = line[0], w2 = line[0], w3 = line[0];
    for (double& v : line) {
        const double w = g * v + a1 * w1 + a2 * w2 + a3 * w3;
        w3 = w2;
        w2 = w1;
        w1 = w;
        v = w;
    }
}

/// Anticausal pass in place over a causal-pass result. u_plus is the input's
/// edge value beyond the end (for the Triggs-Sdika initialization).
inline void backward_pass(std::span<double> line, const RecursiveCoeffs& c,
                          const BoundaryHandler& bh, double u_plus) {
    detail::check_line(line.size());
    const std::size_t n = line.size();
    const double a1 = c.a1(), a2 = c.a2(), a3 = c.a3(), g = c.gain;
    auto vi = bh.init(c, line[n - 1], line[n - 2], line[n - 3], u_plus);
    double v1 = vi[0], v2 = vi[1], v3 = vi[2];
    line[n - 1] = v1;
    for (std::size_t i = n - 1; i-- > 0;) {
        const double v = g * line[i] + a1 * v1 + a2 * v2 + a3 * v3;
        v3 = v2;
        v2 = v1;
        v1 = v;
        line[i] = v;
    }
}

/// Complete 1D recursive Gaussian: forward then backward pass, constant
/// extension at both ends.
inline void gauss1d_inplace(std::span<double> line, const RecursiveCoeffs& c) {
    detail::check_line(line.size());
    const double u_plus = line[line.size() - 1];
    forward_pass(line, c);
    BoundaryHandler bh(c);
    backward_pass(line, c, bh, u_plus);
}

inline void gauss1d_inplace(std::span<double> line, double sigma) {
    gauss1d_inplace(line, coeffs_for_sigma(sigma));
}

} // namespace aniso
