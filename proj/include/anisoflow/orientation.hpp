#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "anisoflow/anisofilter.hpp"
#include "anisoflow/image.hpp"
#include "anisoflow/io.hpp"

namespace aniso {

/// Per-pixel orientation estimate: angle in [0, 180) degrees, a response
/// (maximal filter response for MR, smallest-eigenvalue magnitude for the
/// tensor methods), and a validity flag. Angles are meaningful only where
/// valid is set.
struct OrientationField {
    Image2D angle;
    Image2D response;
    BinaryMask valid;
};

struct MRParams {
    double sigma1;
    double sigma2;
    std::vector<double> angles;  // degrees, strictly increasing, in [0, 180)
    FilterAlgorithm algo;
    std::optional<double> fiber_radius;  // r; default sigma2 = r/2
    std::optional<double> fiber_length;  // l; requires sigma1 < l/4

    void validate() const {
        if (angles.empty()) throw std::invalid_argument("MRParams: angle set empty");
        double prev = -1.0;
        for (double a : angles) {
            if (!(a >= 0.0) || !(a < 180.0) || !(a > prev))
                throw std::invalid_argument(
                    "MRParams: angles must be strictly increasing in [0, 180)");
            prev = a;
        }
        if (fiber_length && !(sigma1 < *fiber_length / 4.0))
            throw std::invalid_argument("MRParams: requires sigma1 < fiber_length/4");
    }
};

/// 1-degree grid {0, 1, ..., 179}.
inline std::vector<double> default_angle_grid(double step = 1.0) {
    std::vector<double> a;
    for (double t = 0.0; t < 180.0 - 1e-9; t += step) a.push_back(t);
    return a;
}

/// Derives sigma2 = r/2 when a fiber radius is given and sigma2 is unset (<= 0).
inline MRParams resolve_mr_params(MRParams p) {
    if (p.fiber_radius && p.sigma2 <= 0.0) p.sigma2 = *p.fiber_radius / 2.0;
    if (p.angles.empty()) p.angles = default_angle_grid();
    return p;
}

struct TensorParams {
    double sigma;       // gradient pre-smoothing; rule of thumb: sigma = r
    double rho = 6.0;   // tensor smoothing

    void validate() const {
        if (!(sigma >= 0.5) || !(rho >= 0.5))
            throw std::invalid_argument("TensorParams: sigma and rho must be >= 0.5");
    }
};

/// Closed-form eigendecomposition of [[a, b], [b, c]].
struct Eig2 {
    double lambda_min;
    double lambda_max;
    double angle_min;  // degrees in [0, 180), direction of the lambda_min eigenvector
};

inline Eig2 eig2x2_symmetric(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double half = 0.5 * (a - c);
    const double root = std::sqrt(half * half + b * b);
    Eig2 e{mean - root, mean + root, 0.0};
    double vx, vy;
    if (b == 0.0) {
        if (a <= c) {
            vx = 1.0;
            vy = 0.0;
        } else {
            vx = 0.0;
            vy = 1.0;
        }
    } else {
        vx = b;
        vy = e.lambda_min - a;
        // (lambda - c, b) is the better-conditioned choice when vy underflows
        if (vx == 0.0 && vy == 0.0) {
            vx = e.lambda_min - c;
            vy = b;
        }
    }
    e.angle_min = fold180(rad2deg(std::atan2(vy, vx)));
    return e;
}

/// Maximal-response estimator: per pixel, the grid angle whose anisotropic
/// Gaussian response is largest. Ties break toward the smallest angle.
inline OrientationField mr_estimate(const Image2D& img, const MRParams& params) {
    MRParams p = resolve_mr_params(params);
    p.validate();
    const int w = img.width(), h = img.height();
    OrientationField f{Image2D(w, h, p.angles.front()), Image2D(w, h, 0.0),
                       BinaryMask(w, h, true)};
    bool first = true;
    for (double theta : p.angles) {
        const Image2D resp = filter(img, {p.sigma1, p.sigma2, theta}, p.algo);
        double* br = f.response.data();
        double* ba = f.angle.data();
        const double* r = resp.data();
        if (first) {
            for (std::size_t i = 0; i < resp.size(); ++i) br[i] = r[i];
            first = false;
            continue;
        }
        for (std::size_t i = 0; i < resp.size(); ++i) {
            if (r[i] > br[i]) {  // strict: ties keep the earlier (smaller) angle
                br[i] = r[i];
                ba[i] = theta;
            }
        }
    }
    return f;
}

namespace orient_detail {

/// Central differences [-1/2, 0, 1/2] along x, edge-replicated.
inline Image2D diff_x(const Image2D& img) {
    const int w = img.width(), h = img.height();
    Image2D out(w, h);
    for (int y = 0; y < h; ++y) {
        const double* r = img.row(y);
        double* o = out.row(y);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
            o[x] = 0.5 * (r[xp] - r[xm]);
        }
    }
    return out;
}

inline Image2D diff_y(const Image2D& img) {
    const int w = img.width(), h = img.height();
    Image2D out(w, h);
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
        const double* rm = img.row(ym);
        const double* rp = img.row(yp);
        double* o = out.row(y);
        for (int x = 0; x < w; ++x) o[x] = 0.5 * (rp[x] - rm[x]);
    }
    return out;
}

} // namespace orient_detail

/// Structure tensor: smooth with g_sigma, take the gradient outer product,
/// smooth the tensor entries with g_rho. The eigenvector of the smallest
/// eigenvalue is the local fiber direction.
inline OrientationField structure_tensor_estimate(const Image2D& img, const TensorParams& p) {
    p.validate();
    const Image2D fs = smooth_iso(img, p.sigma);
    const Image2D fx = orient_detail::diff_x(fs);
    const Image2D fy = orient_detail::diff_y(fs);
    const int w = img.width(), h = img.height();
    Image2D j11(w, h), j12(w, h), j22(w, h);
    for (std::size_t i = 0; i < fx.size(); ++i) {
        j11.data()[i] = fx.data()[i] * fx.data()[i];
        j12.data()[i] = fx.data()[i] * fy.data()[i];
        j22.data()[i] = fy.data()[i] * fy.data()[i];
    }
    gauss_rows_inplace(j11, p.rho);
    gauss_cols_inplace(j11, p.rho);
    gauss_rows_inplace(j12, p.rho);
    gauss_cols_inplace(j12, p.rho);
    gauss_rows_inplace(j22, p.rho);
    gauss_cols_inplace(j22, p.rho);

    OrientationField f{Image2D(w, h, 0.0), Image2D(w, h, 0.0), BinaryMask(w, h, false)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double a = j11.at(x, y), b = j12.at(x, y), c = j22.at(x, y);
            if (a + c <= 1e-12) continue;  // numerically zero tensor
            const Eig2 e = eig2x2_symmetric(a, b, c);
            f.angle.at(x, y) = e.angle_min;
            f.response.at(x, y) = std::abs(e.lambda_min);
            f.valid.set(x, y, true);
        }
    }
    return f;
}

/// Hessian of the g_sigma-smoothed image; smallest-eigenvalue eigenvector
/// gives the ridge direction (bright fibers: most negative curvature across
/// the fiber, near-zero along it).
inline OrientationField hessian_estimate(const Image2D& img, double sigma) {
    if (!(sigma >= 0.5)) throw std::invalid_argument("hessian_estimate: sigma must be >= 0.5");
    const Image2D fs = smooth_iso(img, sigma);
    const Image2D fx = orient_detail::diff_x(fs);
    const Image2D fy = orient_detail::diff_y(fs);
    const Image2D fxx = orient_detail::diff_x(fx);
    const Image2D fxy = orient_detail::diff_y(fx);
    const Image2D fyy = orient_detail::diff_y(fy);
    const int w = img.width(), h = img.height();
    OrientationField f{Image2D(w, h, 0.0), Image2D(w, h, 0.0), BinaryMask(w, h, false)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double a = fxx.at(x, y), b = fxy.at(x, y), c = fyy.at(x, y);
            const Eig2 e = eig2x2_symmetric(a, b, c);
            if (std::abs(e.lambda_min) <= 1e-12 && std::abs(e.lambda_max) <= 1e-12) continue;
            // Fiber direction = eigenvector of the smallest-magnitude
            // curvature: along a bright ridge the cross-fiber eigenvalue is
            // strongly negative (hence the signed minimum), while the
            // along-fiber curvature is near zero.
            const bool min_is_flat = std::abs(e.lambda_min) <= std::abs(e.lambda_max);
            f.angle.at(x, y) = min_is_flat ? e.angle_min : fold180(e.angle_min + 90.0);
            // Response = magnitude of the cross-fiber curvature (ridge
            // strength).
            f.response.at(x, y) = std::abs(min_is_flat ? e.lambda_max : e.lambda_min);
            f.valid.set(x, y, true);
        }
    }
    return f;
}

/// Hue = 2*angle on the color circle, full saturation, value = response
/// normalized by its maximum over valid pixels; invalid pixels black.
inline RgbImage colorize(const OrientationField& f) {
    const int w = f.angle.width(), h = f.angle.height();
    RgbImage out;
    out.width = w;
    out.height = h;
    out.rgb.assign(static_cast<std::size_t>(w) * h * 3, 0);
    double vmax = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (f.valid.get(x, y)) vmax = std::max(vmax, std::abs(f.response.at(x, y)));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!f.valid.get(x, y)) continue;
            const double hue = std::fmod(2.0 * fold180(f.angle.at(x, y)), 360.0);
            const double val = vmax > 0.0 ? std::abs(f.response.at(x, y)) / vmax : 0.0;
            const double c = val;  // saturation 1
            const double hp = hue / 60.0;
            const double xx = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
            double r = 0, g = 0, b = 0;
            if (hp < 1) { r = c; g = xx; }
            else if (hp < 2) { r = xx; g = c; }
            else if (hp < 3) { g = c; b = xx; }
            else if (hp < 4) { g = xx; b = c; }
            else if (hp < 5) { r = xx; b = c; }
            else { r = c; b = xx; }
            const std::size_t idx = (static_cast<std::size_t>(y) * w + x) * 3;
            out.rgb[idx] = static_cast<unsigned char>(r * 255.0 + 0.5);
            out.rgb[idx + 1] = static_cast<unsigned char>(g * 255.0 + 0.5);
            out.rgb[idx + 2] = static_cast<unsigned char>(b * 255.0 + 0.5);
        }
    }
    return out;
}

/// Histogram of valid masked angles; bin_width must divide 180.
inline std::vector<long long> angle_histogram(const OrientationField& f, const BinaryMask& mask,
                                              double bin_width) {
    const double nb = 180.0 / bin_width;
    const long nbins = static_cast<long>(std::round(nb));
    if (nbins < 1 || std::abs(nb - nbins) > 1e-9)
        throw std::invalid_argument("angle_histogram: bin width must divide 180");
    if (mask.width() != f.angle.width() || mask.height() != f.angle.height())
        throw std::invalid_argument("angle_histogram: mask dimension mismatch");
    std::vector<long long> counts(static_cast<std::size_t>(nbins), 0);
    for (int y = 0; y < f.angle.height(); ++y) {
        for (int x = 0; x < f.angle.width(); ++x) {
            if (!mask.get(x, y) || !f.valid.get(x, y)) continue;
            long b = static_cast<long>(std::floor(fold180(f.angle.at(x, y)) / bin_width));
            if (b >= nbins) b = nbins - 1;
            counts[static_cast<std::size_t>(b)]++;
        }
    }
    return counts;
}

} // namespace aniso
