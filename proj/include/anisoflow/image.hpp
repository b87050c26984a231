#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aniso {

/// Rectangular grid of real-valued samples, row-major.
/// x is the column index (x1-axis), y the row index (x2-axis).
namespace image_detail {
inline std::size_t checked_size(int width, int height, const char* who) {
    if (width < 1 || height < 1)
        throw std::invalid_argument(std::string(who) + ": dimensions must be positive");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}
} // namespace image_detail

class Image2D {
public:
    Image2D() = default;
    Image2D(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(image_detail::checked_size(width, height, "Image2D"), fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    double* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
    const double* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Image2D transposed() const {
        Image2D out(height_, width_);
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x)
                out.at(y, x) = at(x, y);
        return out;
    }

    bool same_size(const Image2D& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Per-pixel boolean mask with the dimensions of the image it was derived from.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(image_detail::checked_size(width, height, "BinaryMask"), fill ? 1 : 0) {}

    int width() const { return width_; }
    int height() const { return height_; }

    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<unsigned char> bits_;
};

/// Target rotated anisotropic Gaussian: major/minor std. deviations and angle.
/// theta is in degrees, interpreted modulo 180.
struct AnisoKernelSpec {
    double sigma1;
    double sigma2;
    double theta;

    void validate() const {
        if (!(sigma2 > 0.0) || !(sigma1 > sigma2))
            throw std::invalid_argument("AnisoKernelSpec: requires sigma1 > sigma2 > 0");
    }
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Angle folded into [0, 180).
inline double fold180(double deg) {
    double a = std::fmod(deg, 180.0);
    if (a < 0.0) a += 180.0;
    return a;
}

/// N x N image, zero except a single 1 at (floor(N/2), floor(N/2)).
inline Image2D unit_impulse(int n) {
    if (n < 3) throw std::invalid_argument("unit_impulse: N must be >= 3");
    Image2D img(n, n, 0.0);
    img.at(n / 2, n / 2) = 1.0;
    return img;
}

/// Continuous anisotropic Gaussian sampled at integer offsets from the
/// center pixel (floor(N/2), floor(N/2)); no discrete renormalization.
inline Image2D sample_true_kernel(int n, const AnisoKernelSpec& spec) {
    spec.validate();
    Image2D img(n, n);
    const double th = deg2rad(spec.theta);
    const double c = std::cos(th), s = std::sin(th);
    const double norm = 1.0 / (2.0 * kPi * spec.sigma1 * spec.sigma2);
    const int cx = n / 2, cy = n / 2;
    for (int y = 0; y < n; ++y) {
        const double dy = y - cy;
        double* r = img.row(y);
        for (int x = 0; x < n; ++x) {
            const double dx = x - cx;
            const double t1 = dx * c + dy * s;
            const double t2 = -dx * s + dy * c;
            r[x] = norm * std::exp(-0.5 * (t1 * t1 / (spec.sigma1 * spec.sigma1) +
                                           t2 * t2 / (spec.sigma2 * spec.sigma2)));
        }
    }
    return img;
}

/// Euclidean distance between two equal-sized images.
inline double l2_distance(const Image2D& a, const Image2D& b) {
    if (!a.same_size(b)) throw std::invalid_argument("l2_distance: dimension mismatch");
    double acc = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = pa[i] - pb[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double l2_norm(const Image2D& a) {
    double acc = 0.0;
    const double* p = a.data();
    for (std::size_t i = 0; i < a.size(); ++i) acc += p[i] * p[i];
    return std::sqrt(acc);
}

/// 3x3 median filter, edge-replicated borders.
inline Image2D median3x3(const Image2D& img) {
    const int w = img.width(), h = img.height();
    Image2D out(w, h);
    double v[9];
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int k = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    v[k++] = img.at(xx, yy);
                }
            }
            std::nth_element(v, v + 4, v + 9);
            out.at(x, y) = v[4];
        }
    }
    return out;
}

} // namespace aniso
