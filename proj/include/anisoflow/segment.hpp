#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "anisoflow/image.hpp"
#include "anisoflow/orientation.hpp"

namespace aniso {

struct NiblackParams {
    int window;  // odd, >= 3
    double k = 0.6;

    void validate() const {
        if (window < 3 || window % 2 == 0)
            throw std::invalid_argument("NiblackParams: window must be odd and >= 3");
    }
};

/// Niblack local thresholding: foreground iff value > m + k*s with m, s the
/// mean and standard deviation over the centered window (edge-replicated
/// borders); strict inequality. Windowed statistics via two integral images.
inline BinaryMask niblack_threshold(const Image2D& img, const NiblackParams& p) {
    p.validate();
    const int w = img.width(), h = img.height();
    if (p.window > std::min(w, h))
        throw std::invalid_argument("niblack_threshold: window larger than image");
    const int r = p.window / 2;
    const int pw = w + 2 * r, ph = h + 2 * r;

    // Integral images over the edge-replicated padding, with a zero row/col
    // in front: isum[(y+1)*(pw+1) + (x+1)] = sum of padded[0..y][0..x].
    std::vector<double> isum(static_cast<std::size_t>(pw + 1) * (ph + 1), 0.0);
    std::vector<double> isum2(static_cast<std::size_t>(pw + 1) * (ph + 1), 0.0);
    for (int y = 0; y < ph; ++y) {
        const int sy = std::clamp(y - r, 0, h - 1);
        const double* row = img.row(sy);
        double rs = 0.0, rs2 = 0.0;
        for (int x = 0; x < pw; ++x) {
            const double v = row[std::clamp(x - r, 0, w - 1)];
            rs += v;
            rs2 += v * v;
            const std::size_t idx = static_cast<std::size_t>(y + 1) * (pw + 1) + (x + 1);
            isum[idx] = isum[idx - static_cast<std::size_t>(pw + 1)] + rs;
            isum2[idx] = isum2[idx - static_cast<std::size_t>(pw + 1)] + rs2;
        }
    }

    const double area = static_cast<double>(p.window) * p.window;
    BinaryMask out(w, h, false);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // Window around (x, y) maps to padded coords [x, x+2r] x [y, y+2r].
            const std::size_t stride = static_cast<std::size_t>(pw + 1);
            const std::size_t y0 = static_cast<std::size_t>(y), y1 = y + p.window;
            const std::size_t x0 = static_cast<std::size_t>(x), x1 = x + p.window;
            const double s = isum[y1 * stride + x1] - isum[y0 * stride + x1] -
                             isum[y1 * stride + x0] + isum[y0 * stride + x0];
            const double s2 = isum2[y1 * stride + x1] - isum2[y0 * stride + x1] -
                              isum2[y1 * stride + x0] + isum2[y0 * stride + x0];
            const double m = s / area;
            const double var = std::max(0.0, s2 / area - m * m);
            // The relative epsilon keeps the strict comparison strict under
            // integral-image rounding (a constant window must stay below its
            // own mean) while preserving affine covariance of the threshold.
            const double sd = std::sqrt(var);
            if (img.at(x, y) > m + p.k * sd + 1e-9 * (std::abs(m) + sd)) out.set(x, y, true);
        }
    }
    return out;
}

/// Erosion with a side x side square structuring element anchored at the
/// pixel's top-left: a pixel survives iff the whole square (which must lie
/// inside the mask bounds) is foreground.
inline BinaryMask erode_square(const BinaryMask& mask, int side) {
    if (side < 1) throw std::invalid_argument("erode_square: side must be >= 1");
    const int w = mask.width(), h = mask.height();
    BinaryMask out(w, h, false);
    for (int y = 0; y + side <= h; ++y) {
        for (int x = 0; x + side <= w; ++x) {
            bool all = true;
            for (int j = 0; all && j < side; ++j)
                for (int i = 0; i < side; ++i)
                    if (!mask.get(x + i, y + j)) {
                        all = false;
                        break;
                    }
            if (all) out.set(x, y, true);
        }
    }
    return out;
}

/// Remove connected components with strictly fewer than min_size pixels
/// (components of exactly min_size survive). Connectivity 4 or 8.
inline BinaryMask remove_small_components(const BinaryMask& mask, int min_size = 100,
                                          int connectivity = 8) {
    if (connectivity != 4 && connectivity != 8)
        throw std::invalid_argument("remove_small_components: connectivity must be 4 or 8");
    const int w = mask.width(), h = mask.height();
    BinaryMask out(w, h, false);
    std::vector<char> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack, component;
    const int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int nn = connectivity == 4 ? 4 : 8;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.get(x, y) || visited[idx]) continue;
            stack.clear();
            component.clear();
            stack.emplace_back(x, y);
            visited[idx] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                component.emplace_back(cx, cy);
                for (int d = 0; d < nn; ++d) {
                    const int nx = cx + dx8[d], ny = cy + dy8[d];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                    if (!mask.get(nx, ny) || visited[nidx]) continue;
                    visited[nidx] = 1;
                    stack.emplace_back(nx, ny);
                }
            }
            if (static_cast<int>(component.size()) >= min_size)
                for (auto [px, py] : component) out.set(px, py, true);
        }
    }
    return out;
}

/// Full binarization recipe: maximal-response image from the MR estimator,
/// Niblack thresholding (window = 4*sigma2 rounded up to the nearest odd
/// integer >= 3), square erosion, small-component removal.
inline BinaryMask segment_pipeline(const Image2D& img, const MRParams& mr,
                                   double niblack_k = 0.6, int erode_side = 2,
                                   int min_size = 100) {
    const MRParams p = resolve_mr_params(mr);
    const OrientationField field = mr_estimate(img, p);
    int win = static_cast<int>(std::lround(4.0 * p.sigma2));
    if (win % 2 == 0) ++win;
    win = std::max(win, 3);
    BinaryMask m = niblack_threshold(field.response, {win, niblack_k});
    m = erode_square(m, erode_side);
    return remove_small_components(m, min_size, 8);
}

} // namespace aniso
