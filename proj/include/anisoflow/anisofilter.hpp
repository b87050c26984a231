#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "anisoflow/decomp.hpp"
#include "anisoflow/gauss1d.hpp"
#include "anisoflow/image.hpp"
#include "anisoflow/interp.hpp"
#include "anisoflow/parallel.hpp"

namespace aniso {

enum class FilterKind { NaiveRotation, Geometric, LineBuffer, Hybrid, DenseOracle };

/// Algorithm selector. DenseOracle ignores interp/modification; NaiveRotation
/// ignores modification.
struct FilterAlgorithm {
    FilterKind kind = FilterKind::Hybrid;
    InterpScheme interp = InterpScheme::Linear;
    bool modification = false;
    bool decomp_as_printed = false;  // comparison-only variant of the planner
};

/// Isotropic recursive Gaussian smoothing along rows.
inline void gauss_rows_inplace(Image2D& img, double sigma) {
    const RecursiveCoeffs c = coeffs_for_sigma(sigma);
    parallel_for(img.height(), [&](std::int64_t y) {
        gauss1d_inplace(std::span<double>(img.row(static_cast<int>(y)),
                                          static_cast<std::size_t>(img.width())),
                        c);
    });
}

/// Isotropic recursive Gaussian smoothing along columns.
inline void gauss_cols_inplace(Image2D& img, double sigma) {
    const RecursiveCoeffs c = coeffs_for_sigma(sigma);
    const int w = img.width(), h = img.height();
    parallel_for(w, [&](std::int64_t x) {
        std::vector<double> col(static_cast<std::size_t>(h));
        for (int y = 0; y < h; ++y) col[y] = img.at(static_cast<int>(x), y);
        gauss1d_inplace(col, c);
        for (int y = 0; y < h; ++y) img.at(static_cast<int>(x), y) = col[y];
    });
}

/// Separable isotropic Gaussian (rows then columns).
inline Image2D smooth_iso(const Image2D& img, double sigma) {
    Image2D out = img;
    gauss_rows_inplace(out, sigma);
    gauss_cols_inplace(out, sigma);
    return out;
}

namespace filter_detail {

/// Sheared-lattice geometry shared by the x1-aligned algorithms. Slot j of
/// row t gathers the image at x = jmin + j + mu*t; every slot follows one
/// line of direction nu* across all rows.
struct SlotSpace {
    long jmin;
    std::size_t len;

    SlotSpace(int w, int h, double mu) {
        const double smax = mu * (h - 1);
        jmin = static_cast<long>(std::floor(std::min(0.0, -smax))) - 2;
        const long jmax = (w - 1) + static_cast<long>(std::ceil(std::max(0.0, -smax))) + 2;
        len = static_cast<std::size_t>(jmax - jmin + 1);
    }

    double gather_base(double mu, int t) const { return jmin + mu * t; }
    double scatter_pos(double mu, int t, int x) const { return x - mu * t - jmin; }
};

inline void gather_row(const double* row, int w, double base, std::size_t len,
                       InterpScheme interp, double* out) {
    for (std::size_t j = 0; j < len; ++j)
        out[j] = sample_clamped(row, static_cast<std::size_t>(w), base + static_cast<double>(j),
                                interp);
}

/// Per-row-step standard deviation of the nu*-line filter: unit steps in the
/// cross-axis coordinate are 1/sin(phi) apart along the line.
inline double line_step_sigma(const DecompPlan& p) {
    return p.sigma_line * std::sin(deg2rad(p.phi));
}

/// Hybrid algorithm, x1-aligned plan: axis pass on grid rows, then one
/// forward and one backward recursive pass over the sheared lattice. The
/// forward result is kept in lattice coordinates (no transformation between
/// the passes), so interpolation happens exactly twice per pixel: once
/// gathering the input of the forward pass, once scattering the backward
/// result to the grid.
inline Image2D hybrid_x1(const Image2D& img, const DecompPlan& plan, InterpScheme interp) {
    const int w = img.width(), h = img.height();
    Image2D a = img;
    gauss_rows_inplace(a, plan.sigma_axis);

    const RecursiveCoeffs c = coeffs_for_sigma(line_step_sigma(plan));
    const BoundaryHandler bh(c);
    const double a1 = c.a1(), a2 = c.a2(), a3 = c.a3(), g = c.gain;
    const double mu = plan.mu;
    const SlotSpace ss(w, h, mu);
    const std::size_t L = ss.len;

    std::vector<double> fwd(static_cast<std::size_t>(h) * L);
    std::vector<double> u(L), u0(L), ulast(L);

    const double *h1 = nullptr, *h2 = nullptr, *h3 = nullptr;
    for (int t = 0; t < h; ++t) {
        gather_row(a.row(t), w, ss.gather_base(mu, t), L, interp, u.data());
        if (t == 0) {
            u0 = u;
            h1 = h2 = h3 = u0.data();
        }
        double* wr = fwd.data() + static_cast<std::size_t>(t) * L;
        for (std::size_t j = 0; j < L; ++j)
            wr[j] = g * u[j] + a1 * h1[j] + a2 * h2[j] + a3 * h3[j];
        h3 = h2;
        h2 = h1;
        h1 = wr;
        if (t == h - 1) ulast = u;
    }

    Image2D out(w, h);
    std::vector<double> vb0(L), vb1(L), vb2(L), vb3(L);
    double *v1 = vb1.data(), *v2 = vb2.data(), *v3 = vb3.data(), *vc = vb0.data();
    {
        const double* wl1 = fwd.data() + static_cast<std::size_t>(h - 1) * L;
        const double* wl2 = fwd.data() + static_cast<std::size_t>(h - 2) * L;
        const double* wl3 = fwd.data() + static_cast<std::size_t>(h - 3) * L;
        for (std::size_t j = 0; j < L; ++j) {
            const double up = ulast[j];
            const auto vi = bh.init(c, wl1[j], wl2[j], wl3[j], up);
            v1[j] = vi[0];
            v2[j] = vi[1];
            v3[j] = vi[2];
        }
        double* orow = out.row(h - 1);
        for (int x = 0; x < w; ++x)
            orow[x] = sample_clamped(v1, L, ss.scatter_pos(mu, h - 1, x), interp);
    }
    for (int t = h - 2; t >= 0; --t) {
        const double* wr = fwd.data() + static_cast<std::size_t>(t) * L;
        for (std::size_t j = 0; j < L; ++j)
            vc[j] = g * wr[j] + a1 * v1[j] + a2 * v2[j] + a3 * v3[j];
        double* orow = out.row(t);
        for (int x = 0; x < w; ++x)
            orow[x] = sample_clamped(vc, L, ss.scatter_pos(mu, t, x), interp);
        std::swap(v3, v2);
        std::swap(v2, v1);
        std::swap(v1, vc);
    }
    return out;
}

/// Line buffer algorithm, x1-aligned plan: same decomposition, but every
/// recursive pass reads from and writes to the image grid through
/// interpolation (4 interpolation steps per pixel); only the three-line
/// filter history lives in lattice coordinates.
inline Image2D linebuffer_x1(const Image2D& img, const DecompPlan& plan, InterpScheme interp) {
    const int w = img.width(), h = img.height();
    Image2D a = img;
    gauss_rows_inplace(a, plan.sigma_axis);

    const RecursiveCoeffs c = coeffs_for_sigma(line_step_sigma(plan));
    const BoundaryHandler bh(c);
    const double a1 = c.a1(), a2 = c.a2(), a3 = c.a3(), g = c.gain;
    const double mu = plan.mu;
    const SlotSpace ss(w, h, mu);
    const std::size_t L = ss.len;

    std::vector<double> u(L), hb1(L), hb2(L), hb3(L), wl(L);
    double *h1 = hb1.data(), *h2 = hb2.data(), *h3 = hb3.data();

    Image2D fwd(w, h);
    for (int t = 0; t < h; ++t) {
        gather_row(a.row(t), w, ss.gather_base(mu, t), L, interp, u.data());
        if (t == 0) {
            std::copy(u.begin(), u.end(), h1);
            std::copy(u.begin(), u.end(), h2);
            std::copy(u.begin(), u.end(), h3);
        }
        for (std::size_t j = 0; j < L; ++j)
            wl[j] = g * u[j] + a1 * h1[j] + a2 * h2[j] + a3 * h3[j];
        double* frow = fwd.row(t);
        for (int x = 0; x < w; ++x)
            frow[x] = sample_clamped(wl.data(), L, ss.scatter_pos(mu, t, x), interp);
        std::swap(h3, h2);
        std::swap(h2, h1);
        std::copy(wl.begin(), wl.end(), h1);
    }

    Image2D out(w, h);
    std::vector<double> wg(L), v1(L), v2(L), v3(L), vc(L), up(L), wg2(L), wg3(L);
    gather_row(fwd.row(h - 1), w, ss.gather_base(mu, h - 1), L, interp, wg.data());
    gather_row(fwd.row(h - 2), w, ss.gather_base(mu, h - 2), L, interp, wg2.data());
    gather_row(fwd.row(h - 3), w, ss.gather_base(mu, h - 3), L, interp, wg3.data());
    gather_row(a.row(h - 1), w, ss.gather_base(mu, h - 1), L, interp, up.data());
    for (std::size_t j = 0; j < L; ++j) {
        const auto vi = bh.init(c, wg[j], wg2[j], wg3[j], up[j]);
        v1[j] = vi[0];
        v2[j] = vi[1];
        v3[j] = vi[2];
    }
    {
        double* orow = out.row(h - 1);
        for (int x = 0; x < w; ++x)
            orow[x] = sample_clamped(v1.data(), L, ss.scatter_pos(mu, h - 1, x), interp);
    }
    double *p1 = v1.data(), *p2 = v2.data(), *p3 = v3.data(), *pc = vc.data();
    for (int t = h - 2; t >= 0; --t) {
        gather_row(fwd.row(t), w, ss.gather_base(mu, t), L, interp, wg.data());
        for (std::size_t j = 0; j < L; ++j)
            pc[j] = g * wg[j] + a1 * p1[j] + a2 * p2[j] + a3 * p3[j];
        double* orow = out.row(t);
        for (int x = 0; x < w; ++x)
            orow[x] = sample_clamped(pc, L, ss.scatter_pos(mu, t, x), interp);
        std::swap(p3, p2);
        std::swap(p2, p1);
        std::swap(p1, pc);
    }
    return out;
}

/// Geometric algorithm, x1-aligned plan: shear the whole image into an
/// enlarged canvas (first transformation), run both separable recursive
/// filters on the canvas grid, shear back (second transformation).
inline Image2D geometric_x1(const Image2D& img, const DecompPlan& plan, InterpScheme interp) {
    const int w = img.width(), h = img.height();
    const double mu = plan.mu;
    const SlotSpace ss(w, h, mu);
    const int L = static_cast<int>(ss.len);

    Image2D canvas(L, h);
    for (int t = 0; t < h; ++t)
        gather_row(img.row(t), w, ss.gather_base(mu, t), ss.len, interp, canvas.row(t));

    gauss_rows_inplace(canvas, plan.sigma_axis);
    gauss_cols_inplace(canvas, line_step_sigma(plan));

    Image2D out(w, h);
    for (int t = 0; t < h; ++t) {
        const double* crow = canvas.row(t);
        double* orow = out.row(t);
        for (int x = 0; x < w; ++x)
            orow[x] = sample_clamped(crow, ss.len, ss.scatter_pos(mu, t, x), interp);
    }
    return out;
}

/// 2D tensor-product sampling with clamped (constant-extension) taps.
inline double sample2d(const Image2D& img, double x, double y, InterpScheme interp) {
    const int w = img.width(), h = img.height();
    auto cx = [&](int i) { return std::clamp(i, 0, w - 1); };
    auto cy = [&](int i) { return std::clamp(i, 0, h - 1); };
    const double fx = std::floor(x), fy = std::floor(y);
    const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const double dx = x - fx, dy = y - fy;
    if (interp == InterpScheme::Linear) {
        const double v00 = img.at(cx(ix), cy(iy)), v10 = img.at(cx(ix + 1), cy(iy));
        const double v01 = img.at(cx(ix), cy(iy + 1)), v11 = img.at(cx(ix + 1), cy(iy + 1));
        return (1 - dy) * ((1 - dx) * v00 + dx * v10) + dy * ((1 - dx) * v01 + dx * v11);
    }
    double wx[4], wy[4];
    interp_detail::cubic_weights(dx, wx);
    interp_detail::cubic_weights(dy, wy);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        const int yy = cy(iy - 1 + j);
        double rowacc = 0.0;
        for (int i = 0; i < 4; ++i) rowacc += wx[i] * img.at(cx(ix - 1 + i), yy);
        acc += wy[j] * rowacc;
    }
    return acc;
}

/// Rotate src by ang (degrees) about its center into a dst-sized canvas:
/// moving along dst's +x axis moves along direction (cos ang, sin ang) in src.
inline Image2D rotate_about_center(const Image2D& src, double ang_deg, int dw, int dh,
                                   InterpScheme interp) {
    const double a = deg2rad(ang_deg);
    const double ca = std::cos(a), sa = std::sin(a);
    const double scx = (src.width() - 1) / 2.0, scy = (src.height() - 1) / 2.0;
    const double dcx = (dw - 1) / 2.0, dcy = (dh - 1) / 2.0;
    Image2D dst(dw, dh);
    for (int v = 0; v < dh; ++v) {
        const double py = v - dcy;
        double* drow = dst.row(v);
        for (int u = 0; u < dw; ++u) {
            const double px = u - dcx;
            const double sx = scx + ca * px - sa * py;
            const double sy = scy + sa * px + ca * py;
            drow[u] = sample2d(src, sx, sy, interp);
        }
    }
    return dst;
}

inline Image2D naive_rotation(const Image2D& img, const AnisoKernelSpec& spec,
                              InterpScheme interp) {
    const int w = img.width(), h = img.height();
    const int d = static_cast<int>(std::ceil(std::hypot(double(w), double(h)))) + 2;
    // Canvas frame has the kernel's major axis along its rows.
    Image2D canvas = rotate_about_center(img, spec.theta, d, d, interp);
    gauss_rows_inplace(canvas, spec.sigma1);
    gauss_cols_inplace(canvas, spec.sigma2);
    Image2D back = rotate_about_center(canvas, -spec.theta, w, h, interp);
    return back;
}

inline Image2D dense_oracle(const Image2D& img, const AnisoKernelSpec& spec) {
    spec.validate();
    const int r = static_cast<int>(std::ceil(4.0 * spec.sigma1));
    const int n = 2 * r + 1;
    Image2D k = sample_true_kernel(n, spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) sum += k.data()[i];
    for (std::size_t i = 0; i < k.size(); ++i) k.data()[i] /= sum;

    const int w = img.width(), h = img.height();
    Image2D out(w, h);
    parallel_for(h, [&](std::int64_t yy) {
        const int y = static_cast<int>(yy);
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const int sy = std::clamp(y + j - r, 0, h - 1);
                const double* krow = k.row(j);
                const double* irow = img.row(sy);
                for (int i = 0; i < n; ++i)
                    acc += krow[i] * irow[std::clamp(x + i - r, 0, w - 1)];
            }
            out.at(x, y) = acc;
        }
    });
    return out;
}

} // namespace filter_detail

/// Approximate g_{sigma1,sigma2,theta} * img with constant-extension
/// boundaries, by the selected algorithm.
inline Image2D filter(const Image2D& img, const AnisoKernelSpec& spec,
                      const FilterAlgorithm& algo) {
    spec.validate();
    if (img.width() < 8 || img.height() < 8)
        throw std::invalid_argument("filter: image must be at least 8x8");

    using filter_detail::geometric_x1;
    using filter_detail::hybrid_x1;
    using filter_detail::linebuffer_x1;

    switch (algo.kind) {
        case FilterKind::DenseOracle:
            return filter_detail::dense_oracle(img, spec);
        case FilterKind::NaiveRotation:
            return filter_detail::naive_rotation(img, spec, algo.interp);
        default:
            break;
    }

    const DecompPlan plan = plan_auto(spec, algo.modification, algo.decomp_as_printed);
    auto run_x1 = [&](const Image2D& in, const DecompPlan& p) {
        switch (algo.kind) {
            case FilterKind::Hybrid: return hybrid_x1(in, p, algo.interp);
            case FilterKind::LineBuffer: return linebuffer_x1(in, p, algo.interp);
            case FilterKind::Geometric: return geometric_x1(in, p, algo.interp);
            default: throw std::logic_error("unreachable filter kind");
        }
    };
    if (plan.axis == Axis::X2) {
        DecompPlan p = plan;
        p.axis = Axis::X1;  // run the x1 core on the transposed grid
        return run_x1(img.transposed(), p).transposed();
    }
    return run_x1(img, plan);
}

/// Unit-impulse response of the selected algorithm on an N x N grid.
inline Image2D reconstruct_kernel(const AnisoKernelSpec& spec, const FilterAlgorithm& algo,
                                  int n) {
    if (n < 8.0 * spec.sigma1)
        throw std::invalid_argument("reconstruct_kernel: N must be at least 8*sigma1");
    return filter(unit_impulse(n), spec, algo);
}

/// Documented theoretical per-pixel operation counts (multiplications,
/// additions); informational constants, never measured against compiled code.
inline std::pair<int, int> op_counts(const FilterAlgorithm& algo) {
    if (algo.kind == FilterKind::LineBuffer && algo.interp == InterpScheme::Linear)
        return {21, 16};
    if (algo.kind == FilterKind::Hybrid && algo.interp == InterpScheme::Linear)
        return {17, 14};
    if (algo.kind == FilterKind::Hybrid && algo.interp == InterpScheme::Cubic)
        return {27, 20};
    throw std::invalid_argument("op_counts: no tabulated counts for this algorithm");
}

} // namespace aniso
