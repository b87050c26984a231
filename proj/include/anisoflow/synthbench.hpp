#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoflow/anisofilter.hpp"
#include "anisoflow/image.hpp"
#include "anisoflow/io.hpp"
#include "anisoflow/orientation.hpp"
#include "anisoflow/parallel.hpp"

namespace aniso {

/// Sinusoidal fiber-bundle test image of size N x N with ridges in direction
/// theta. The width parameter w sets the fiber radius r = pi*w/2.
struct FiberImageSpec {
    int n;
    double theta;   // degrees
    double w;       // width parameter (pixels)
    bool frequency_scaled = true;

    double fiber_radius() const { return 3.14159265358979323846 * w / 2.0; }
};

/// F(x, y) = sin((x sin(theta) + y cos(theta)) / w) / 2 + 1/2 (frequency-
/// scaled form; the unscaled variant divides the sine's amplitude by w
/// instead), clipped to [0, 1]. The formula's y-axis points up, so with row
/// indices growing downward the phase term is x sin(theta) - row cos(theta);
/// ridges then run along direction (cos theta, sin theta) in (column, row)
/// coordinates, matching the filter kernels' angle convention.
inline Image2D make_fiber_image(const FiberImageSpec& spec) {
    if (spec.n < 8 || !(spec.w > 0.0))
        throw std::invalid_argument("make_fiber_image: need N >= 8 and w > 0");
    const double th = deg2rad(spec.theta);
    const double s = std::sin(th), c = std::cos(th);
    Image2D img(spec.n, spec.n);
    for (int y = 0; y < spec.n; ++y) {
        double* row = img.row(y);
        for (int x = 0; x < spec.n; ++x) {
            const double arg = x * s - y * c;
            const double v = spec.frequency_scaled
                                 ? 0.5 * std::sin(arg / spec.w) + 0.5
                                 : std::sin(arg) / (2.0 * spec.w) + 0.5;
            row[x] = std::clamp(v, 0.0, 1.0);
        }
    }
    return img;
}

/// i.i.d. Uniform[0,1] noise from the deterministic generator.
inline Image2D make_noise(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_noise: N must be positive");
    Rng rng(seed);
    Image2D img(n, n);
    for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = rng.next_uniform();
    return img;
}

/// Substream variant: the noise image depends only on (seed, labels), never
/// on iteration order of the surrounding experiment.
inline Image2D make_noise(int n, std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
    Rng rng(seed, labels);
    Image2D img(n, n);
    for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = rng.next_uniform();
    return img;
}

/// Per-pixel convex combination (1-c)*B + c*F.
inline Image2D blend(const Image2D& b, const Image2D& f, double c) {
    if (!b.same_size(f)) throw std::invalid_argument("blend: dimension mismatch");
    if (!(c >= 0.0) || !(c <= 1.0)) throw std::invalid_argument("blend: c must be in [0,1]");
    Image2D out(b.width(), b.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] = (1.0 - c) * b.data()[i] + c * f.data()[i];
    return out;
}

/// Fiber-core mask: pixels with F strictly above the threshold, restricted to
/// the centered evaluation disk. Disk center at the geometric image center
/// ((N-1)/2, (N-1)/2).
inline BinaryMask fiber_mask(const Image2D& f, double threshold = 0.75, double radius = 206.0) {
    if (f.width() != f.height()) throw std::invalid_argument("fiber_mask: image must be square");
    const int n = f.width();
    const double cx = (n - 1) / 2.0;
    const double r2 = radius * radius;
    BinaryMask m(n, n, false);
    for (int y = 0; y < n; ++y) {
        const double dy = y - cx;
        for (int x = 0; x < n; ++x) {
            const double dx = x - cx;
            if (dx * dx + dy * dy <= r2 && f.at(x, y) > threshold) m.set(x, y, true);
        }
    }
    return m;
}

/// Circular angular distance modulo 180 degrees.
inline double angular_distance(double a, double b) {
    const double d = std::fabs(fold180(a) - fold180(b));
    return std::min(d, 180.0 - d);
}

/// Mean absolute angular error over masked valid pixels.
inline double mae(const OrientationField& est, double truth_theta, const BinaryMask& mask) {
    if (mask.width() != est.angle.width() || mask.height() != est.angle.height())
        throw std::invalid_argument("mae: mask dimension mismatch");
    double acc = 0.0;
    long long n = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y) || !est.valid.get(x, y)) continue;
            acc += angular_distance(est.angle.at(x, y), truth_theta);
            ++n;
        }
    }
    if (n == 0) throw std::invalid_argument("mae: empty mask");
    return acc / static_cast<double>(n);
}

/// Tabular experiment results serialized as CSV.
struct ExperimentReport {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        CsvWriter w(columns);
        for (const auto& r : rows) w.add_row(r);
        return w.to_string();
    }

    void save(const std::string& path) const {
        CsvWriter w(columns);
        for (const auto& r : rows) w.add_row(r);
        w.save(path);
    }
};

// ---------------------------------------------------------------------------
// Kernel-accuracy experiment
// ---------------------------------------------------------------------------

/// Published reference values for the kernel-accuracy table: per (sigma1,
/// sigma2) row, mean and max l2 deviation (in 1e-3) for the five algorithm
/// columns. Used as comparison targets by the acceptance suite.
struct KernelAccuracyRef {
    double sigma1, sigma2;
    // columns: {LineBuffer/Linear, Hybrid/Linear, Hybrid/Cubic,
    //           Hybrid+Mod/Linear, Hybrid+Mod/Cubic}
    double mean[5];
    double max[5];
};

inline const std::vector<KernelAccuracyRef>& kernel_accuracy_reference() {
    static const std::vector<KernelAccuracyRef> t = {
        {2.0, 1.0, {38.9, 29.7, 23.6, 28.0, 25.4}, {60.8, 39.9, 28.2, 30.0, 28.2}},
        {5.0, 2.0, {7.2, 6.2, 5.8, 5.9, 5.7}, {10.6, 7.8, 6.3, 6.5, 6.3}},
        {7.0, 2.0, {5.7, 4.9, 4.6, 4.6, 4.5}, {8.0, 6.0, 5.1, 5.2, 5.1}},
        {7.0, 4.0, {2.8, 2.7, 2.6, 2.7, 2.6}, {2.9, 2.8, 3.1, 2.7, 3.2}},
        {10.0, 0.5, {35.7, 23.1, 14.3, 16.9, 12.0}, {75.7, 60.8, 30.4, 29.0, 18.3}},
        {10.0, 1.25, {9.5, 7.2, 5.9, 5.6, 5.4}, {17.5, 11.4, 8.3, 8.3, 8.3}},
        {10.0, 2.0, {4.5, 3.9, 3.6, 3.6, 3.5}, {7.0, 4.9, 4.1, 4.1, 4.1}},
        {20.0, 0.5, {24.6, 15.8, 9.8, 10.9, 7.7}, {44.0, 37.3, 19.4, 22.6, 12.8}},
        {20.0, 1.25, {6.1, 4.6, 3.9, 3.4, 3.3}, {10.4, 7.6, 5.8, 5.8, 5.8}},
        {20.0, 2.0, {2.9, 2.4, 2.3, 2.2, 2.1}, {4.2, 3.2, 2.8, 2.8, 2.8}},
        {25.0, 0.5, {21.8, 13.9, 8.7, 9.6, 6.6}, {37.9, 31.4, 16.7, 15.7, 11.5}},
        {25.0, 1.25, {5.5, 4.1, 3.4, 2.9, 2.8}, {9.3, 6.6, 5.2, 5.2, 5.1}},
        {25.0, 2.0, {2.5, 2.1, 2.0, 1.8, 1.8}, {3.7, 2.8, 2.4, 2.4, 2.4}},
    };
    return t;
}

/// The five algorithm columns of the kernel-accuracy table, with names.
inline std::vector<std::pair<std::string, FilterAlgorithm>> kernel_accuracy_algorithms() {
    return {
        {"linebuffer/linear", {FilterKind::LineBuffer, InterpScheme::Linear, false, false}},
        {"hybrid/linear", {FilterKind::Hybrid, InterpScheme::Linear, false, false}},
        {"hybrid/cubic", {FilterKind::Hybrid, InterpScheme::Cubic, false, false}},
        {"hybrid+mod/linear", {FilterKind::Hybrid, InterpScheme::Linear, true, false}},
        {"hybrid+mod/cubic", {FilterKind::Hybrid, InterpScheme::Cubic, true, false}},
    };
}

/// Per-angle l2 deviation of the reconstructed kernel from the sampled true
/// kernel.
inline std::vector<double> kernel_error_curve(const AnisoKernelSpec& base,
                                              const FilterAlgorithm& algo, int n,
                                              const std::vector<double>& thetas) {
    std::vector<double> errs(thetas.size());
    parallel_for(static_cast<std::int64_t>(thetas.size()), [&](std::int64_t i) {
        AnisoKernelSpec s = base;
        s.theta = thetas[static_cast<std::size_t>(i)];
        const Image2D rec = reconstruct_kernel(s, algo, n);
        const Image2D truth = sample_true_kernel(n, s);
        errs[static_cast<std::size_t>(i)] = l2_distance(rec, truth);
    });
    return errs;
}

struct KernelAccuracyCell {
    double sigma1, sigma2;
    std::string algorithm;
    double mean_l2, max_l2;  // absolute (not 1e-3) units
};

/// Mean/max-over-angle kernel reconstruction error for each spec x algorithm.
inline std::vector<KernelAccuracyCell> kernel_accuracy_experiment(
    const std::vector<std::pair<double, double>>& specs,
    const std::vector<std::pair<std::string, FilterAlgorithm>>& algos, int n = 512,
    double theta_step = 1.0) {
    std::vector<double> thetas;
    for (double t = 0.0; t < 180.0 - 1e-9; t += theta_step) thetas.push_back(t);
    std::vector<KernelAccuracyCell> cells;
    for (const auto& [s1, s2] : specs) {
        for (const auto& [name, algo] : algos) {
            const auto errs = kernel_error_curve({s1, s2, 0.0}, algo, n, thetas);
            double sum = 0.0, mx = 0.0;
            for (double e : errs) {
                sum += e;
                mx = std::max(mx, e);
            }
            cells.push_back({s1, s2, name, sum / static_cast<double>(errs.size()), mx});
        }
    }
    return cells;
}

inline ExperimentReport kernel_accuracy_report(const std::vector<KernelAccuracyCell>& cells) {
    ExperimentReport r;
    r.columns = {"sigma1", "sigma2", "algorithm", "mean_l2_1e-3", "max_l2_1e-3"};
    for (const auto& c : cells)
        r.rows.push_back({CsvWriter::num(c.sigma1), CsvWriter::num(c.sigma2), c.algorithm,
                          CsvWriter::num(c.mean_l2 * 1e3), CsvWriter::num(c.max_l2 * 1e3)});
    return r;
}

// ---------------------------------------------------------------------------
// Contrast (MAE) experiment
// ---------------------------------------------------------------------------

enum class EstimatorKind { MR, StructureTensor, Hessian };

struct MethodSpec {
    EstimatorKind kind = EstimatorKind::MR;
    FilterAlgorithm algo;           // MR only
    bool median_preprocess = false;  // 3x3 median before estimation
    std::string name() const {
        std::string n;
        switch (kind) {
            case EstimatorKind::MR:
                n = "mr/";
                n += (algo.kind == FilterKind::LineBuffer ? "linebuffer" : "hybrid");
                if (algo.modification) n += "+mod";
                n += (algo.interp == InterpScheme::Cubic ? "/cubic" : "/linear");
                break;
            case EstimatorKind::StructureTensor: n = "tensor"; break;
            case EstimatorKind::Hessian: n = "hessian"; break;
        }
        if (median_preprocess) n += "+median";
        return n;
    }
};

struct ContrastConfig {
    int n = 512;
    double mask_radius = 206.0;
    double mask_threshold = 0.75;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> contrasts = {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0};
    std::vector<double> ws = {1.0, 2.0};
    double theta_step = 5.0;        // fiber-direction grid
    double mr_angle_step = 1.0;     // MR estimator grid
    double mr_sigma1 = 20.0;
    double tensor_rho = 6.0;
    std::vector<MethodSpec> methods;
};

/// Max-over-theta MAE for one (method, w, c, seed) cell. Parameter rules:
/// MR sigma1 = 20, sigma2 = 0.75*w; structure tensor sigma = r = pi*w/2,
/// rho = 6; Hessian sigma = r.
inline double max_mae_cell(const ContrastConfig& cfg, const MethodSpec& method, double w,
                           double c, std::uint64_t seed) {
    double worst = 0.0;
    const double r = FiberImageSpec{cfg.n, 0.0, w}.fiber_radius();
    for (double theta = 0.0; theta < 180.0 - 1e-9; theta += cfg.theta_step) {
        const Image2D fib = make_fiber_image({cfg.n, theta, w, true});
        const BinaryMask mask = fiber_mask(fib, cfg.mask_threshold, cfg.mask_radius);
        Image2D img(1, 1);
        if (c >= 1.0) {
            img = fib;
        } else {
            const Image2D noise =
                make_noise(cfg.n, seed,
                           {static_cast<std::uint64_t>(std::llround(theta * 1000.0)),
                            static_cast<std::uint64_t>(std::llround(c * 1000.0)),
                            static_cast<std::uint64_t>(std::llround(w * 1000.0))});
            img = blend(noise, fib, c);
        }
        if (method.median_preprocess) img = median3x3(img);
        OrientationField field;
        switch (method.kind) {
            case EstimatorKind::MR: {
                MRParams mp{cfg.mr_sigma1, 0.75 * w, default_angle_grid(cfg.mr_angle_step),
                            method.algo, {}, {}};
                field = mr_estimate(img, mp);
                break;
            }
            case EstimatorKind::StructureTensor:
                field = structure_tensor_estimate(img, {std::max(r, 0.5), cfg.tensor_rho});
                break;
            case EstimatorKind::Hessian:
                field = hessian_estimate(img, std::max(r, 0.5));
                break;
        }
        worst = std::max(worst, mae(field, theta, mask));
    }
    return worst;
}

struct ContrastCell {
    std::string method;
    double w, c;
    std::vector<double> per_seed;  // max-over-theta MAE per seed
    double mean = 0.0, stddev = 0.0;
};

inline std::vector<ContrastCell> run_contrast_experiment(const ContrastConfig& cfg) {
    std::vector<ContrastCell> cells;
    for (const auto& m : cfg.methods) {
        for (double w : cfg.ws) {
            for (double c : cfg.contrasts) {
                ContrastCell cell{m.name(), w, c, {}, 0.0, 0.0};
                // c = 1 is noise-free; one evaluation suffices.
                const std::size_t nseeds = c >= 1.0 ? 1 : cfg.seeds.size();
                for (std::size_t i = 0; i < nseeds; ++i)
                    cell.per_seed.push_back(max_mae_cell(cfg, m, w, c, cfg.seeds[i]));
                double sum = 0.0;
                for (double v : cell.per_seed) sum += v;
                cell.mean = sum / static_cast<double>(cell.per_seed.size());
                double var = 0.0;
                for (double v : cell.per_seed) var += (v - cell.mean) * (v - cell.mean);
                cell.stddev = cell.per_seed.size() > 1
                                  ? std::sqrt(var / static_cast<double>(cell.per_seed.size() - 1))
                                  : 0.0;
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

inline ExperimentReport contrast_report(const std::vector<ContrastCell>& cells) {
    ExperimentReport r;
    r.columns = {"method", "w", "c", "seed", "stat", "max_mae_deg"};
    for (const auto& cell : cells) {
        for (std::size_t i = 0; i < cell.per_seed.size(); ++i)
            r.rows.push_back({cell.method, CsvWriter::num(cell.w), CsvWriter::num(cell.c),
                              std::to_string(i), "max_mae", CsvWriter::num(cell.per_seed[i])});
        r.rows.push_back({cell.method, CsvWriter::num(cell.w), CsvWriter::num(cell.c), "", "mean",
                          CsvWriter::num(cell.mean)});
        r.rows.push_back({cell.method, CsvWriter::num(cell.w), CsvWriter::num(cell.c), "", "std",
                          CsvWriter::num(cell.stddev)});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Throughput benchmark
// ---------------------------------------------------------------------------

struct ThroughputResult {
    std::string algorithm;
    int n;
    double mpix_per_s;  // trimmed mean
};

/// Seeded Gaussian-noise image (mean 0.5, std 0.15, clipped to [0,1]).
inline Image2D make_gaussian_noise(int n, std::uint64_t seed) {
    Rng rng(seed);
    Image2D img(n, n);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.data()[i] = std::clamp(0.5 + 0.15 * rng.next_normal(), 0.0, 1.0);
    return img;
}

/// Trimmed-mean throughput (drop the top and bottom trim fraction of the
/// per-repetition times). Timing runs on a single worker.
inline std::vector<ThroughputResult> throughput_benchmark(
    const std::vector<int>& sizes, const std::vector<std::pair<std::string, FilterAlgorithm>>& algos,
    int reps = 50, double trim = 0.10, const AnisoKernelSpec& spec = {10.0, 1.0, 30.0},
    std::uint64_t seed = 12345) {
    if (reps < 10) throw std::invalid_argument("throughput_benchmark: reps must be >= 10");
    const int saved_workers = worker_count();
    worker_count() = 1;
    std::vector<ThroughputResult> out;
    for (int n : sizes) {
        const Image2D img = make_gaussian_noise(n, seed);
        for (const auto& [name, algo] : algos) {
            std::vector<double> times;
            times.reserve(static_cast<std::size_t>(reps));
            volatile double sink = 0.0;
            for (int r = 0; r < reps; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                const Image2D res = filter(img, spec, algo);
                const auto t1 = std::chrono::steady_clock::now();
                sink = sink + res.at(0, 0);
                times.push_back(std::chrono::duration<double>(t1 - t0).count());
            }
            std::sort(times.begin(), times.end());
            const int k = static_cast<int>(std::floor(trim * reps));
            double sum = 0.0;
            int cnt = 0;
            for (int i = k; i < reps - k; ++i) {
                sum += times[static_cast<std::size_t>(i)];
                ++cnt;
            }
            const double mean_t = sum / cnt;
            out.push_back({name, n, static_cast<double>(n) * n / mean_t / 1e6});
        }
    }
    worker_count() = saved_workers;
    return out;
}

inline ExperimentReport throughput_report(const std::vector<ThroughputResult>& res) {
    ExperimentReport r;
    r.columns = {"algorithm", "n", "mpix_per_s"};
    for (const auto& t : res)
        r.rows.push_back({t.algorithm, std::to_string(t.n), CsvWriter::num(t.mpix_per_s)});
    return r;
}

} // namespace aniso
