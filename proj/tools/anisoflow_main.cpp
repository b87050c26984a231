// anisoflow: anisotropic Gaussian filtering, fiber-orientation estimation,
// segmentation, and the accompanying benchmark/reproduction jobs.
//
// Exit codes: 0 success, 1 usage error, 2 data/runtime error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anisoflow/anisoflow.hpp"

namespace {

constexpr const char* kVersion = "anisoflow 1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

aniso::FilterAlgorithm make_algo(const std::string& algo, const std::string& interp, bool mod,
                                 bool as_printed) {
    aniso::FilterAlgorithm a;
    if (algo == "naive") a.kind = aniso::FilterKind::NaiveRotation;
    else if (algo == "geometric") a.kind = aniso::FilterKind::Geometric;
    else if (algo == "linebuffer") a.kind = aniso::FilterKind::LineBuffer;
    else if (algo == "hybrid") a.kind = aniso::FilterKind::Hybrid;
    else if (algo == "oracle") a.kind = aniso::FilterKind::DenseOracle;
    else throw UsageError("unknown --algo '" + algo + "'");
    if (interp == "linear") a.interp = aniso::InterpScheme::Linear;
    else if (interp == "cubic") a.interp = aniso::InterpScheme::Cubic;
    else throw UsageError("unknown --interp '" + interp + "'");
    a.modification = mod;
    a.decomp_as_printed = as_printed;
    return a;
}

aniso::Image2D load_image(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".raw") == 0)
        return aniso::read_float_raw(path);
    return aniso::read_pgm(path);
}

void store_image(const aniso::Image2D& img, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".raw") == 0)
        aniso::write_float_raw(img, path);
    else
        aniso::write_pgm(img, path);
}

std::vector<int> parse_sizes(const std::string& s) {
    // Either comma-separated values or lo:hi:count.
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        int lo = 0, hi = 0, cnt = 0;
        if (std::sscanf(s.c_str(), "%d:%d:%d", &lo, &hi, &cnt) != 3 || lo < 8 || hi < lo ||
            cnt < 1)
            throw UsageError("--sizes expects lo:hi:count or a comma-separated list");
        for (int i = 0; i < cnt; ++i) {
            const double f = cnt == 1 ? 0.0 : static_cast<double>(i) / (cnt - 1);
            out.push_back(static_cast<int>(lo + f * (hi - lo) + 0.5));
        }
        return out;
    }
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) {
        const int v = std::stoi(tok);
        if (v < 8) throw UsageError("--sizes values must be >= 8");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--sizes empty");
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw UsageError("empty numeric list");
    return out;
}

aniso::ContrastConfig desk_or_full_contrast_config(bool desk) {
    aniso::ContrastConfig cfg;
    if (desk) {
        cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        cfg.theta_step = 5.0;
        cfg.mr_angle_step = 5.0;
    } else {
        cfg.seeds.clear();
        for (std::uint64_t i = 1; i <= 50; ++i) cfg.seeds.push_back(i);
        cfg.theta_step = 1.0;
        cfg.mr_angle_step = 1.0;
    }
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"Anisotropic Gaussian filtering toolkit"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "flat key=value configuration file; flags override");
    app.require_subcommand(0, 1);

    // Common option storage.
    double sigma1 = 10.0, sigma2 = 1.0, theta = 0.0;
    std::string algo = "hybrid", interp = "linear";
    bool mod = false, as_printed = false;
    std::string in_path, out_path;

    auto add_filter_opts = [&](CLI::App* c, bool with_theta) {
        c->add_option("--sigma1", sigma1, "major-axis standard deviation (pixels)");
        c->add_option("--sigma2", sigma2, "minor-axis standard deviation (pixels)");
        if (with_theta) c->add_option("--theta", theta, "kernel angle (degrees)");
        c->add_option("--algo", algo, "naive|geometric|linebuffer|hybrid|oracle");
        c->add_option("--interp", interp, "linear|cubic");
        c->add_flag("--mod,!--no-mod", mod, "major-axis modification");
        c->add_flag("--decomp-as-printed", as_printed,
                    "use the published sigma_x formula (comparison only)");
    };

    // ---- filter ----
    auto* cf = app.add_subcommand("filter", "apply one anisotropic Gaussian filter");
    add_filter_opts(cf, true);
    cf->add_option("--in", in_path, "input image (.pgm or .raw)")->required();
    cf->add_option("--out", out_path, "output image (.pgm or .raw)")->required();

    // ---- estimate ----
    auto* ce = app.add_subcommand("estimate", "per-pixel fiber-direction estimation");
    std::string method = "mr";
    double radius = 0.0, rho = 6.0, angles_step = 1.0;
    std::string out_angle, out_response, out_color, out_hist;
    ce->add_option("--method", method, "mr|tensor|hessian");
    add_filter_opts(ce, false);
    ce->add_option("--radius", radius, "fiber radius r (pixels); sets defaults per method");
    ce->add_option("--rho", rho, "structure-tensor smoothing rho");
    ce->add_option("--angles-step", angles_step, "MR angle grid step (degrees)");
    ce->add_option("--in", in_path)->required();
    ce->add_option("--out-angle", out_angle, "angle map, float-raw (degrees)");
    ce->add_option("--out-response", out_response, "response map (.pgm or .raw)");
    ce->add_option("--out-color", out_color, "color-coded angle map (.ppm)");
    ce->add_option("--histogram", out_hist, "angle histogram CSV (bin_start, count)");
    double hist_bin = 1.0;
    ce->add_option("--histogram-bin", hist_bin, "histogram bin width (degrees)");

    // ---- segment ----
    auto* cs = app.add_subcommand("segment", "binarize the maximal-response image");
    double niblack_k = 0.6;
    int min_size = 100, erode = 2;
    std::string out_mask;
    add_filter_opts(cs, false);
    cs->add_option("--niblack-k", niblack_k, "Niblack k parameter");
    cs->add_option("--min-size", min_size, "minimum surviving component size (pixels)");
    cs->add_option("--erode", erode, "square erosion side");
    cs->add_option("--angles-step", angles_step, "MR angle grid step (degrees)");
    cs->add_option("--in", in_path)->required();
    cs->add_option("--out-mask", out_mask, "binary mask PGM (0/255)")->required();

    // ---- colorize ----
    auto* cc = app.add_subcommand("colorize", "render an angle map as a color image");
    std::string in_angle, in_response;
    cc->add_option("--in-angle", in_angle, "angle map, float-raw (degrees)")->required();
    cc->add_option("--in-response", in_response, "response map (.pgm or .raw)");
    cc->add_option("--out", out_path, "output .ppm")->required();

    // ---- bench ----
    auto* cb = app.add_subcommand("bench", "benchmarks");
    cb->require_subcommand(1);

    auto* cbk = cb->add_subcommand("kernel-accuracy", "kernel reconstruction error sweep");
    bool table2 = false;
    std::string out_csv, out_curve;
    double theta_step = 1.0;
    int rec_n = 512;
    cbk->add_flag("--table2", table2, "use the published 13-row (sigma1, sigma2) set");
    cbk->add_option("--sigma1", sigma1);
    cbk->add_option("--sigma2", sigma2);
    cbk->add_option("--theta-step", theta_step, "angle sweep step (degrees)");
    cbk->add_option("--size", rec_n, "reconstruction grid size N");
    cbk->add_option("--out", out_csv, "summary CSV")->required();
    cbk->add_option("--out-curve", out_curve, "per-angle error-curve CSV");

    auto* cbt = cb->add_subcommand("throughput", "trimmed-mean throughput");
    std::string sizes_arg = "512,1024";
    int reps = 50;
    double trim = 0.10;
    cbt->add_option("--sizes", sizes_arg, "comma list or lo:hi:count");
    cbt->add_option("--reps", reps, "repetitions per size (>= 10)");
    cbt->add_option("--trim", trim, "trim fraction per tail");
    cbt->add_option("--theta", theta, "filter angle (degrees)");
    cbt->add_option("--out", out_csv)->required();

    auto* cbs = cb->add_subcommand("synthetic", "contrast-sweep MAE experiment");
    std::string contrasts_arg, ws_arg = "1,2", methods_arg = "mr-hybrid-linear";
    int seeds = 10;
    bool median_on = false, desk = true;
    cbs->add_option("--seeds", seeds, "number of noise seeds");
    cbs->add_option("--contrasts", contrasts_arg, "comma-separated contrast values");
    cbs->add_option("--w", ws_arg, "comma-separated fiber width parameters");
    cbs->add_option("--theta-step", theta_step, "fiber-direction grid step");
    double mr_step = 0.0;
    cbs->add_option("--mr-angles-step", mr_step, "MR estimator grid step (default = theta step)");
    cbs->add_option("--methods", methods_arg,
                    "comma list of mr-<algo>[-mod]-<interp> | tensor | hessian");
    cbs->add_flag("--median,!--no-median", median_on, "3x3 median preprocessing");
    cbs->add_option("--out", out_csv)->required();
    (void)desk;

    // ---- reproduce ----
    auto* cr = app.add_subcommand("reproduce", "rebuild one published experiment");
    std::string section;
    bool desk_scale = false;
    std::string out_dir = ".";
    cr->add_option("section", section, "table2|fig2a|fig3b|fig4|fig6")->required();
    cr->add_flag("--desk-scale", desk_scale, "reduced protocol: 10 seeds, 5 degree steps");
    cr->add_option("--out-dir", out_dir, "output directory for report files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }

    const aniso::FilterAlgorithm falgo = make_algo(algo, interp, mod, as_printed);

    if (cf->parsed()) {
        const aniso::Image2D img = load_image(in_path);
        const aniso::Image2D out = aniso::filter(img, {sigma1, sigma2, theta}, falgo);
        store_image(out, out_path);
        return 0;
    }

    if (ce->parsed()) {
        const aniso::Image2D img = load_image(in_path);
        aniso::OrientationField field;
        if (method == "mr") {
            aniso::MRParams p{sigma1, sigma2, aniso::default_angle_grid(angles_step), falgo,
                              {}, {}};
            if (radius > 0.0) {
                p.fiber_radius = radius;
                if (!ce->count("--sigma2")) p.sigma2 = 0.0;  // derive r/2
            }
            field = aniso::mr_estimate(img, aniso::resolve_mr_params(p));
        } else if (method == "tensor") {
            const double s = radius > 0.0 ? radius : sigma1;
            field = aniso::structure_tensor_estimate(img, {std::max(s, 0.5), rho});
        } else if (method == "hessian") {
            const double s = radius > 0.0 ? radius : sigma1;
            field = aniso::hessian_estimate(img, std::max(s, 0.5));
        } else {
            throw UsageError("unknown --method '" + method + "'");
        }
        if (!out_angle.empty()) aniso::write_float_raw(field.angle, out_angle);
        if (!out_response.empty()) store_image(field.response, out_response);
        if (!out_color.empty()) aniso::write_ppm(aniso::colorize(field), out_color);
        if (!out_hist.empty()) {
            aniso::BinaryMask all(img.width(), img.height(), true);
            const auto counts = aniso::angle_histogram(field, all, hist_bin);
            aniso::CsvWriter w({"bin_start_deg", "count"});
            for (std::size_t i = 0; i < counts.size(); ++i)
                w.add_row({aniso::CsvWriter::num(i * hist_bin), std::to_string(counts[i])});
            w.save(out_hist);
        }
        return 0;
    }

    if (cs->parsed()) {
        const aniso::Image2D img = load_image(in_path);
        aniso::MRParams p{sigma1, sigma2, aniso::default_angle_grid(angles_step), falgo, {}, {}};
        const aniso::BinaryMask m =
            aniso::segment_pipeline(img, p, niblack_k, erode, min_size);
        aniso::Image2D mi(m.width(), m.height(), 0.0);
        for (int y = 0; y < m.height(); ++y)
            for (int x = 0; x < m.width(); ++x)
                if (m.get(x, y)) mi.at(x, y) = 1.0;
        aniso::write_pgm(mi, out_mask);
        return 0;
    }

    if (cc->parsed()) {
        const aniso::Image2D angle = aniso::read_float_raw(in_angle);
        aniso::OrientationField field{angle, aniso::Image2D(angle.width(), angle.height(), 1.0),
                                      aniso::BinaryMask(angle.width(), angle.height(), true)};
        if (!in_response.empty()) {
            field.response = load_image(in_response);
            if (!field.response.same_size(angle))
                throw aniso::IoError("colorize: response/angle dimension mismatch");
        }
        aniso::write_ppm(aniso::colorize(field), out_path);
        return 0;
    }

    if (cbk->parsed()) {
        std::vector<std::pair<double, double>> specs;
        if (table2)
            for (const auto& r : aniso::kernel_accuracy_reference())
                specs.emplace_back(r.sigma1, r.sigma2);
        else
            specs.emplace_back(sigma1, sigma2);
        const auto cells =
            aniso::kernel_accuracy_experiment(specs, aniso::kernel_accuracy_algorithms(), rec_n,
                                              theta_step);
        aniso::kernel_accuracy_report(cells).save(out_csv);
        if (!out_curve.empty()) {
            std::vector<double> thetas;
            for (double t = 0.0; t < 180.0 - 1e-9; t += theta_step) thetas.push_back(t);
            aniso::CsvWriter w({"algorithm", "theta_deg", "l2_1e-3"});
            for (const auto& [name, a] : aniso::kernel_accuracy_algorithms()) {
                const auto errs =
                    aniso::kernel_error_curve({specs[0].first, specs[0].second, 0.0}, a, rec_n,
                                              thetas);
                for (std::size_t i = 0; i < thetas.size(); ++i)
                    w.add_row({name, aniso::CsvWriter::num(thetas[i]),
                               aniso::CsvWriter::num(errs[i] * 1e3)});
            }
            w.save(out_curve);
        }
        return 0;
    }

    if (cbt->parsed()) {
        const std::vector<int> sizes = parse_sizes(sizes_arg);
        std::vector<std::pair<std::string, aniso::FilterAlgorithm>> algos = {
            {"linebuffer/linear",
             {aniso::FilterKind::LineBuffer, aniso::InterpScheme::Linear, false, false}},
            {"hybrid/linear",
             {aniso::FilterKind::Hybrid, aniso::InterpScheme::Linear, false, false}},
            {"hybrid/cubic",
             {aniso::FilterKind::Hybrid, aniso::InterpScheme::Cubic, false, false}},
        };
        const auto res = aniso::throughput_benchmark(sizes, algos, reps, trim,
                                                     {sigma1, sigma2, theta});
        aniso::throughput_report(res).save(out_csv);
        return 0;
    }

    if (cbs->parsed()) {
        aniso::ContrastConfig cfg;
        cfg.seeds.clear();
        for (int i = 1; i <= seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
        if (!contrasts_arg.empty()) cfg.contrasts = parse_doubles(contrasts_arg);
        cfg.ws = parse_doubles(ws_arg);
        cfg.theta_step = theta_step;
        cfg.mr_angle_step = mr_step > 0.0 ? mr_step : theta_step;
        std::string tok;
        std::istringstream ms(methods_arg);
        while (std::getline(ms, tok, ',')) {
            aniso::MethodSpec m;
            m.median_preprocess = median_on;
            if (tok == "tensor") m.kind = aniso::EstimatorKind::StructureTensor;
            else if (tok == "hessian") m.kind = aniso::EstimatorKind::Hessian;
            else if (tok.rfind("mr-", 0) == 0) {
                m.kind = aniso::EstimatorKind::MR;
                std::string rest = tok.substr(3);  // e.g. hybrid-mod-linear
                const bool has_mod = rest.find("-mod") != std::string::npos;
                if (has_mod) rest.erase(rest.find("-mod"), 4);
                const auto dash = rest.find('-');
                if (dash == std::string::npos)
                    throw UsageError("bad method '" + tok + "'");
                m.algo = make_algo(rest.substr(0, dash), rest.substr(dash + 1), has_mod, false);
            } else {
                throw UsageError("bad method '" + tok + "'");
            }
            cfg.methods.push_back(m);
        }
        if (cfg.methods.empty()) throw UsageError("--methods empty");
        aniso::contrast_report(aniso::run_contrast_experiment(cfg)).save(out_csv);
        return 0;
    }

    if (cr->parsed()) {
        const std::string prefix = out_dir + "/";
        if (section == "table2") {
            std::vector<std::pair<double, double>> specs;
            for (const auto& r : aniso::kernel_accuracy_reference())
                specs.emplace_back(r.sigma1, r.sigma2);
            const double step = desk_scale ? 5.0 : 1.0;
            const auto cells = aniso::kernel_accuracy_experiment(
                specs, aniso::kernel_accuracy_algorithms(), 512, step);
            aniso::kernel_accuracy_report(cells).save(prefix + "t2.csv");
        } else if (section == "fig2a") {
            const double step = desk_scale ? 5.0 : 1.0;
            std::vector<double> thetas;
            for (double t = 0.0; t < 180.0 - 1e-9; t += step) thetas.push_back(t);
            aniso::CsvWriter w({"algorithm", "theta_deg", "l2_1e-3"});
            for (const auto& [name, a] : aniso::kernel_accuracy_algorithms()) {
                const auto errs = aniso::kernel_error_curve({25.0, 2.0, 0.0}, a, 512, thetas);
                for (std::size_t i = 0; i < thetas.size(); ++i)
                    w.add_row({name, aniso::CsvWriter::num(thetas[i]),
                               aniso::CsvWriter::num(errs[i] * 1e3)});
            }
            w.save(prefix + "fig2a.csv");
        } else if (section == "fig3b") {
            const std::vector<int> sizes =
                desk_scale ? std::vector<int>{256, 512, 1024}
                           : parse_sizes("100:4990:30");
            std::vector<std::pair<std::string, aniso::FilterAlgorithm>> algos = {
                {"linebuffer/linear",
                 {aniso::FilterKind::LineBuffer, aniso::InterpScheme::Linear, false, false}},
                {"hybrid/linear",
                 {aniso::FilterKind::Hybrid, aniso::InterpScheme::Linear, false, false}},
                {"hybrid/cubic",
                 {aniso::FilterKind::Hybrid, aniso::InterpScheme::Cubic, false, false}},
            };
            const int r = desk_scale ? 10 : 50;
            aniso::throughput_report(aniso::throughput_benchmark(sizes, algos, r))
                .save(prefix + "fig3b.csv");
        } else if (section == "fig4") {
            aniso::ContrastConfig cfg = desk_or_full_contrast_config(desk_scale);
            cfg.methods = {
                {aniso::EstimatorKind::MR,
                 {aniso::FilterKind::LineBuffer, aniso::InterpScheme::Linear, false, false},
                 false},
                {aniso::EstimatorKind::MR,
                 {aniso::FilterKind::Hybrid, aniso::InterpScheme::Linear, true, false}, false},
                {aniso::EstimatorKind::MR,
                 {aniso::FilterKind::Hybrid, aniso::InterpScheme::Cubic, true, false}, false},
                {aniso::EstimatorKind::StructureTensor, {}, false},
            };
            aniso::contrast_report(aniso::run_contrast_experiment(cfg))
                .save(prefix + "fig4.csv");
        } else if (section == "fig6") {
            aniso::ContrastConfig cfg = desk_or_full_contrast_config(desk_scale);
            cfg.methods = {
                {aniso::EstimatorKind::MR,
                 {aniso::FilterKind::Hybrid, aniso::InterpScheme::Linear, true, false}, true},
                {aniso::EstimatorKind::MR,
                 {aniso::FilterKind::Hybrid, aniso::InterpScheme::Linear, true, false}, false},
                {aniso::EstimatorKind::Hessian, {}, false},
                {aniso::EstimatorKind::Hessian, {}, true},
            };
            aniso::contrast_report(aniso::run_contrast_experiment(cfg))
                .save(prefix + "fig6.csv");
        } else {
            throw UsageError("unknown reproduce section '" + section + "'");
        }
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
