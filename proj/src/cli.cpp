#include "trigbf/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>
#include <thread>

#include "CLI11.hpp"
#include "trigbf/errors.hpp"
#include "trigbf/pnm.hpp"

namespace trigbf::cli {

namespace {

namespace fs = std::filesystem;

unsigned thread_count(const RunConfig& cfg) {
    return cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
}

EngineChoice engine_choice(const RunConfig& cfg, EngineKind kind) {
    return EngineChoice{kind, cfg.sigma_r, cfg.T, cfg.degree, cfg.terms};
}

Image load_input(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("an input image is required");
    return read_pnm_file(cfg.input);
}

// Writes text through a temporary sibling, renamed on success.
void write_text_file(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::system_error(errno, std::generic_category(), "cannot create " + tmp.string());
        f << text;
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw std::system_error(errno, std::generic_category(), "write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

void check_range(const Image& img, double T) {
    if (min_sample(img) < 0.0 || max_sample(img) > T) {
        throw UsageError("image samples exceed [0, " + std::to_string(T) + "]; pass a larger --range-max");
    }
}

}  // namespace

void validate(const RunConfig& cfg) {
    if (!(cfg.sigma_s > 0.0) || !std::isfinite(cfg.sigma_s)) throw UsageError("--sigma-s must be positive");
    if (!(cfg.sigma_r > 0.0) || !std::isfinite(cfg.sigma_r)) throw UsageError("--sigma-r must be positive");
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw UsageError("--range-max must be positive");
    if (cfg.repetitions < 1) throw UsageError("--reps must be at least 1");
    if (cfg.degree && *cfg.degree < 0) throw UsageError("--degree must be nonnegative");
    if (cfg.terms && *cfg.terms < 1) throw UsageError("--terms must be at least 1");
    if (cfg.spatial == SpatialKind::GaussianRecursive && cfg.sigma_s < kMinRecursiveSigma &&
        cfg.subcommand != Subcommand::Kernel) {
        throw UsageError("gauss-recursive needs --sigma-s >= 0.5");
    }
    if (cfg.subcommand == Subcommand::Filter && cfg.output.empty()) throw UsageError("filter needs --output");
}

int cmd_filter(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    validate(cfg);
    const Image img = load_input(cfg);
    if (cfg.engine == EngineKind::Trig) check_range(img, cfg.T);
    const EngineChoice choice = engine_choice(cfg, cfg.engine);
    const EngineParams engine = make_engine(choice);
    const SpatialSpec spatial = spatial_from_sigma(cfg.spatial, cfg.sigma_s);

    FilterStats stats;
    const auto start = std::chrono::steady_clock::now();
    const Image result = bilateral_filter(img, spatial, engine, &stats, ExecOptions{cfg.threads});
    const auto stop = std::chrono::steady_clock::now();
    write_pnm_file(cfg.output, result);

    out << "engine=" << to_string(cfg.engine) << " spatial=" << to_string(cfg.spatial);
    if (cfg.engine == EngineKind::Trig) out << " N=" << resolved_degree(choice);
    if (cfg.engine == EngineKind::Poly) out << " terms=" << std::get<PolyEngine>(engine).kernel.terms();
    out << " passes=" << stats.spatial_passes << " guarded=" << stats.guarded_pixels
        << " wall_ms=" << std::chrono::duration<double, std::milli>(stop - start).count()
        << " threads=" << thread_count(cfg) << '\n';
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    const Image img = load_input(cfg);
    check_range(img, cfg.T);
    // Without an explicit choice the fast engines share the direct engine's taps.
    const SpatialKind kind = cfg.spatial_given ? cfg.spatial : SpatialKind::GaussianFIR;
    const SpatialSpec spatial = spatial_from_sigma(kind, cfg.sigma_s);
    const ExecOptions exec{cfg.threads};

    const EngineChoice trig_choice = engine_choice(cfg, EngineKind::Trig);
    const TrigKernel kernel = std::get<TrigEngine>(make_engine(trig_choice)).kernel;
    const PolyEngine poly = std::get<PolyEngine>(make_engine(engine_choice(cfg, EngineKind::Poly)));

    const Image reference = bilateral_filter(img, spatial, make_engine(engine_choice(cfg, EngineKind::Direct)),
                                             nullptr, exec);
    const Image exact_reference = bilateral_filter(img, spatial, DirectEngine{kernel}, nullptr, exec);
    const Image trig = bilateral_filter(img, spatial, TrigEngine{kernel}, nullptr, exec);
    const Image polyout = bilateral_filter(img, spatial, poly, nullptr, exec);

    const ErrorStats trig_err = error_stats(trig, reference);
    const ErrorStats poly_err = error_stats(polyout, reference);
    const ErrorStats exact_err = error_stats(trig, exact_reference);

    std::ostringstream table;
    table.precision(10);
    table << "engine,reference,max_abs,mean_abs,std_dev\n";
    auto row = [&](const char* engine, const char* ref, const ErrorStats& s) {
        table << engine << ',' << ref << ',' << s.max_abs << ',' << s.mean_abs << ',' << s.std_dev << '\n';
    };
    row("trig", "direct-gaussian", trig_err);
    row("poly", "direct-gaussian", poly_err);
    row("trig", "direct-raised-cosine", exact_err);

    out << "N=" << kernel.N << " cosine_terms=" << kernel.N / 2 + 1 << " poly_terms=" << poly.kernel.terms()
        << " spatial=" << to_string(kind) << '\n'
        << table.str();
    if (!cfg.csv.empty()) write_text_file(cfg.csv, table.str());

    const bool ordered = trig_err.std_dev <= poly_err.std_dev;
    out << "ordering trig_std_dev <= poly_std_dev: " << (ordered ? "yes" : "no") << '\n';
    if (!ordered) {
        err << "compare: trig error exceeds polynomial error\n";
        return kExitOrdering;
    }
    return kExitOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    const Image img = cfg.input.empty() ? synthetic_noise() : read_pnm_file(cfg.input);
    if (cfg.engine == EngineKind::Trig) check_range(img, cfg.T);

    BenchOptions opts;
    opts.engine = cfg.engine;
    opts.spatial = cfg.spatial;
    opts.T = cfg.T;
    opts.degree = cfg.degree;
    opts.terms = cfg.terms;
    opts.repetitions = cfg.repetitions;
    opts.exec = ExecOptions{cfg.threads};

    std::vector<std::pair<double, double>> points;
    if (cfg.sigma_s_given || cfg.sigma_r_given) {
        points.emplace_back(cfg.sigma_s, cfg.sigma_r);
    } else if (cfg.engine == EngineKind::Direct) {
        for (double ss : {3.0, 5.0, 10.0}) points.emplace_back(ss, cfg.sigma_r);
    } else {
        points = timing_table_grid();
    }

    err << "bench: " << img.width() << "x" << img.height() << "x" << img.channels()
        << " engine=" << to_string(cfg.engine) << " spatial=" << to_string(cfg.spatial)
        << " reps=" << cfg.repetitions << " threads=" << thread_count(cfg) << '\n';

    std::vector<BenchRow> rows;
    for (const auto& [ss, sr] : points) rows.push_back(bench_point(img, ss, sr, opts));

    std::ostringstream csv;
    write_bench_csv(csv, rows);
    if (cfg.csv.empty()) {
        out << csv.str();
    } else {
        write_text_file(cfg.csv, csv.str());
    }
    return kExitOk;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    validate(cfg);
    const EngineChoice choice = engine_choice(cfg, EngineKind::Trig);
    KernelCurveSpec spec;
    spec.T = cfg.T;
    spec.sigma = cfg.sigma_r;
    spec.trig = std::get<TrigEngine>(make_engine(choice)).kernel;
    spec.taylor = std::get<PolyEngine>(make_engine(engine_choice(cfg, EngineKind::Poly))).kernel;
    spec.raw_degrees = {1, 2, 3, 4, 5};
    spec.grid_points = 2 * static_cast<int>(std::ceil(cfg.T)) + 1;

    std::ostringstream csv;
    write_kernel_curves(csv, spec);
    const std::string& path = !cfg.csv.empty() ? cfg.csv : cfg.output;
    if (path.empty()) {
        out << csv.str();
    } else {
        write_text_file(path, csv.str());
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constant-time bilateral filtering with raised-cosine range kernels", "trigbf"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string engine_name = "trig";
    std::string spatial_name = "gauss-recursive";
    int degree = -1;
    int terms = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--sigma-s", cfg.sigma_s, "spatial sigma in pixels (box: radius = round(sigma))");
        sub->add_option("--sigma-r", cfg.sigma_r, "range sigma in intensity units");
        sub->add_option("--range-max", cfg.T, "upper bound T of the intensity range [0, T]");
        sub->add_option("--engine", engine_name, "direct | trig | poly");
        sub->add_option("--spatial", spatial_name, "box | gauss-recursive | gauss-fir");
        sub->add_option("--degree", degree, "raised-cosine degree override");
        sub->add_option("--terms", terms, "Taylor terms for the poly engine");
        sub->add_option("--reps", cfg.repetitions, "benchmark repetitions");
        sub->add_option("--threads", cfg.threads, "worker threads (0: all hardware threads)");
        sub->add_option("--output", cfg.output, "output path");
        sub->add_option("--csv", cfg.csv, "CSV output path");
    };

    auto* filter = app.add_subcommand("filter", "filter a PGM/PPM image");
    auto* compare = app.add_subcommand("compare", "compare fast engines against the direct filter");
    auto* bench = app.add_subcommand("bench", "time engines over a parameter grid");
    auto* kernel = app.add_subcommand("kernel", "write range kernel curves as CSV");
    for (auto* sub : {filter, compare, bench, kernel}) add_common(sub);
    filter->add_option("input", cfg.input, "input PNM")->required();
    compare->add_option("input", cfg.input, "input PNM")->required();
    bench->add_option("input", cfg.input, "input PNM (default: synthetic 720x540 noise)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* used = app.get_subcommands().front();
    cfg.subcommand = used == filter    ? Subcommand::Filter
                     : used == compare ? Subcommand::Compare
                     : used == bench   ? Subcommand::Bench
                                       : Subcommand::Kernel;
    cfg.sigma_s_given = used->count("--sigma-s") > 0;
    cfg.sigma_r_given = used->count("--sigma-r") > 0;
    cfg.spatial_given = used->count("--spatial") > 0;

    try {
        const auto engine = parse_engine(engine_name);
        if (!engine) throw UsageError("unknown engine '" + engine_name + "'");
        const auto spatial = parse_spatial(spatial_name);
        if (!spatial) throw UsageError("unknown spatial filter '" + spatial_name + "'");
        cfg.engine = *engine;
        cfg.spatial = *spatial;
        if (used->count("--degree")) cfg.degree = degree;
        if (used->count("--terms")) cfg.terms = terms;

        switch (cfg.subcommand) {
            case Subcommand::Filter: return cmd_filter(cfg, out, err);
            case Subcommand::Compare: return cmd_compare(cfg, out, err);
            case Subcommand::Bench: return cmd_bench(cfg, out, err);
            case Subcommand::Kernel: return cmd_kernel(cfg, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::system_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace trigbf::cli
