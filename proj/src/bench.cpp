#include "trigbf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>

#include "trigbf/errors.hpp"

namespace trigbf {

std::string_view to_string(EngineKind e) {
    switch (e) {
        case EngineKind::Direct: return "direct";
        case EngineKind::Trig: return "trig";
        case EngineKind::Poly: return "poly";
    }
    return "?";
}

std::string_view to_string(SpatialKind k) {
    switch (k) {
        case SpatialKind::Box: return "box";
        case SpatialKind::GaussianRecursive: return "gauss-recursive";
        case SpatialKind::GaussianFIR: return "gauss-fir";
    }
    return "?";
}

std::optional<EngineKind> parse_engine(std::string_view name) {
    for (auto e : {EngineKind::Direct, EngineKind::Trig, EngineKind::Poly}) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

std::optional<SpatialKind> parse_spatial(std::string_view name) {
    for (auto k : {SpatialKind::Box, SpatialKind::GaussianRecursive, SpatialKind::GaussianFIR}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

SpatialSpec spatial_from_sigma(SpatialKind kind, double sigma_s) {
    switch (kind) {
        case SpatialKind::Box: return SpatialSpec::box(static_cast<int>(std::lround(sigma_s)));
        case SpatialKind::GaussianFIR: return SpatialSpec::gaussian_fir(sigma_s);
        case SpatialKind::GaussianRecursive: return SpatialSpec::gaussian_recursive(sigma_s);
    }
    throw ParameterError("unknown spatial kind");
}

int resolved_degree(const EngineChoice& choice) {
    if (choice.degree) return *choice.degree;
    return select_degree(choice.sigma_r, choice.T, DegreeLookup::Table);
}

EngineParams make_engine(const EngineChoice& choice) {
    switch (choice.kind) {
        case EngineKind::Direct: {
            const double sigma = choice.sigma_r;
            if (!(sigma > 0.0)) throw ParameterError("sigma_r must be positive");
            return DirectEngine{[sigma](double s) { return gaussian_eval(sigma, s); }};
        }
        case EngineKind::Trig:
            return TrigEngine{make_trig_kernel(choice.sigma_r, choice.T, resolved_degree(choice))};
        case EngineKind::Poly: {
            const int terms = choice.terms ? *choice.terms : matched_taylor_terms(resolved_degree(choice));
            return PolyEngine{make_taylor_kernel(choice.sigma_r, terms)};
        }
    }
    throw ParameterError("unknown engine");
}

Image synthetic_noise(int width, int height, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::vector<double> samples(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (double& v : samples) v = static_cast<double>(gen() % 256u);
    return Image(width, height, 1, std::move(samples));
}

double median(std::vector<double> values) {
    if (values.empty()) throw ParameterError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

BenchRow bench_point(const Image& img, double sigma_s, double sigma_r, const BenchOptions& opts) {
    if (opts.repetitions < 1) throw ParameterError("repetitions must be at least 1");
    const EngineChoice choice{opts.engine, sigma_r, opts.T, opts.degree, opts.terms};
    const EngineParams engine = make_engine(choice);
    const SpatialSpec spatial = spatial_from_sigma(opts.spatial, sigma_s);

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(opts.repetitions));
    for (int rep = 0; rep < opts.repetitions; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        const Image out = bilateral_filter(img, spatial, engine, nullptr, opts.exec);
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    BenchRow row;
    row.sigma_s = sigma_s;
    row.sigma_r = sigma_r;
    row.degree = opts.engine == EngineKind::Direct ? 0 : resolved_degree(choice);
    if (opts.engine == EngineKind::Poly) row.degree = 2 * (std::get<PolyEngine>(engine).kernel.terms() - 1);
    row.engine = opts.engine;
    row.median_ms = median(std::move(times));
    return row;
}

std::vector<std::pair<double, double>> timing_table_grid() {
    std::vector<std::pair<double, double>> grid;
    for (double ss : {10.0, 100.0}) {
        for (int r = 10; r <= 100; r += 10) grid.emplace_back(ss, static_cast<double>(r));
    }
    return grid;
}

void write_bench_csv(std::ostream& os, std::span<const BenchRow> rows) {
    os << "sigma_s,sigma_r,N,engine,median_ms\n";
    for (const auto& r : rows) {
        os << r.sigma_s << ',' << r.sigma_r << ',' << r.degree << ',' << to_string(r.engine) << ','
           << r.median_ms << '\n';
    }
}

}  // namespace trigbf
