#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trigbf/bilateral.hpp"

namespace trigbf {

enum class EngineKind { Direct, Trig, Poly };

std::string_view to_string(EngineKind e);
std::string_view to_string(SpatialKind k);
std::optional<EngineKind> parse_engine(std::string_view name);
std::optional<SpatialKind> parse_spatial(std::string_view name);

// Box radius is round(sigma_s); the Gaussian kinds use sigma_s directly.
SpatialSpec spatial_from_sigma(SpatialKind kind, double sigma_s);

// Taylor terms matching the number of distinct cosines of a degree-N kernel.
inline int matched_taylor_terms(int degree) { return degree / 2 + 1; }

struct EngineChoice {
    EngineKind kind = EngineKind::Trig;
    double sigma_r = 80.0;
    double T = 255.0;
    std::optional<int> degree;  // trig; table lookup + formula when unset
    std::optional<int> terms;   // poly; matched to the trig degree when unset
};

// The direct engine uses the exact Gaussian range kernel.
EngineParams make_engine(const EngineChoice& choice);

// Raised-cosine degree the choice resolves to (also used to match poly terms).
int resolved_degree(const EngineChoice& choice);

// Uniform 8-bit noise from a fixed mt19937 stream.
Image synthetic_noise(int width = 720, int height = 540, std::uint32_t seed = 5489u);

double median(std::vector<double> values);

struct BenchRow {
    double sigma_s = 0.0;
    double sigma_r = 0.0;
    int degree = 0;
    EngineKind engine = EngineKind::Trig;
    double median_ms = 0.0;
};

struct BenchOptions {
    EngineKind engine = EngineKind::Trig;
    SpatialKind spatial = SpatialKind::GaussianRecursive;
    double T = 255.0;
    std::optional<int> degree;
    std::optional<int> terms;
    int repetitions = 5;
    ExecOptions exec;
};

// Median wall time of repeated filtering at one parameter point.
BenchRow bench_point(const Image& img, double sigma_s, double sigma_r, const BenchOptions& opts);

// sigma_s in {10, 100} crossed with sigma_r in {10, 20, ..., 100}.
std::vector<std::pair<double, double>> timing_table_grid();

// Header "sigma_s,sigma_r,N,engine,median_ms".
void write_bench_csv(std::ostream& os, std::span<const BenchRow> rows);

}  // namespace trigbf
