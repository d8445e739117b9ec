#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "trigbf/image.hpp"
#include "trigbf/range_kernel.hpp"
#include "trigbf/spatial.hpp"

namespace trigbf {

// Pixels whose normalization falls below this keep their input value.
inline constexpr double kEtaFloor = 1e-12;

struct FilterStats {
    std::size_t spatial_passes = 0;  // spatial filtering passes over auxiliary images
    std::size_t guarded_pixels = 0;  // pixels passed through by the normalization guard

    FilterStats& operator+=(const FilterStats& o) {
        spatial_passes += o.spatial_passes;
        guarded_pixels += o.guarded_pixels;
        return *this;
    }
};

struct ExecOptions {
    unsigned threads = 0;  // 0: one per hardware thread
};

/// Auxiliary images of one distinct nonnegative frequency nu of a raised
/// cosine: cos(nu f), sin(nu f), f cos(nu f) and f sin(nu f).
///
/// weight is the kernel coefficient for nu = 0 and twice the coefficient of
/// the +-nu pair otherwise. At nu = 0 the cosine image is constant 1 and the
/// sine images vanish, so only f_cos (= f) needs filtering.
struct FrequencyTerm {
    double nu = 0.0;
    double weight = 0.0;
    Image cos_image;
    Image sin_image;
    Image f_cos_image;
    Image f_sin_image;

    std::size_t filtering_passes() const { return nu == 0.0 ? 1 : 4; }
};

struct AuxiliaryImageSet {
    std::vector<FrequencyTerm> terms;  // increasing nu

    // 2(N+1) for odd N, 2(N+1) - 1 for even N.
    std::size_t filtering_passes() const;
};

AuxiliaryImageSet build_auxiliary_images(const Image& img, const TrigKernel& k);

// Powers f^1 .. f^highest of a single-channel image, unnormalized.
std::vector<Image> moment_images(const Image& img, int highest);

/// Brute-force bilateral filter.
///
/// Loops over the full discrete support of the spatial kernel (the taps of
/// fir_taps, so a recursive Gaussian spec is evaluated with its FIR
/// counterpart) with mirror boundaries and divides the weighted sum by the
/// accumulated normalization. Single-channel only.
Image bilateral_direct(const Image& img, const SpatialSpec& spatial, const RangeFunction& range,
                       FilterStats* stats = nullptr, const ExecOptions& exec = {});

/// Constant-time bilateral filter with a raised-cosine range kernel.
///
/// Every auxiliary image is smoothed by the spatial filter; the output is
///   sum_nu w_nu [cos(nu f) avg(f cos) + sin(nu f) avg(f sin)]
///   -------------------------------------------------------
///   sum_nu w_nu [cos(nu f) avg(cos)   + sin(nu f) avg(sin)]
/// accumulated in increasing nu. Samples must lie in [0, k.T].
Image bilateral_trig(const Image& img, const SpatialSpec& spatial, const TrigKernel& k,
                     FilterStats* stats = nullptr, const ExecOptions& exec = {});

/// Constant-time bilateral filter with an even polynomial range kernel,
/// expanded binomially into spatial averages of the moment images
/// f^1 .. f^(2K-1). Intensities are scaled by max|f| internally. Pixels with
/// a nonpositive normalization are passed through.
Image bilateral_poly(const Image& img, const SpatialSpec& spatial, const PolyKernel& p,
                     FilterStats* stats = nullptr, const ExecOptions& exec = {});

struct DirectEngine {
    RangeFunction range;
};
struct TrigEngine {
    TrigKernel kernel;
};
struct PolyEngine {
    PolyKernel kernel;
};
using EngineParams = std::variant<DirectEngine, TrigEngine, PolyEngine>;

// Runs the engine on each channel independently; accepts 1 or 3 channels.
Image bilateral_filter(const Image& img, const SpatialSpec& spatial, const EngineParams& engine,
                       FilterStats* stats = nullptr, const ExecOptions& exec = {});

// Three-channel variant of bilateral_filter.
Image bilateral_color(const Image& img, const SpatialSpec& spatial, const EngineParams& engine,
                      FilterStats* stats = nullptr, const ExecOptions& exec = {});

}  // namespace trigbf
