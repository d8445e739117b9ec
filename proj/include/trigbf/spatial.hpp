#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trigbf/image.hpp"

namespace trigbf {

enum class SpatialKind { Box, GaussianRecursive, GaussianFIR };

// Whole-sample reflection: ... c b | a b c ... | b a ...
enum class Boundary { Mirror };

struct SpatialSpec {
    SpatialKind kind = SpatialKind::Box;
    int radius = 0;      // Box
    double sigma = 1.0;  // Gaussian kinds, in pixels
    Boundary boundary = Boundary::Mirror;

    static SpatialSpec box(int radius) { return {SpatialKind::Box, radius, 1.0, Boundary::Mirror}; }
    static SpatialSpec gaussian_fir(double sigma) { return {SpatialKind::GaussianFIR, 0, sigma, Boundary::Mirror}; }
    static SpatialSpec gaussian_recursive(double sigma) {
        return {SpatialKind::GaussianRecursive, 0, sigma, Boundary::Mirror};
    }
};

inline constexpr double kMinRecursiveSigma = 0.5;

// Maps any integer index onto [0, n) by whole-sample reflection. The extended
// signal is periodic with period 2(n-1).
std::ptrdiff_t mirror_index(std::ptrdiff_t i, std::ptrdiff_t n);

void validate(const SpatialSpec& spec);

/// One-dimensional taps of the explicit (FIR) kernel for a spec, centred,
/// of odd length and summing to one.
///
/// Box gives 2r+1 equal taps. Both Gaussian kinds give the discretized
/// Gaussian truncated at +-ceil(4 sigma) and renormalized, which is what the
/// FIR filter convolves with and what the direct bilateral engine uses as
/// its separable spatial weights.
std::vector<double> fir_taps(const SpatialSpec& spec);

// Filters one width*height plane. in and out may not alias.
void filter_plane(std::span<const double> in, std::span<double> out, int width, int height,
                  const SpatialSpec& spec);

Image box_filter(const Image& img, int radius, Boundary boundary = Boundary::Mirror);
Image gaussian_fir(const Image& img, double sigma, Boundary boundary = Boundary::Mirror);
Image gaussian_recursive(const Image& img, double sigma, Boundary boundary = Boundary::Mirror);

// Applies the spec to every channel.
Image spatial_filter(const Image& img, const SpatialSpec& spec);

}  // namespace trigbf
