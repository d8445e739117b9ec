#pragma once

// Brute-force references used only by the tests. None of these go through
// the library's filtering code paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "trigbf/image.hpp"

namespace oracle {

inline int reflect(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

// (2r+1)^2 window average, mirror padding.
inline trigbf::Image box_average(const trigbf::Image& img, int r) {
    const int w = img.width(), h = img.height();
    std::vector<double> out(img.plane_size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) acc += img.at(reflect(x + dx, w), reflect(y + dy, h));
            out[static_cast<std::size_t>(y) * w + x] = acc / ((2.0 * r + 1) * (2.0 * r + 1));
        }
    return trigbf::Image(w, h, 1, std::move(out));
}

// Non-separable 2-D Gaussian, truncated at +-ceil(4 sigma) per axis and
// normalized over the square support.
inline trigbf::Image gaussian_2d(const trigbf::Image& img, double sigma) {
    const int r = static_cast<int>(std::ceil(4.0 * sigma));
    const int w = img.width(), h = img.height();
    double mass = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) mass += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    std::vector<double> out(img.plane_size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx)
                    acc += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) *
                           img.at(reflect(x - dx, w), reflect(y - dy, h));
            out[static_cast<std::size_t>(y) * w + x] = acc / mass;
        }
    return trigbf::Image(w, h, 1, std::move(out));
}

struct TwoPassStats {
    double max_abs, mean_abs, std_dev;
};

inline TwoPassStats two_pass_stats(const trigbf::Image& a, const trigbf::Image& b) {
    const auto sa = a.samples(), sb = b.samples();
    const double n = static_cast<double>(sa.size());
    double mean = 0.0, mean_abs = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        mean += sa[i] - sb[i];
        mean_abs += std::abs(sa[i] - sb[i]);
        max_abs = std::max(max_abs, std::abs(sa[i] - sb[i]));
    }
    mean /= n;
    mean_abs /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) var += (sa[i] - sb[i] - mean) * (sa[i] - sb[i] - mean);
    return {max_abs, mean_abs, std::sqrt(var / n)};
}

inline trigbf::Image random_image(std::mt19937& gen, int w, int h, double lo = 0.0, double hi = 255.0,
                                  bool integral = true) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> s(static_cast<std::size_t>(w) * h);
    for (double& v : s) v = integral ? std::round(dist(gen)) : dist(gen);
    return trigbf::Image(w, h, 1, std::move(s));
}

inline double max_abs_diff(const trigbf::Image& a, const trigbf::Image& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
    return m;
}

}  // namespace oracle
