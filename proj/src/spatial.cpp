#include "trigbf/spatial.hpp"

#include <array>
#include <complex>
#include <cmath>
#include <functional>
#include <string>

#include "trigbf/errors.hpp"

namespace trigbf {

namespace {

// Filters every column of a row-major width x height block. Running down the
// columns keeps the inner loop over x contiguous; rows are handled by
// transposing first.
using ColumnFilter = std::function<void(const double* src, double* dst, int width, int height)>;

std::ptrdiff_t floor_div(std::ptrdiff_t a, std::ptrdiff_t b) {
    std::ptrdiff_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Grow-only per-thread buffers. Large fresh allocations are dominated by
// page faults, and the engines filter hundreds of planes of the same size.
enum ScratchSlot { kPassA, kPassB, kColumnWork, kSlotCount };

double* scratch(ScratchSlot slot, std::size_t n) {
    thread_local std::array<std::vector<double>, kSlotCount> buffers;
    auto& buf = buffers[slot];
    if (buf.size() < n) buf.resize(n);
    return buf.data();
}

void transpose(const double* src, double* dst, int width, int height) {
    constexpr int kBlock = 32;
    for (int y0 = 0; y0 < height; y0 += kBlock) {
        for (int x0 = 0; x0 < width; x0 += kBlock) {
            const int y1 = std::min(y0 + kBlock, height);
            const int x1 = std::min(x0 + kBlock, width);
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    dst[static_cast<std::size_t>(x) * height + y] = src[static_cast<std::size_t>(y) * width + x];
                }
            }
        }
    }
}

void separable(std::span<const double> in, std::span<double> out, int width, int height,
               const ColumnFilter& filter) {
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (in.size() != n || out.size() != n) throw DimensionError("filter_plane: buffer size mismatch");

    double* a = scratch(kPassA, n);
    double* b = scratch(kPassB, n);
    filter(in.data(), a, width, height);
    transpose(a, b, width, height);
    filter(b, a, height, width);
    transpose(a, out.data(), height, width);
}

// Running-sum box average over the mirror-periodic extension. The window sum
// is a difference of two prefix sums, so the cost per sample does not depend
// on the radius (which may exceed the line length).
ColumnFilter box_columns(int radius) {
    return [radius](const double* src, double* dst, int w, int h) {
        const auto row = [w](const double* base, std::ptrdiff_t i) { return base + i * w; };
        if (radius == 0 || h == 1) {
            std::copy(src, src + static_cast<std::ptrdiff_t>(w) * h, dst);
            return;
        }
        const std::ptrdiff_t period = 2 * (static_cast<std::ptrdiff_t>(h) - 1);
        double* prefix = scratch(kColumnWork, static_cast<std::size_t>(period + 1) * w);
        std::fill(prefix, prefix + w, 0.0);
        for (std::ptrdiff_t k = 0; k < period; ++k) {
            const double* s = row(src, k < h ? k : period - k);
            const double* p = row(prefix, k);
            double* next = prefix + (k + 1) * w;
            for (int x = 0; x < w; ++x) next[x] = p[x] + s[x];
        }
        const double* total = row(prefix, period);
        const double norm = 1.0 / static_cast<double>(2 * radius + 1);
        for (std::ptrdiff_t i = 0; i < h; ++i) {
            const std::ptrdiff_t hi = i + radius + 1;
            const std::ptrdiff_t lo = i - radius;
            const std::ptrdiff_t qh = floor_div(hi, period);
            const std::ptrdiff_t ql = floor_div(lo, period);
            const double laps = static_cast<double>(qh - ql);
            const double* ph = row(prefix, hi - qh * period);
            const double* pl = row(prefix, lo - ql * period);
            double* d = dst + i * w;
            for (int x = 0; x < w; ++x) d[x] = (laps * total[x] + ph[x] - pl[x]) * norm;
        }
    };
}

ColumnFilter fir_columns(std::vector<double> taps) {
    return [taps = std::move(taps)](const double* src, double* dst, int w, int h) {
        const auto r = static_cast<std::ptrdiff_t>(taps.size() / 2);
        for (std::ptrdiff_t i = 0; i < h; ++i) {
            double* d = dst + i * w;
            std::fill(d, d + w, 0.0);
            for (std::size_t k = 0; k < taps.size(); ++k) {
                const double* s = src + mirror_index(i - r + static_cast<std::ptrdiff_t>(k), h) * w;
                const double t = taps[k];
                for (int x = 0; x < w; ++x) d[x] += t * s[x];
            }
        }
    };
}

// Van Vliet / Young / Verbeek third-order recursive Gaussian. The causal
// filter is prod_k (1 - p_k) / (1 - p_k z^-1); it runs forward, then the
// same filter runs backward. The pole scale is solved by Newton iteration so
// that the combined impulse response has variance sigma^2 exactly.
class RecursiveGaussian {
public:
    static constexpr int kOrder = 3;

    explicit RecursiveGaussian(double sigma) {
        using C = std::complex<double>;
        // Optimized unscaled pole locations (outside the unit circle).
        const std::array<C, kOrder> base{C(1.4165, 1.00829), C(1.4165, -1.00829), C(1.86543, 0.0)};
        auto variance = [&](double q) {
            C sum = 0.0;
            for (const C& d : base) {
                const C z = std::pow(d, 1.0 / q);
                sum += z / ((z - 1.0) * (z - 1.0));
            }
            return 2.0 * sum.real();
        };
        auto dq_variance = [&](double q) {
            C sum = 0.0;
            for (const C& d : base) {
                const C z = std::pow(d, 1.0 / q);
                sum += z * std::log(z) * (z + 1.0) / std::pow(z - 1.0, 3);
            }
            return (2.0 / q) * sum.real();
        };
        double q = sigma / 2.0;
        for (int it = 0; it < 8; ++it) q -= (variance(q) - sigma * sigma) / dq_variance(q);

        C gain = 1.0;
        for (int k = 0; k < kOrder; ++k) {
            poles_[k] = 1.0 / std::pow(base[k], 1.0 / q);
            gain *= 1.0 - poles_[k];
        }
        gain_ = gain.real();

        // prod_k (1 - p_k z^-1) = 1 + sum_m c_m z^-m.
        std::array<C, kOrder + 1> poly{};
        poly[0] = 1.0;
        for (int k = 0; k < kOrder; ++k) {
            for (int m = k + 1; m >= 1; --m) poly[m] -= poles_[k] * poly[m - 1];
        }
        for (int m = 1; m <= kOrder; ++m) feedback_[m - 1] = poly[m].real();

        // Residues of the partial-fraction form sum_k r_k / (1 - p_k z^-1).
        for (int k = 0; k < kOrder; ++k) {
            C r = gain * std::pow(poles_[k], kOrder - 1);
            for (int j = 0; j < kOrder; ++j) {
                if (j != k) r /= poles_[k] - poles_[j];
            }
            residues_[k] = r;
        }
    }

    // The mirror extension of a column of length h is periodic with period
    // P = 2(h-1), and so is every filter output. Each first-order section
    // w[m] = p w[m-1] + r x[m] then has the periodic state
    //   w[m] = r sum_{j>=0} p^j x[m-j] = r / (1 - p^P) sum_{j<P} p^j x[m-j],
    // one geometric sum per pole. Summing the sections gives the exact start
    // state of the direct-form recursion, in both directions. Poles 0 and 1
    // are a conjugate pair, so their sections contribute twice the real part
    // of pole 0's section.
    void operator()(const double* src, double* dst, int w, int h) const {
        if (h == 1) {
            std::copy(src, src + w, dst);
            return;
        }
        const std::ptrdiff_t period = 2 * (static_cast<std::ptrdiff_t>(h) - 1);
        auto wrap = [period](std::ptrdiff_t i) {
            i %= period;
            return i < 0 ? i + period : i;
        };
        const auto cols = static_cast<std::size_t>(w);
        const std::complex<double> pair_denominator = 1.0 - std::pow(poles_[0], static_cast<double>(period));
        const double real_denominator = 1.0 - std::pow(poles_[2].real(), static_cast<double>(period));
        const double cr = poles_[0].real(), ci = poles_[0].imag(), pr = poles_[2].real();
        const double r2 = residues_[2].real();

        std::vector<double> ar(cols), ai(cols), b(cols);
        std::array<std::vector<double>, kOrder> state;
        for (auto& s : state) s.resize(cols);

        // state[l] = output at (oldest + dir * (kOrder - 1 - l)); row(i) takes i in [0, P).
        auto periodic_state = [&](auto row, std::ptrdiff_t oldest, int dir) {
            std::fill(ar.begin(), ar.end(), 0.0);
            std::fill(ai.begin(), ai.end(), 0.0);
            std::fill(b.begin(), b.end(), 0.0);
            // Horner over t = P-1 .. 0 of x[oldest - dir * t], furthest first.
            std::ptrdiff_t idx = wrap(oldest - dir * (period - 1));
            for (std::ptrdiff_t t = period - 1; t >= 0; --t) {
                const double* v = row(idx);
                for (std::size_t x = 0; x < cols; ++x) {
                    const double nr = ar[x] * cr - ai[x] * ci + v[x];
                    ai[x] = ar[x] * ci + ai[x] * cr;
                    ar[x] = nr;
                    b[x] = b[x] * pr + v[x];
                }
                idx += dir;
                if (idx == period) idx = 0;
                if (idx < 0) idx = period - 1;
            }
            for (std::size_t x = 0; x < cols; ++x) {
                std::complex<double> z = residues_[0] * std::complex<double>(ar[x], ai[x]) / pair_denominator;
                double u = r2 * b[x] / real_denominator;
                state[kOrder - 1][x] = 2.0 * z.real() + u;
                for (int l = kOrder - 2; l >= 0; --l) {
                    const double v = row(wrap(oldest + dir * (kOrder - 1 - l)))[x];
                    z = poles_[0] * z + residues_[0] * v;
                    u = pr * u + r2 * v;
                    state[static_cast<std::size_t>(l)][x] = 2.0 * z.real() + u;
                }
            }
        };

        // Causal pass over a full period; state holds y[-1], y[-2], y[-3].
        auto ext_row = [&](std::ptrdiff_t k) { return src + (k < h ? k : period - k) * w; };
        periodic_state(ext_row, -kOrder, +1);
        double* y = scratch(kColumnWork, static_cast<std::size_t>(period) * cols);
        auto y_row = [&](std::ptrdiff_t k) { return y + k * w; };
        for (std::ptrdiff_t k = 0; k < period; ++k) {
            std::array<const double*, kOrder> prev;
            for (int m = 1; m <= kOrder; ++m) {
                prev[m - 1] = k - m >= 0 ? y_row(k - m) : state[static_cast<std::size_t>(m - k - 1)].data();
            }
            const double* xr = ext_row(k);
            double* out = y_row(k);
            for (std::size_t x = 0; x < cols; ++x) {
                out[x] = gain_ * xr[x] - feedback_[0] * prev[0][x] - feedback_[1] * prev[1][x] -
                         feedback_[2] * prev[2][x];
            }
        }

        // Anti-causal pass over [0, h); state holds u[h], u[h+1], u[h+2].
        periodic_state(y_row, h + kOrder - 1, -1);
        for (std::ptrdiff_t k = h - 1; k >= 0; --k) {
            std::array<const double*, kOrder> next;
            for (int m = 1; m <= kOrder; ++m) {
                next[m - 1] = k + m < h ? dst + (k + m) * w : state[static_cast<std::size_t>(k + m - h)].data();
            }
            const double* yr = y_row(k);
            double* out = dst + k * w;
            for (std::size_t x = 0; x < cols; ++x) {
                out[x] = gain_ * yr[x] - feedback_[0] * next[0][x] - feedback_[1] * next[1][x] -
                         feedback_[2] * next[2][x];
            }
        }
    }

private:
    std::array<std::complex<double>, kOrder> poles_{};
    std::array<std::complex<double>, kOrder> residues_{};
    std::array<double, kOrder> feedback_{};
    double gain_ = 1.0;
};


Image filter_channels(const Image& img, const SpatialSpec& spec) {
    std::vector<double> out(img.size());
    for (int c = 0; c < img.channels(); ++c) {
        filter_plane(img.plane(c), std::span<double>(out).subspan(c * img.plane_size(), img.plane_size()),
                     img.width(), img.height(), spec);
    }
    return Image(img.width(), img.height(), img.channels(), std::move(out));
}

}  // namespace

std::ptrdiff_t mirror_index(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n <= 1) return 0;
    const std::ptrdiff_t period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

void validate(const SpatialSpec& spec) {
    switch (spec.kind) {
        case SpatialKind::Box:
            if (spec.radius < 0) throw ParameterError("box radius must be nonnegative");
            break;
        case SpatialKind::GaussianFIR:
            if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
                throw ParameterError("gaussian sigma must be positive");
            }
            break;
        case SpatialKind::GaussianRecursive:
            if (!(spec.sigma >= kMinRecursiveSigma) || !std::isfinite(spec.sigma)) {
                throw ParameterError("recursive gaussian needs sigma >= " + std::to_string(kMinRecursiveSigma) +
                                     ", got " + std::to_string(spec.sigma));
            }
            break;
    }
}

std::vector<double> fir_taps(const SpatialSpec& spec) {
    validate(spec);
    if (spec.kind == SpatialKind::Box) {
        const auto len = static_cast<std::size_t>(2 * spec.radius + 1);
        return std::vector<double>(len, 1.0 / static_cast<double>(len));
    }
    const int r = static_cast<int>(std::ceil(4.0 * spec.sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int k = -r; k <= r; ++k) {
        const double v = std::exp(-static_cast<double>(k) * k / (2.0 * spec.sigma * spec.sigma));
        taps[k + r] = v;
        sum += v;
    }
    for (double& t : taps) t /= sum;
    return taps;
}

void filter_plane(std::span<const double> in, std::span<double> out, int width, int height,
                  const SpatialSpec& spec) {
    validate(spec);
    switch (spec.kind) {
        case SpatialKind::Box:
            separable(in, out, width, height, box_columns(spec.radius));
            break;
        case SpatialKind::GaussianFIR:
            separable(in, out, width, height, fir_columns(fir_taps(spec)));
            break;
        case SpatialKind::GaussianRecursive:
            separable(in, out, width, height, RecursiveGaussian(spec.sigma));
            break;
    }
}

Image box_filter(const Image& img, int radius, Boundary boundary) {
    return filter_channels(img, {SpatialKind::Box, radius, 1.0, boundary});
}

Image gaussian_fir(const Image& img, double sigma, Boundary boundary) {
    return filter_channels(img, {SpatialKind::GaussianFIR, 0, sigma, boundary});
}

Image gaussian_recursive(const Image& img, double sigma, Boundary boundary) {
    return filter_channels(img, {SpatialKind::GaussianRecursive, 0, sigma, boundary});
}

Image spatial_filter(const Image& img, const SpatialSpec& spec) { return filter_channels(img, spec); }

}  // namespace trigbf
