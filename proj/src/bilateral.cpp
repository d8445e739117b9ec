#include "trigbf/bilateral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "parallel.hpp"
#include "trigbf/errors.hpp"

namespace trigbf {

namespace {

void require_single_channel(const Image& img, const char* who) {
    if (img.channels() != 1) {
        throw ParameterError(std::string(who) + " expects a single-channel image, got " +
                             std::to_string(img.channels()) + " channels");
    }
}

std::vector<double> filtered(const std::vector<double>& plane, int w, int h, const SpatialSpec& spatial) {
    std::vector<double> out(plane.size());
    filter_plane(plane, out, w, h, spatial);
    return out;
}

// Distinct nonnegative frequencies of a raised cosine with their pair weights.
struct FrequencyWeight {
    double nu;
    double weight;
};

std::vector<FrequencyWeight> frequency_weights(const TrigKernel& k) {
    std::vector<FrequencyWeight> out;
    for (int n = (k.N + 1) / 2; n <= k.N; ++n) {
        if (2 * n == k.N) {
            out.push_back({0.0, k.coeffs[n]});
        } else {
            out.push_back({k.freqs[n], 2.0 * k.coeffs[n]});
        }
    }
    return out;
}

// Integer-valued images with a modest span let the direct engine tabulate the
// range function over every possible difference. The tabulated values are the
// range function evaluated at exactly the same arguments, so results match
// the untabulated loop.
std::optional<std::vector<double>> tabulate_range(std::span<const double> f, const RangeFunction& range,
                                                  long& offset) {
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double span = *hi - *lo;
    if (span > 65535.0) return std::nullopt;
    if (!std::all_of(f.begin(), f.end(), [](double v) { return v == std::floor(v); })) return std::nullopt;
    offset = static_cast<long>(span);
    std::vector<double> table(static_cast<std::size_t>(2 * offset + 1));
    for (long d = -offset; d <= offset; ++d) table[d + offset] = range(static_cast<double>(d));
    return table;
}

// Integer-valued samples with a modest span, as offsets from the minimum, so
// cos and sin need only be evaluated once per distinct level. The level value
// lo + offset equals the sample exactly, so the tabulated values are the same
// as evaluating per pixel.
struct IntegerLevels {
    double lo = 0.0;
    std::size_t count = 0;
    std::vector<std::uint32_t> offset;
};

std::optional<IntegerLevels> integer_levels(std::span<const double> f) {
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    if (*hi - *lo > 65535.0) return std::nullopt;
    if (!std::all_of(f.begin(), f.end(), [](double v) { return v == std::floor(v); })) return std::nullopt;
    IntegerLevels levels;
    levels.lo = *lo;
    levels.count = static_cast<std::size_t>(*hi - *lo) + 1;
    levels.offset.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) levels.offset[i] = static_cast<std::uint32_t>(f[i] - *lo);
    return levels;
}

class CosSin {
public:
    explicit CosSin(std::span<const double> f) : f_(f), levels_(integer_levels(f)) {}

    // c = cos(nu f), s = sin(nu f); table_c/table_s are caller scratch.
    void fill(double nu, double* c, double* s, std::vector<double>& table_c, std::vector<double>& table_s) const {
        if (!levels_) {
            for (std::size_t i = 0; i < f_.size(); ++i) {
                c[i] = std::cos(nu * f_[i]);
                s[i] = std::sin(nu * f_[i]);
            }
            return;
        }
        table_c.resize(levels_->count);
        table_s.resize(levels_->count);
        for (std::size_t v = 0; v < levels_->count; ++v) {
            const double x = levels_->lo + static_cast<double>(v);
            table_c[v] = std::cos(nu * x);
            table_s[v] = std::sin(nu * x);
        }
        for (std::size_t i = 0; i < f_.size(); ++i) {
            c[i] = table_c[levels_->offset[i]];
            s[i] = table_s[levels_->offset[i]];
        }
    }

private:
    std::span<const double> f_;
    std::optional<IntegerLevels> levels_;
};

}  // namespace

std::size_t AuxiliaryImageSet::filtering_passes() const {
    std::size_t n = 0;
    for (const auto& t : terms) n += t.filtering_passes();
    return n;
}

AuxiliaryImageSet build_auxiliary_images(const Image& img, const TrigKernel& k) {
    require_single_channel(img, "build_auxiliary_images");
    const auto f = img.plane(0);
    AuxiliaryImageSet set;
    const CosSin trig(f);
    std::vector<double> table_c, table_s;
    for (const auto& [nu, weight] : frequency_weights(k)) {
        std::vector<double> c(f.size()), s(f.size()), fc(f.size()), fs(f.size());
        trig.fill(nu, c.data(), s.data(), table_c, table_s);
        for (std::size_t i = 0; i < f.size(); ++i) {
            fc[i] = f[i] * c[i];
            fs[i] = f[i] * s[i];
        }
        const int w = img.width();
        const int h = img.height();
        set.terms.push_back(FrequencyTerm{nu, weight, Image(w, h, 1, std::move(c)), Image(w, h, 1, std::move(s)),
                                          Image(w, h, 1, std::move(fc)), Image(w, h, 1, std::move(fs))});
    }
    return set;
}

std::vector<Image> moment_images(const Image& img, int highest) {
    require_single_channel(img, "moment_images");
    std::vector<Image> out;
    const auto f = img.plane(0);
    std::vector<double> power(f.begin(), f.end());
    for (int m = 1; m <= highest; ++m) {
        if (m > 1) {
            for (std::size_t i = 0; i < power.size(); ++i) power[i] *= f[i];
        }
        out.emplace_back(img.width(), img.height(), 1, power);
    }
    return out;
}

Image bilateral_direct(const Image& img, const SpatialSpec& spatial, const RangeFunction& range,
                       FilterStats* stats, const ExecOptions& exec) {
    require_single_channel(img, "bilateral_direct");
    const std::vector<double> taps = fir_taps(spatial);
    const int r = static_cast<int>(taps.size() / 2);
    const int w = img.width();
    const int h = img.height();
    const int pw = w + 2 * r;
    const int ph = h + 2 * r;

    std::vector<double> pad(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const auto sy = mirror_index(y - r, h);
        for (int x = 0; x < pw; ++x) {
            pad[static_cast<std::size_t>(y) * pw + x] = img.at(static_cast<int>(mirror_index(x - r, w)), static_cast<int>(sy));
        }
    }

    long offset = 0;
    const auto table = tabulate_range(img.plane(0), range, offset);

    std::vector<double> out(img.plane_size());
    const unsigned threads = detail::resolve_threads(exec.threads);
    std::vector<std::size_t> guarded(threads, 0);
    const std::size_t taps_n = taps.size();

    detail::parallel_for(threads, threads, [&](std::size_t t) {
        for (int y = static_cast<int>(t); y < h; y += static_cast<int>(threads)) {
            for (int x = 0; x < w; ++x) {
                const double centre = img.at(x, y);
                double num = 0.0;
                double eta = 0.0;
                for (std::size_t j = 0; j < taps_n; ++j) {
                    const double* row = pad.data() + (static_cast<std::size_t>(y) + j) * pw + x;
                    const double wy = taps[j];
                    if (table) {
                        const double* lut = table->data() + offset;
                        for (std::size_t i = 0; i < taps_n; ++i) {
                            const double v = row[i];
                            const double wt = wy * taps[i] * lut[static_cast<long>(v - centre)];
                            num += wt * v;
                            eta += wt;
                        }
                    } else {
                        for (std::size_t i = 0; i < taps_n; ++i) {
                            const double v = row[i];
                            const double wt = wy * taps[i] * range(v - centre);
                            num += wt * v;
                            eta += wt;
                        }
                    }
                }
                const auto idx = static_cast<std::size_t>(y) * w + x;
                if (eta < kEtaFloor) {
                    out[idx] = centre;
                    ++guarded[t];
                } else {
                    out[idx] = num / eta;
                }
            }
        }
    });

    if (stats) {
        for (auto g : guarded) stats->guarded_pixels += g;
    }
    return Image(w, h, 1, std::move(out));
}

Image bilateral_trig(const Image& img, const SpatialSpec& spatial, const TrigKernel& k, FilterStats* stats,
                     const ExecOptions& exec) {
    require_single_channel(img, "bilateral_trig");
    validate(spatial);
    const auto f = img.plane(0);
    if (min_sample(img) < 0.0 || max_sample(img) > k.T) {
        throw ParameterError("bilateral_trig: samples must lie in [0, " + std::to_string(k.T) +
                             "]; rescale the image or raise T");
    }
    const int w = img.width();
    const int h = img.height();
    const std::size_t n = f.size();
    const auto terms = frequency_weights(k);

    // Each term's contribution is computed independently, then added in
    // increasing frequency order so the sum does not depend on scheduling.
    // Workspaces belong to batch slots and are reused across batches.
    struct Workspace {
        std::vector<double> c, s, fc, fs, cbar, sbar, fcbar, fsbar, num, den, table_c, table_s;
        std::size_t passes = 0;
    };
    const unsigned threads = detail::resolve_threads(exec.threads);
    const std::size_t batch = std::min<std::size_t>(std::max(1u, threads), terms.size());
    const CosSin trig(f);

    std::vector<double> num(n, 0.0);
    std::vector<double> den(n, 0.0);
    FilterStats local;
    std::vector<Workspace> parts(batch);

    for (std::size_t first = 0; first < terms.size(); first += batch) {
        const std::size_t count = std::min(batch, terms.size() - first);
        detail::parallel_for(count, threads, [&](std::size_t slot) {
            const auto [nu, weight] = terms[first + slot];
            Workspace& ws = parts[slot];
            for (auto* v : {&ws.c, &ws.s, &ws.fc, &ws.fs, &ws.cbar, &ws.sbar, &ws.fcbar, &ws.fsbar, &ws.num, &ws.den}) {
                v->resize(n);
            }
            if (nu == 0.0) {
                // The constant image averages to exactly 1.
                filter_plane(f, ws.fcbar, w, h, spatial);
                for (std::size_t i = 0; i < n; ++i) {
                    ws.num[i] = weight * ws.fcbar[i];
                    ws.den[i] = weight;
                }
                ws.passes = 1;
                return;
            }
            trig.fill(nu, ws.c.data(), ws.s.data(), ws.table_c, ws.table_s);
            for (std::size_t i = 0; i < n; ++i) {
                ws.fc[i] = f[i] * ws.c[i];
                ws.fs[i] = f[i] * ws.s[i];
            }
            filter_plane(ws.c, ws.cbar, w, h, spatial);
            filter_plane(ws.s, ws.sbar, w, h, spatial);
            filter_plane(ws.fc, ws.fcbar, w, h, spatial);
            filter_plane(ws.fs, ws.fsbar, w, h, spatial);
            for (std::size_t i = 0; i < n; ++i) {
                ws.num[i] = weight * (ws.c[i] * ws.fcbar[i] + ws.s[i] * ws.fsbar[i]);
                ws.den[i] = weight * (ws.c[i] * ws.cbar[i] + ws.s[i] * ws.sbar[i]);
            }
            ws.passes = 4;
        });
        for (std::size_t slot = 0; slot < count; ++slot) {
            const Workspace& ws = parts[slot];
            for (std::size_t i = 0; i < n; ++i) {
                num[i] += ws.num[i];
                den[i] += ws.den[i];
            }
            local.spatial_passes += ws.passes;
        }
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (den[i] < kEtaFloor) {
            out[i] = f[i];
            ++local.guarded_pixels;
        } else {
            out[i] = num[i] / den[i];
        }
    }
    if (stats) *stats += local;
    return Image(w, h, 1, std::move(out));
}

Image bilateral_poly(const Image& img, const SpatialSpec& spatial, const PolyKernel& p, FilterStats* stats,
                     const ExecOptions& exec) {
    require_single_channel(img, "bilateral_poly");
    validate(spatial);
    if (p.coeffs_even.empty()) throw ParameterError("bilateral_poly: empty polynomial");
    const auto f = img.plane(0);
    const int w = img.width();
    const int h = img.height();
    const std::size_t n = f.size();
    const int K = p.terms();
    const int top = 2 * K - 1;

    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;

    // Coefficients of the kernel in scaled intensities u = f / scale.
    std::vector<double> b(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) b[k] = p.coeffs_even[k] * std::pow(scale, 2 * k);

    // binom[n][m] for n <= 2K-2.
    std::vector<std::vector<double>> binom(static_cast<std::size_t>(top));
    for (int row = 0; row < top; ++row) {
        binom[row].assign(static_cast<std::size_t>(row) + 1, 1.0);
        for (int m = 1; m < row; ++m) binom[row][m] = binom[row - 1][m - 1] + binom[row - 1][m];
    }

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = f[i] / scale;

    // avg[m] = spatial average of u^m, m = 0..2K-1; u^0 averages to 1.
    std::vector<std::vector<double>> avg(static_cast<std::size_t>(top) + 1);
    avg[0].assign(n, 1.0);
    detail::parallel_for(static_cast<std::size_t>(top), exec.threads, [&](std::size_t slot) {
        const int m = static_cast<int>(slot) + 1;
        std::vector<double> power(n);
        for (std::size_t i = 0; i < n; ++i) power[i] = std::pow(u[i], m);
        avg[m] = filtered(power, w, h, spatial);
    });

    FilterStats local;
    local.spatial_passes = static_cast<std::size_t>(top);
    std::vector<double> out(n);
    std::vector<double> a_coef(static_cast<std::size_t>(top));
    std::vector<double> neg_pow(static_cast<std::size_t>(top));
    for (std::size_t i = 0; i < n; ++i) {
        // phi(t - a) = sum_m a_coef[m] t^m with
        // a_coef[m] = sum_{2k >= m} b_k C(2k, m) (-a)^(2k-m).
        const double a = u[i];
        neg_pow[0] = 1.0;
        for (int e = 1; e < top; ++e) neg_pow[e] = neg_pow[e - 1] * -a;
        std::fill(a_coef.begin(), a_coef.end(), 0.0);
        for (int k = 0; k < K; ++k) {
            for (int m = 0; m <= 2 * k; ++m) a_coef[m] += b[k] * binom[2 * k][m] * neg_pow[2 * k - m];
        }
        double num = 0.0;
        double den = 0.0;
        for (int m = 0; m < top; ++m) {
            num += a_coef[m] * avg[m + 1][i];
            den += a_coef[m] * avg[m][i];
        }
        if (den < kEtaFloor) {
            out[i] = f[i];
            ++local.guarded_pixels;
        } else {
            out[i] = scale * num / den;
        }
    }
    if (stats) *stats += local;
    return Image(w, h, 1, std::move(out));
}

Image bilateral_filter(const Image& img, const SpatialSpec& spatial, const EngineParams& engine,
                       FilterStats* stats, const ExecOptions& exec) {
    auto run = [&](const Image& plane) {
        return std::visit(
            [&](const auto& e) -> Image {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, DirectEngine>) {
                    return bilateral_direct(plane, spatial, e.range, stats, exec);
                } else if constexpr (std::is_same_v<E, TrigEngine>) {
                    return bilateral_trig(plane, spatial, e.kernel, stats, exec);
                } else {
                    return bilateral_poly(plane, spatial, e.kernel, stats, exec);
                }
            },
            engine);
    };
    if (img.channels() == 1) return run(img);
    std::vector<Image> planes;
    planes.reserve(static_cast<std::size_t>(img.channels()));
    for (int c = 0; c < img.channels(); ++c) planes.push_back(run(extract_channel(img, c)));
    return merge_channels(planes);
}

Image bilateral_color(const Image& img, const SpatialSpec& spatial, const EngineParams& engine,
                      FilterStats* stats, const ExecOptions& exec) {
    if (img.channels() != 3) {
        throw ParameterError("bilateral_color expects 3 channels, got " + std::to_string(img.channels()));
    }
    return bilateral_filter(img, spatial, engine, stats, exec);
}

}  // namespace trigbf
