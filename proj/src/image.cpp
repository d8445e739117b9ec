#include "trigbf/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trigbf/errors.hpp"

namespace trigbf {

namespace {

void check_shape(int width, int height, int channels) {
    if (width < 1 || height < 1) {
        throw DimensionError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
        throw DimensionError("channel count must be 1 or 3, got " + std::to_string(channels));
    }
}

}  // namespace

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
    check_shape(width, height, channels);
    if (!std::isfinite(fill)) throw ParameterError("fill value must be finite");
    samples_.assign(plane_size() * static_cast<std::size_t>(channels), fill);
}

Image::Image(int width, int height, int channels, std::vector<double> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
    check_shape(width, height, channels);
    if (samples_.size() != plane_size() * static_cast<std::size_t>(channels)) {
        throw DimensionError("sample count " + std::to_string(samples_.size()) + " does not match " +
                             std::to_string(width) + "x" + std::to_string(height) + "x" +
                             std::to_string(channels));
    }
    if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); })) {
        throw ParameterError("image samples must be finite");
    }
}

std::span<const double> Image::plane(int c) const {
    if (c < 0 || c >= channels_) throw DimensionError("channel index out of range");
    return std::span<const double>(samples_).subspan(static_cast<std::size_t>(c) * plane_size(), plane_size());
}

Image image_from_bytes(std::span<const std::uint8_t> bytes, int width, int height, int channels) {
    if (width < 1 || height < 1) throw DimensionError("image dimensions must be positive");
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                          static_cast<std::size_t>(channels);
    if (bytes.size() != expected) {
        throw DimensionError("expected " + std::to_string(expected) + " bytes, got " +
                             std::to_string(bytes.size()));
    }
    return Image(width, height, channels, std::vector<double>(bytes.begin(), bytes.end()));
}

std::vector<std::uint8_t> image_to_bytes(const Image& img) {
    std::vector<std::uint8_t> out(img.size());
    std::transform(img.samples().begin(), img.samples().end(), out.begin(), [](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
    });
    return out;
}

ErrorStats error_stats(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw DimensionError("error_stats: images differ in shape");

    // Welford accumulation of the signed difference.
    ErrorStats st;
    double mean = 0.0;
    double m2 = 0.0;
    double abs_sum = 0.0;
    std::size_t n = 0;
    const auto sa = a.samples();
    const auto sb = b.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double d = sa[i] - sb[i];
        ++n;
        const double delta = d - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (d - mean);
        abs_sum += std::abs(d);
        st.max_abs = std::max(st.max_abs, std::abs(d));
    }
    st.mean_abs = abs_sum / static_cast<double>(n);
    st.std_dev = std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
    // Rounding can push the mean above the max by an ulp.
    st.mean_abs = std::min(st.mean_abs, st.max_abs);
    return st;
}

Image extract_channel(const Image& img, int c) {
    const auto p = img.plane(c);
    return Image(img.width(), img.height(), 1, std::vector<double>(p.begin(), p.end()));
}

Image merge_channels(std::span<const Image> planes) {
    if (planes.size() != 1 && planes.size() != 3) throw DimensionError("merge_channels needs 1 or 3 planes");
    const Image& first = planes.front();
    std::vector<double> samples;
    samples.reserve(first.plane_size() * planes.size());
    for (const Image& p : planes) {
        if (p.channels() != 1 || p.width() != first.width() || p.height() != first.height()) {
            throw DimensionError("merge_channels: planes must be single-channel and equally sized");
        }
        samples.insert(samples.end(), p.samples().begin(), p.samples().end());
    }
    return Image(first.width(), first.height(), static_cast<int>(planes.size()), std::move(samples));
}

double min_sample(const Image& img) {
    return *std::min_element(img.samples().begin(), img.samples().end());
}

double max_sample(const Image& img) {
    return *std::max_element(img.samples().begin(), img.samples().end());
}

}  // namespace trigbf
