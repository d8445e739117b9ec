#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace trigbf {

/// Planar double-precision raster with 1 or 3 channels.
///
/// Samples are stored channel after channel, each channel row-major, so a
/// single channel is a contiguous slice. Every sample is finite; the
/// constructors reject NaN and Inf.
class Image {
public:
    Image(int width, int height, int channels = 1, double fill = 0.0);
    Image(int width, int height, int channels, std::vector<double> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    std::size_t size() const noexcept { return samples_.size(); }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<const double> plane(int c) const;

    double at(int x, int y, int c = 0) const {
        return samples_[static_cast<std::size_t>(c) * plane_size() +
                        static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                        static_cast<std::size_t>(x)];
    }

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_;
    int height_;
    int channels_;
    std::vector<double> samples_;
};

struct ErrorStats {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double std_dev = 0.0;  // population standard deviation of the signed error
};

Image image_from_bytes(std::span<const std::uint8_t> bytes, int width, int height, int channels);

// Round half away from zero, then clamp to [0, 255].
std::vector<std::uint8_t> image_to_bytes(const Image& img);

ErrorStats error_stats(const Image& a, const Image& b);

Image extract_channel(const Image& img, int c);
Image merge_channels(std::span<const Image> planes);

double min_sample(const Image& img);
double max_sample(const Image& img);

}  // namespace trigbf
