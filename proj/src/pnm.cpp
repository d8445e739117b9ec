#include "trigbf/pnm.hpp"

#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

#include "trigbf/errors.hpp"

namespace trigbf {

namespace {

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    int read_int(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw ParseError(std::string(what) + " is too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
        return static_cast<int>(value);
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw ParseError("bad magic number, expected P5 or P6", 0);
    }
    PnmHeader header;
    header.magic = bytes[1] == '5' ? PnmMagic::P5 : PnmMagic::P6;

    HeaderReader reader(bytes);
    reader.advance(2);
    if (reader.pos() >= bytes.size() || !is_space(bytes[reader.pos()])) {
        throw ParseError("expected whitespace after magic number", reader.pos());
    }
    reader.skip_space_and_comments();
    const std::size_t width_pos = reader.pos();
    header.width = reader.read_int("width");
    reader.skip_space_and_comments();
    const std::size_t height_pos = reader.pos();
    header.height = reader.read_int("height");
    if (header.width < 1) throw ParseError("image width must be positive", width_pos);
    if (header.height < 1) throw ParseError("image height must be positive", height_pos);
    reader.skip_space_and_comments();
    const std::size_t maxval_pos = reader.pos();
    header.maxval = reader.read_int("maxval");
    if (header.maxval != 255) {
        throw ParseError("unsupported maxval " + std::to_string(header.maxval) + ", only 255 is accepted",
                         maxval_pos);
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (reader.pos() >= bytes.size() || !is_space(bytes[reader.pos()])) {
        throw ParseError("expected whitespace after maxval", reader.pos());
    }
    header.payload_offset = reader.pos() + 1;
    return header;
}

Image read_pnm(std::span<const std::uint8_t> bytes) {
    const PnmHeader header = parse_pnm_header(bytes);
    const int channels = header.magic == PnmMagic::P5 ? 1 : 3;
    const std::size_t plane = static_cast<std::size_t>(header.width) * static_cast<std::size_t>(header.height);
    const std::size_t expected = plane * static_cast<std::size_t>(channels);
    const std::size_t available = bytes.size() - header.payload_offset;
    if (available < expected) {
        throw ParseError("truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                             std::to_string(available),
                         bytes.size());
    }
    std::vector<double> samples(expected);
    const auto* data = bytes.data() + header.payload_offset;
    for (std::size_t i = 0; i < plane; ++i) {
        for (int c = 0; c < channels; ++c) {
            samples[static_cast<std::size_t>(c) * plane + i] = data[i * channels + c];
        }
    }
    return Image(header.width, header.height, channels, std::move(samples));
}

std::vector<std::uint8_t> write_pnm(const Image& img) {
    if (img.channels() != 1 && img.channels() != 3) {
        throw DimensionError("write_pnm supports 1 or 3 channels, got " + std::to_string(img.channels()));
    }
    const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" + std::to_string(img.width()) +
                               " " + std::to_string(img.height()) + "\n255\n";
    const std::vector<std::uint8_t> planar = image_to_bytes(img);
    const std::size_t plane = img.plane_size();
    const auto channels = static_cast<std::size_t>(img.channels());

    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.resize(header.size() + planar.size());
    auto* data = out.data() + header.size();
    for (std::size_t i = 0; i < plane; ++i) {
        for (std::size_t c = 0; c < channels; ++c) data[i * channels + c] = planar[c * plane + i];
    }
    return out;
}

Image read_pnm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_pnm(bytes);
}

void write_pnm_file(const std::filesystem::path& path, const Image& img) {
    const std::vector<std::uint8_t> bytes = write_pnm(img);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::system_error(errno, std::generic_category(), "cannot create " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::system_error(errno, std::generic_category(), "write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace trigbf
