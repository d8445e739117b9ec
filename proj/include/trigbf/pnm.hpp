#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "trigbf/image.hpp"

namespace trigbf {

enum class PnmMagic { P5, P6 };

struct PnmHeader {
    PnmMagic magic = PnmMagic::P5;
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::size_t payload_offset = 0;  // first byte of raster data
};

// Binary PGM (P5) or PPM (P6) with maxval 255. '#' comments are allowed in
// the header. Interleaved PPM data is converted to planar.
PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes);
Image read_pnm(std::span<const std::uint8_t> bytes);

// Header "P5\n<w> <h>\n255\n" (P6 for three channels), samples quantized
// with image_to_bytes.
std::vector<std::uint8_t> write_pnm(const Image& img);

Image read_pnm_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so a failed
// write never leaves a partial file at path.
void write_pnm_file(const std::filesystem::path& path, const Image& img);

}  // namespace trigbf
