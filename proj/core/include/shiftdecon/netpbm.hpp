#pragma once

#include <filesystem>
#include <iosfwd>

#include "shiftdecon/image.hpp"

namespace shiftdecon {

// Binary PGM (P5, 1 channel) and PPM (P6, 3 channels) with maxval 255.
// Reading maps byte b to b / 255; writing clamps to [0, 1] and rounds
// sample * 255 half away from zero.

ImageRaster read_netpbm(std::istream& in);
void write_netpbm(std::ostream& out, const ImageRaster& img);

ImageRaster read_netpbm_file(const std::filesystem::path& path);
void write_netpbm_file(const std::filesystem::path& path, const ImageRaster& img);

/// Byte written for a sample.
unsigned char quantize_sample(double v) noexcept;

}  // namespace shiftdecon
