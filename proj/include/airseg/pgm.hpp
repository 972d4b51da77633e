#pragma once

#include "airseg/image.hpp"

#include <filesystem>

namespace airseg::pgm {

/// Reads a binary PGM (P5) with maxval 255. Comments in the header are skipped.
GrayImage read(const std::filesystem::path& path);

void write(const std::filesystem::path& path, const GrayImage& image);

/// Writes a mask as P5 with values {0, 255}.
void write(const std::filesystem::path& path, const BinaryImage& mask);

} // namespace airseg::pgm
