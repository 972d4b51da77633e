#pragma once

#include "airseg/image.hpp"

#include <array>
#include <cstddef>
#include <cstdint>

namespace airseg::threshold {

/// out = 1 where f >= t, else 0.
BinaryImage apply_threshold(const GrayImage& f, std::size_t t);

/// Rows [row_begin, row_end) of apply_threshold into out (already shaped like f).
void apply_threshold_rows(const GrayImage& f, std::size_t t, std::size_t row_begin,
                          std::size_t row_end, BinaryImage& out);

/// Maps a mask to {0, 255} for viewing.
GrayImage render(const BinaryImage& mask);

std::size_t foreground_count(const BinaryImage& mask);

std::array<std::uint64_t, 256> intensity_histogram(const GrayImage& f);

} // namespace airseg::threshold
