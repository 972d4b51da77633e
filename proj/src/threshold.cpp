#include "airseg/threshold.hpp"

#include <algorithm>

namespace airseg::threshold {

void apply_threshold_rows(const GrayImage& f, std::size_t t, std::size_t row_begin, std::size_t row_end,
                          BinaryImage& out) {
    for (std::size_t y = row_begin; y < row_end; ++y) {
        const auto src = f.row(y);
        auto dst = out.row(y);
        for (std::size_t x = 0; x < src.size(); ++x) {
            dst[x] = src[x] >= t ? 1 : 0;
        }
    }
}

BinaryImage apply_threshold(const GrayImage& f, std::size_t t) {
    BinaryImage out(f.rows(), f.cols());
    apply_threshold_rows(f, t, 0, f.rows(), out);
    return out;
}

GrayImage render(const BinaryImage& mask) {
    GrayImage out(mask.rows(), mask.cols());
    std::transform(mask.pixels().begin(), mask.pixels().end(), out.pixels().begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
    return out;
}

std::size_t foreground_count(const BinaryImage& mask) {
    return static_cast<std::size_t>(std::count_if(mask.pixels().begin(), mask.pixels().end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

std::array<std::uint64_t, 256> intensity_histogram(const GrayImage& f) {
    std::array<std::uint64_t, 256> counts{};
    for (const auto v : f.pixels()) {
        ++counts[v];
    }
    return counts;
}

} // namespace airseg::threshold
