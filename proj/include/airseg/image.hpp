#pragma once

#include "airseg/error.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace airseg {

/// Row-major 2D pixel grid. The tag parameter keeps images with different
/// meaning (intensity, neighbourhood average, binary mask) from mixing.
template <typename Pixel, typename Tag>
class Grid {
public:
    using pixel_type = Pixel;

    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, Pixel fill = Pixel{})
        : rows_(rows), cols_(cols), pixels_(rows * cols, fill) {}
    Grid(std::size_t rows, std::size_t cols, std::vector<Pixel> pixels)
        : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
        if (pixels_.size() != rows_ * cols_) {
            throw Error(ErrorCode::ShapeMismatch,
                        "pixel buffer of length " + std::to_string(pixels_.size()) +
                            " does not match " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
        }
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return pixels_.size(); }
    [[nodiscard]] bool empty() const noexcept { return pixels_.empty(); }

    [[nodiscard]] Pixel at(std::size_t r, std::size_t c) const { return pixels_[r * cols_ + c]; }
    Pixel& at(std::size_t r, std::size_t c) { return pixels_[r * cols_ + c]; }

    [[nodiscard]] std::span<const Pixel> pixels() const noexcept { return pixels_; }
    [[nodiscard]] std::span<Pixel> pixels() noexcept { return pixels_; }

    [[nodiscard]] std::span<const Pixel> row(std::size_t r) const {
        return std::span<const Pixel>(pixels_).subspan(r * cols_, cols_);
    }
    [[nodiscard]] std::span<Pixel> row(std::size_t r) {
        return std::span<Pixel>(pixels_).subspan(r * cols_, cols_);
    }

    template <typename OtherPixel, typename OtherTag>
    [[nodiscard]] bool same_shape(const Grid<OtherPixel, OtherTag>& other) const noexcept {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Pixel> pixels_;
};

struct GrayTag {};
struct AverageTag {};
struct BinaryTag {};

/// 8-bit intensity image, the input to morphology and thresholding.
using GrayImage = Grid<std::uint8_t, GrayTag>;
/// floor of the 3x3 neighbourhood mean of a GrayImage.
using AverageImage = Grid<std::uint8_t, AverageTag>;
/// 1 = foreground (airway), 0 = background.
using BinaryImage = Grid<std::uint8_t, BinaryTag>;

} // namespace airseg
