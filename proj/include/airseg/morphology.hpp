#pragma once

#include "airseg/image.hpp"

#include <string_view>
#include <vector>

namespace airseg::morph {

struct Offset {
    int dy = 0;
    int dx = 0;

    friend bool operator==(const Offset&, const Offset&) = default;
    friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Neighbourhood B as a set of offsets relative to the origin.
class StructuringElement {
public:
    /// Offsets are sorted and deduplicated. Throws InvalidArgument when the
    /// set is empty or does not contain the origin.
    explicit StructuringElement(std::vector<Offset> offsets, int radius = 0);

    [[nodiscard]] const std::vector<Offset>& offsets() const noexcept { return offsets_; }
    [[nodiscard]] int radius() const noexcept { return radius_; }
    /// max(|dy|, |dx|) over all offsets.
    [[nodiscard]] int extent() const noexcept { return extent_; }
    [[nodiscard]] bool symmetric() const;
    [[nodiscard]] StructuringElement reflected() const;

private:
    std::vector<Offset> offsets_;
    int radius_ = 0;
    int extent_ = 0;
};

/// {(dy, dx) : dy^2 + dx^2 <= radius^2}. Throws InvalidArgument for radius < 0.
StructuringElement disk(int radius);

/// Axis-aligned (2h+1)x(2h+1) square.
StructuringElement square(int half_width);

/// Local minimum over B; samples outside the image count as 255.
GrayImage erode(const GrayImage& a, const StructuringElement& b);

/// Local maximum over the reflection of B; samples outside the image count as 0.
GrayImage dilate(const GrayImage& a, const StructuringElement& b);

/// dilate(erode(a, b), b).
GrayImage open(const GrayImage& a, const StructuringElement& b);

/// erode(dilate(a, b), b).
GrayImage close(const GrayImage& a, const StructuringElement& b);

/// max(a - b, 0) per pixel. Throws ShapeMismatch.
GrayImage subtract_saturating(const GrayImage& a, const GrayImage& b);

enum class TophatMode {
    White, ///< original - open(original): small bright structures
    Black, ///< close(original) - original: small dark structures
};

TophatMode parse_tophat_mode(std::string_view text);
std::string_view to_string(TophatMode mode);

/// Mask that removes structures larger than the element and keeps the
/// small ones at their contrast against the surroundings.
GrayImage tophat_mask(const GrayImage& original, const StructuringElement& se,
                      TophatMode mode = TophatMode::White);

} // namespace airseg::morph
