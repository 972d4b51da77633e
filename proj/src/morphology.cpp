#include "airseg/morphology.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>

namespace airseg::morph {

StructuringElement::StructuringElement(std::vector<Offset> offsets, int radius)
    : offsets_(std::move(offsets)), radius_(radius) {
    std::sort(offsets_.begin(), offsets_.end());
    offsets_.erase(std::unique(offsets_.begin(), offsets_.end()), offsets_.end());
    if (offsets_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "structuring element is empty");
    }
    if (!std::binary_search(offsets_.begin(), offsets_.end(), Offset{0, 0})) {
        throw Error(ErrorCode::InvalidArgument, "structuring element must contain the origin");
    }
    for (const auto& o : offsets_) {
        extent_ = std::max({extent_, std::abs(o.dy), std::abs(o.dx)});
    }
}

bool StructuringElement::symmetric() const {
    return std::all_of(offsets_.begin(), offsets_.end(), [this](const Offset& o) {
        return std::binary_search(offsets_.begin(), offsets_.end(), Offset{-o.dy, -o.dx});
    });
}

StructuringElement StructuringElement::reflected() const {
    std::vector<Offset> flipped;
    flipped.reserve(offsets_.size());
    for (const auto& o : offsets_) {
        flipped.push_back({-o.dy, -o.dx});
    }
    return StructuringElement(std::move(flipped), radius_);
}

StructuringElement disk(int radius) {
    if (radius < 0) {
        throw Error(ErrorCode::InvalidArgument, "disk radius must be >= 0, got " + std::to_string(radius));
    }
    std::vector<Offset> offsets;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dy * dy + dx * dx <= radius * radius) {
                offsets.push_back({dy, dx});
            }
        }
    }
    return StructuringElement(std::move(offsets), radius);
}

StructuringElement square(int half_width) {
    if (half_width < 0) {
        throw Error(ErrorCode::InvalidArgument, "square half width must be >= 0");
    }
    std::vector<Offset> offsets;
    for (int dy = -half_width; dy <= half_width; ++dy) {
        for (int dx = -half_width; dx <= half_width; ++dx) {
            offsets.push_back({dy, dx});
        }
    }
    return StructuringElement(std::move(offsets), half_width);
}

namespace {

// out(y, x) = reduce over offsets of a(y + dy, x + dx), where samples outside
// the image read as `neutral`. The image is copied into a buffer padded with
// the neutral value so the inner loop runs over whole rows without bounds
// checks.
template <typename Reduce>
GrayImage neighbourhood_reduce(const GrayImage& a, const std::vector<Offset>& offsets, int pad,
                               std::uint8_t neutral, Reduce reduce) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const std::size_t p = static_cast<std::size_t>(pad);
    const std::size_t pcols = cols + 2 * p;

    std::vector<std::uint8_t> padded((rows + 2 * p) * pcols, neutral);
    for (std::size_t y = 0; y < rows; ++y) {
        const auto src = a.row(y);
        std::copy(src.begin(), src.end(), padded.begin() + static_cast<std::ptrdiff_t>((y + p) * pcols + p));
    }

    GrayImage out(rows, cols, neutral);
    for (const Offset& o : offsets) {
        for (std::size_t y = 0; y < rows; ++y) {
            const std::uint8_t* src = padded.data() + (y + p + o.dy) * pcols + p + o.dx;
            std::uint8_t* dst = out.row(y).data();
            for (std::size_t x = 0; x < cols; ++x) {
                dst[x] = reduce(dst[x], src[x]);
            }
        }
    }
    return out;
}

struct Min {
    std::uint8_t operator()(std::uint8_t a, std::uint8_t b) const { return b < a ? b : a; }
};
struct Max {
    std::uint8_t operator()(std::uint8_t a, std::uint8_t b) const { return b > a ? b : a; }
};

} // namespace

GrayImage erode(const GrayImage& a, const StructuringElement& b) {
    return neighbourhood_reduce(a, b.offsets(), b.extent(), 255, Min{});
}

GrayImage dilate(const GrayImage& a, const StructuringElement& b) {
    return neighbourhood_reduce(a, b.reflected().offsets(), b.extent(), 0, Max{});
}

GrayImage open(const GrayImage& a, const StructuringElement& b) {
    return dilate(erode(a, b), b);
}

GrayImage close(const GrayImage& a, const StructuringElement& b) {
    return erode(dilate(a, b), b);
}

GrayImage subtract_saturating(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch, "cannot subtract " + std::to_string(b.rows()) + "x" +
                                                  std::to_string(b.cols()) + " from " + std::to_string(a.rows()) +
                                                  "x" + std::to_string(a.cols()));
    }
    GrayImage out(a.rows(), a.cols());
    auto dst = out.pixels();
    const auto lhs = a.pixels();
    const auto rhs = b.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = lhs[i] > rhs[i] ? static_cast<std::uint8_t>(lhs[i] - rhs[i]) : 0;
    }
    return out;
}

TophatMode parse_tophat_mode(std::string_view text) {
    if (text == "white") {
        return TophatMode::White;
    }
    if (text == "black") {
        return TophatMode::Black;
    }
    throw Error(ErrorCode::InvalidArgument, "top-hat mode must be 'white' or 'black', got '" + std::string(text) + "'");
}

std::string_view to_string(TophatMode mode) {
    return mode == TophatMode::White ? "white" : "black";
}

GrayImage tophat_mask(const GrayImage& original, const StructuringElement& se, TophatMode mode) {
    if (mode == TophatMode::White) {
        return subtract_saturating(original, open(original, se));
    }
    return subtract_saturating(close(original, se), original);
}

} // namespace airseg::morph
