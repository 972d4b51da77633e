#pragma once

#include "airseg/image.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace airseg::entropy {

inline constexpr std::size_t kDefaultLevels = 256;
inline constexpr double kDefaultAlpha = 0.8;

/// Relative tolerance under which two objective values count as tied.
/// Ties go to the lexicographically smallest (t, s).
inline constexpr double kTieTolerance = 1e-12;

/// g(x, y): floor of the 3x3 mean, edge pixels replicated at the border.
AverageImage average_image(const GrayImage& f);

/// Computes rows [row_begin, row_end) of average_image into out, which must
/// already have f's shape. Lets callers split the work by row bands.
void average_image_rows(const GrayImage& f, std::size_t row_begin, std::size_t row_end,
                        AverageImage& out);

/// Joint counts of (intensity, neighbourhood average) pairs.
class Histogram2D {
public:
    Histogram2D() = default;
    explicit Histogram2D(std::size_t levels);
    /// Row-major counts[i * levels + j]; throws InvalidArgument on a size mismatch.
    Histogram2D(std::size_t levels, std::vector<std::uint64_t> counts);

    [[nodiscard]] std::size_t levels() const noexcept { return levels_; }
    [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
    [[nodiscard]] std::uint64_t count(std::size_t i, std::size_t j) const {
        return counts_[i * levels_ + j];
    }
    [[nodiscard]] double probability(std::size_t i, std::size_t j) const;
    [[nodiscard]] std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    void add(std::size_t i, std::size_t j, std::uint64_t n = 1);

    /// Cell-wise sum. Throws ShapeMismatch when the level counts differ.
    Histogram2D& operator+=(const Histogram2D& other);

    friend bool operator==(const Histogram2D&, const Histogram2D&) = default;

private:
    std::size_t levels_ = 0;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Throws ShapeMismatch when f and g differ in shape, LevelOverflow when a
/// pixel is >= levels.
Histogram2D histogram2d(const GrayImage& f, const AverageImage& g,
                        std::size_t levels = kDefaultLevels);

/// Tallies rows [row_begin, row_end) into an existing histogram.
void accumulate_rows(const GrayImage& f, const AverageImage& g, std::size_t row_begin,
                     std::size_t row_end, Histogram2D& h);

struct EntropyParams {
    double alpha = kDefaultAlpha;
    std::size_t levels = kDefaultLevels;

    /// Throws InvalidArgument unless alpha > 0 (and finite) and levels >= 2.
    void validate() const;
};

struct ThresholdResult {
    std::size_t t = 0; ///< threshold on the intensity axis; the only one used to binarize
    std::size_t s = 0; ///< threshold on the average axis
    double phi = 0.0;
    double alpha = kDefaultAlpha;

    friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

struct ClassMasses {
    double background = 0.0; ///< P1: i <= t, j <= s
    double object = 0.0;     ///< P2: i > t, j > s
};

/// Sums cell probabilities of the low/low and high/high quadrants.
ClassMasses class_masses(const Histogram2D& h, std::size_t t, std::size_t s);

/// phi = H1 + H2 + (1 - alpha) H1 H2 by direct summation over the two
/// quadrants. Empty classes give nullopt. alpha == 1 uses the Shannon
/// limit, where the cross term vanishes.
std::optional<double> tsallis_objective(const Histogram2D& h, std::size_t t, std::size_t s,
                                        const EntropyParams& params);

/// Prefix/suffix tables over a histogram so that any candidate (t, s)
/// evaluates in O(1). Immutable after construction and safe to share
/// between threads.
class ObjectiveTable {
public:
    ObjectiveTable(const Histogram2D& h, const EntropyParams& params);

    [[nodiscard]] std::size_t levels() const noexcept { return levels_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }

    /// Candidates are (t, s) in [0, L-2]^2, numbered in lexicographic order.
    [[nodiscard]] std::size_t candidate_count() const noexcept { return side_ * side_; }
    [[nodiscard]] std::pair<std::size_t, std::size_t> candidate(std::size_t index) const noexcept {
        return {index / side_, index % side_};
    }

    [[nodiscard]] std::optional<double> evaluate(std::size_t t, std::size_t s) const;

    /// Writes phi for candidates [first, first + out.size()); NaN marks an
    /// empty class.
    void evaluate_range(std::size_t first, std::span<double> out) const;

private:
    std::size_t levels_;
    std::size_t side_;
    double alpha_;
    bool shannon_;
    // low[i*L+j] covers cells i' <= i, j' <= j; high[i*L+j] covers i' >= i, j' >= j.
    std::vector<std::uint64_t> low_count_;
    std::vector<std::uint64_t> high_count_;
    std::vector<double> low_weight_;
    std::vector<double> high_weight_;
};

/// True when value is tied with (or above) best under kTieTolerance.
[[nodiscard]] bool ties_or_beats(double value, double best);

/// Serial scan over every candidate. Throws NoValidSplit when all
/// candidates leave a class empty.
ThresholdResult find_threshold(const Histogram2D& h, const EntropyParams& params);

} // namespace airseg::entropy
