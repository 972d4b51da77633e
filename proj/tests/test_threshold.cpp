#include "airseg/threshold.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace airseg;
using namespace airseg::threshold;

TEST(ApplyThreshold, InclusiveAtT) {
    const GrayImage f(1, 3, std::vector<std::uint8_t>{0, 100, 200});
    EXPECT_EQ(apply_threshold(f, 100), BinaryImage(1, 3, std::vector<std::uint8_t>{0, 1, 1}));
}

TEST(ApplyThreshold, ExtremeThresholds) {
    std::mt19937_64 rng(3);
    const auto f = oracle::random_image(rng, 9, 11);
    EXPECT_EQ(apply_threshold(f, 0), BinaryImage(9, 11, 1));
    const auto top = apply_threshold(f, 255);
    for (std::size_t k = 0; k < f.size(); ++k) {
        EXPECT_EQ(top.pixels()[k], f.pixels()[k] == 255 ? 1 : 0);
    }
    EXPECT_EQ(apply_threshold(f, 256), BinaryImage(9, 11, 0));
}

TEST(ApplyThreshold, MonotoneInT) {
    std::mt19937_64 rng(5);
    const auto f = oracle::random_image(rng, 16, 16);
    for (std::size_t t = 0; t < 255; ++t) {
        const auto lo = apply_threshold(f, t);
        const auto hi = apply_threshold(f, t + 1);
        for (std::size_t k = 0; k < f.size(); ++k) {
            ASSERT_GE(lo.pixels()[k], hi.pixels()[k]);
        }
    }
}

TEST(ApplyThreshold, CountEqualsHistogramTail) {
    std::mt19937_64 rng(6);
    const auto f = oracle::random_image(rng, 20, 17);
    const auto hist = intensity_histogram(f);
    for (std::size_t t = 0; t < 256; ++t) {
        std::uint64_t tail = 0;
        for (std::size_t v = t; v < 256; ++v) {
            tail += hist[v];
        }
        ASSERT_EQ(foreground_count(apply_threshold(f, t)), tail);
    }
}

TEST(ApplyThreshold, RowBandsMatchWholeImage) {
    std::mt19937_64 rng(7);
    const auto f = oracle::random_image(rng, 13, 5);
    BinaryImage out(13, 5);
    apply_threshold_rows(f, 90, 0, 4, out);
    apply_threshold_rows(f, 90, 4, 13, out);
    EXPECT_EQ(out, apply_threshold(f, 90));
}

TEST(ApplyThreshold, BinaryInputIsIdempotentAfterRender) {
    std::mt19937_64 rng(8);
    const auto f = oracle::random_binary(rng, 10, 10, 0.3);
    const auto mask = apply_threshold(f, 128);
    const auto shown = render(mask);
    EXPECT_EQ(shown, f);
    EXPECT_EQ(apply_threshold(shown, 128), mask);
}

TEST(IntensityHistogram, SumsToPixelCount) {
    std::mt19937_64 rng(9);
    const auto f = oracle::random_image(rng, 7, 3);
    std::uint64_t sum = 0;
    for (const auto c : intensity_histogram(f)) {
        sum += c;
    }
    EXPECT_EQ(sum, 21u);
}
