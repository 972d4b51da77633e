#include "airseg/engine.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

using namespace airseg;
using namespace airseg::engine;

namespace {

std::vector<ParallelConfig> sweep_configs(std::size_t full) {
    std::vector<ParallelConfig> out;
    for (const std::size_t w : {1, 2, 3, 4, 8}) {
        for (const std::size_t c : {std::size_t{1}, std::size_t{4}, std::size_t{64}, full}) {
            out.push_back({w, c});
        }
    }
    return out;
}

} // namespace

TEST(ParallelConfig, Validation) {
    EXPECT_NO_THROW((ParallelConfig{1, 1}.validate()));
    EXPECT_THROW((ParallelConfig{0, 1}.validate()), Error);
    EXPECT_THROW((ParallelConfig{1, 0}.validate()), Error);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
    for (const auto& cfg : sweep_configs(1000)) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(1000, cfg, [&](std::size_t b, std::size_t e) {
            ASSERT_LE(e - b, cfg.chunk_size);
            for (std::size_t k = b; k < e; ++k) {
                hits[k].fetch_add(1);
            }
        });
        for (const auto& h : hits) {
            ASSERT_EQ(h.load(), 1);
        }
    }
    EXPECT_NO_THROW(parallel_for(0, {4, 8}, [](std::size_t, std::size_t) { FAIL(); }));
}

TEST(ParallelFor, RethrowsLowestFailingChunk) {
    try {
        parallel_for(100, {4, 10}, [](std::size_t b, std::size_t) {
            if (b >= 30) {
                throw Error(ErrorCode::IoError, "chunk " + std::to_string(b));
            }
        });
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "chunk 30");
    }
}

TEST(ParallelArgmax, TiesGoToSmallestIndex) {
    const std::vector<double> values{1.0, 3.0, 2.0, 3.0, 3.0 - 1e-15, 0.5};
    const ChunkEvaluator eval = [&](std::size_t first, std::span<double> out) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = values[first + k];
        }
    };
    for (const auto& cfg : sweep_configs(values.size())) {
        const auto r = parallel_argmax(values.size(), eval, cfg);
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(r->index, 1u);
        EXPECT_EQ(r->value, 3.0);
    }
}

TEST(ParallelArgmax, SkipsUndefinedAndReportsNone) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> values{nan, nan, -2.0, nan};
    const ChunkEvaluator eval = [&](std::size_t first, std::span<double> out) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = values[first + k];
        }
    };
    const auto r = parallel_argmax(values.size(), eval, {2, 1});
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->index, 2u);
    const ChunkEvaluator none = [&](std::size_t, std::span<double> out) {
        std::fill(out.begin(), out.end(), nan);
    };
    EXPECT_FALSE(parallel_argmax(10, none, {3, 2}).has_value());
}

TEST(FindThreshold, SameAnswerForEveryPartitioning) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 4; ++trial) {
        const auto h = oracle::random_histogram(rng, 40, 0.5);
        for (const double alpha : {0.5, 0.8, 1.0, 2.0}) {
            const entropy::EntropyParams params{alpha, 40};
            const auto serial = entropy::find_threshold(h, params);
            for (const auto& cfg : sweep_configs(candidate_count(40))) {
                const auto r = find_threshold(h, params, cfg);
                ASSERT_EQ(r, serial) << "workers " << cfg.workers << " chunk " << cfg.chunk_size;
            }
        }
    }
}

TEST(FindThreshold, MatchesNaiveOracle) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 6; ++trial) {
        const auto h = oracle::random_histogram(rng, 16);
        const auto naive = oracle::naive_find_threshold(h, 0.8);
        const auto r = find_threshold(h, {0.8, 16}, {4, 7});
        EXPECT_EQ(r.t, naive.t);
        EXPECT_EQ(r.s, naive.s);
        EXPECT_NEAR(r.phi, naive.phi, 1e-9);
    }
}

TEST(FindThreshold, NoValidSplit) {
    entropy::Histogram2D h(8);
    h.add(3, 3, 9);
    try {
        find_threshold(h, {0.8, 8}, {4, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoValidSplit);
    }
}

TEST(RowBanded, AverageAndHistogramEqualSerial) {
    std::mt19937_64 rng(17);
    for (const auto& [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 9}, {33, 17}, {64, 64}}) {
        const auto f = oracle::random_image(rng, rows, cols);
        const auto g = entropy::average_image(f);
        const auto h = entropy::histogram2d(f, g);
        for (const auto& cfg : sweep_configs(rows)) {
            ASSERT_EQ(average_image(f, cfg), g);
            ASSERT_EQ(histogram2d(f, g, 256, cfg), h);
        }
    }
}

TEST(SelectThreshold, EqualsComposedSerialSteps) {
    std::mt19937_64 rng(18);
    const auto f = oracle::random_image(rng, 48, 40, 0, 120);
    const auto serial = entropy::find_threshold(entropy::histogram2d(f, entropy::average_image(f)), {});
    EXPECT_EQ(select_threshold(f, {}, {3, 100}), serial);
}

TEST(CandidateCount, SquareOfSide) {
    EXPECT_EQ(candidate_count(256), 255u * 255u);
    EXPECT_EQ(candidate_count(2), 1u);
}

TEST(DefaultWorkers, HonoursEnvironment) {
    ::setenv("AIRSEG_THREADS", "3", 1);
    EXPECT_EQ(default_workers(), 3u);
    ::setenv("AIRSEG_THREADS", "junk", 1);
    EXPECT_EQ(default_workers(), hardware_threads());
    ::unsetenv("AIRSEG_THREADS");
    EXPECT_EQ(default_workers(), hardware_threads());
    EXPECT_GE(hardware_threads(), 1u);
}

TEST(RunBench, BaselineFirstWithUnitSpeedup) {
    std::mt19937_64 rng(1);
    const std::vector<GrayImage> images{oracle::random_image(rng, 24, 24)};
    std::vector<ParallelConfig> sweep;
    for (const std::size_t w : {1, 2, 4}) {
        for (const std::size_t c : {64, 1024, 8192}) {
            sweep.push_back({w, c});
        }
    }
    const auto report = run_bench(images, sweep, {}, 3);
    ASSERT_EQ(report.rows.size(), 10u);
    EXPECT_EQ(report.rows.front().label, "baseline");
    EXPECT_EQ(report.baseline().speedup, 1.0);
    EXPECT_EQ(report.baseline().workers, 1u);
    EXPECT_EQ(report.baseline().chunk_size, candidate_count(256));
    for (const auto& row : report.rows) {
        EXPECT_GT(row.wall_time_ms, 0.0);
        EXPECT_NEAR(row.speedup, report.baseline().wall_time_ms / row.wall_time_ms, 1e-12);
    }
    EXPECT_EQ(report.rows[1].label, "w1-c64");
}

TEST(RunBench, BaselineOnlySweepAndErrors) {
    std::mt19937_64 rng(2);
    const std::vector<GrayImage> images{oracle::random_image(rng, 8, 8)};
    const std::vector<ParallelConfig> only{{1, candidate_count(256)}};
    EXPECT_EQ(run_bench(images, only, {}, 3).rows.size(), 1u);
    EXPECT_THROW(run_bench(images, only, {}, 2), Error);
    EXPECT_THROW(run_bench({}, only, {}, 3), Error);
}

TEST(BenchReport, CsvAndJsonRoundTrip) {
    BenchReport report;
    report.rows = {{"baseline", 1, 65025, 12.5, 1.0}, {"w4-c1024", 4, 1024, 3.3333333333333335, 3.75}};
    const auto csv = report.to_csv();
    EXPECT_EQ(csv.rfind("label,workers,chunk_size,wall_time_ms,speedup\n", 0), 0u);
    EXPECT_EQ(BenchReport::from_csv(csv), report);
    EXPECT_EQ(BenchReport::from_json(report.to_json()), report);
    EXPECT_EQ(BenchReport::from_json(report.to_json()).baseline().label, "baseline");
}
