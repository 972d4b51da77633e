#pragma once

#include "airseg/entropy.hpp"
#include "airseg/image.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace airseg::engine {

/// How a data-parallel loop is split. chunk_size is the number of items
/// handed to a task; the CPU analogue of tasks-per-thread on a GPU grid.
struct ParallelConfig {
    std::size_t workers = 1;
    std::size_t chunk_size = 1;

    /// Throws InvalidArgument unless both fields are >= 1.
    void validate() const;

    friend bool operator==(const ParallelConfig&, const ParallelConfig&) = default;
    friend auto operator<=>(const ParallelConfig&, const ParallelConfig&) = default;
};

/// Worker count from AIRSEG_THREADS when set to a positive integer,
/// otherwise the number of hardware threads.
std::size_t default_workers();

/// Number of hardware threads the runtime reports.
std::size_t hardware_threads();

/// Calls body(begin, end) for contiguous chunks of [0, count). Chunk c is
/// always run by worker c % workers. body must not touch shared mutable state
/// outside its own range.
void parallel_for(std::size_t count, const ParallelConfig& cfg,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

struct ArgmaxResult {
    std::size_t index = 0;
    double value = 0.0;

    friend bool operator==(const ArgmaxResult&, const ArgmaxResult&) = default;
};

/// Evaluates candidates [first, first + out.size()) into out; NaN marks an
/// undefined candidate.
using ChunkEvaluator = std::function<void(std::size_t first, std::span<double> out)>;

/// Chunked argmax over [0, count). Picks the maximum value and, among
/// candidates tied with it under entropy::kTieTolerance, the smallest index.
/// The answer is the same for every (workers, chunk_size). Returns nullopt
/// when every candidate is undefined.
std::optional<ArgmaxResult> parallel_argmax(std::size_t count, const ChunkEvaluator& eval,
                                            const ParallelConfig& cfg);

/// Same search as entropy::find_threshold with the candidate scan spread
/// over workers. Throws NoValidSplit.
entropy::ThresholdResult find_threshold(const entropy::Histogram2D& h,
                                        const entropy::EntropyParams& params,
                                        const ParallelConfig& cfg);

/// Row-banded average image; identical to entropy::average_image.
AverageImage average_image(const GrayImage& f, const ParallelConfig& cfg);

/// One partial histogram per row band, merged by addition.
entropy::Histogram2D histogram2d(const GrayImage& f, const AverageImage& g, std::size_t levels,
                                 const ParallelConfig& cfg);

/// Full threshold selection for one image: average image, histogram, search.
entropy::ThresholdResult select_threshold(const GrayImage& f, const entropy::EntropyParams& params,
                                          const ParallelConfig& cfg);

struct BenchRow {
    std::string label;
    std::size_t workers = 1;
    std::size_t chunk_size = 1;
    double wall_time_ms = 0.0;
    double speedup = 1.0;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchReport {
    std::string baseline_label = "baseline";
    std::vector<BenchRow> rows;

    [[nodiscard]] const BenchRow& baseline() const;
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
    static BenchReport from_csv(const std::string& text);
    static BenchReport from_json(const std::string& text);

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// Times the entropy-threshold stage over image_set for every sweep entry
/// and for the baseline (one worker, one chunk covering every candidate).
/// Each row holds the median of `repeats` runs. Throws InvalidArgument when
/// repeats < 3 or the image set is empty.
BenchReport run_bench(std::span<const GrayImage> image_set, std::span<const ParallelConfig> sweep,
                      const entropy::EntropyParams& params, std::size_t repeats);

/// Candidate count of the (t, s) search at the given level count.
std::size_t candidate_count(std::size_t levels);

} // namespace airseg::engine
