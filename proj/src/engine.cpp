#include "airseg/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>

namespace airseg::engine {

void ParallelConfig::validate() const {
    if (workers < 1 || chunk_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "workers and chunk_size must both be >= 1");
    }
}

std::size_t hardware_threads() {
    return static_cast<std::size_t>(std::max(1, omp_get_num_procs()));
}

std::size_t default_workers() {
    if (const char* env = std::getenv("AIRSEG_THREADS"); env != nullptr) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<std::size_t>(value);
        }
    }
    return hardware_threads();
}

std::size_t candidate_count(std::size_t levels) {
    return levels < 2 ? 0 : (levels - 1) * (levels - 1);
}

namespace {

std::size_t chunk_count(std::size_t count, std::size_t chunk) {
    return (count + chunk - 1) / chunk;
}

// Runs task(c) for every chunk index c in [0, chunks). Chunk c goes to
// thread c % workers. The exception of the lowest failing chunk is rethrown.
template <typename Task>
void run_chunks(std::size_t chunks, std::size_t workers, Task&& task) {
    if (chunks == 0) {
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    const int threads = static_cast<int>(std::min(workers, chunks));
    const auto n = static_cast<long long>(chunks);
#pragma omp parallel for num_threads(threads) schedule(static, 1)
    for (long long c = 0; c < n; ++c) {
        try {
            task(static_cast<std::size_t>(c));
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace

void parallel_for(std::size_t count, const ParallelConfig& cfg,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    cfg.validate();
    const std::size_t chunks = chunk_count(count, cfg.chunk_size);
    run_chunks(chunks, cfg.workers, [&](std::size_t c) {
        const std::size_t begin = c * cfg.chunk_size;
        body(begin, std::min(count, begin + cfg.chunk_size));
    });
}

std::optional<ArgmaxResult> parallel_argmax(std::size_t count, const ChunkEvaluator& eval,
                                            const ParallelConfig& cfg) {
    cfg.validate();
    if (count == 0) {
        return std::nullopt;
    }
    const std::size_t chunk = std::min(cfg.chunk_size, count);
    const std::size_t chunks = chunk_count(count, chunk);
    constexpr double kNone = -std::numeric_limits<double>::infinity();

    std::vector<double> values(count);
    std::vector<double> chunk_best(chunks, kNone);
    std::vector<char> chunk_defined(chunks, 0);

    // Pass 1: evaluate and take each chunk's maximum.
    run_chunks(chunks, cfg.workers, [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        const std::span<double> out(values.data() + begin, end - begin);
        eval(begin, out);
        double best = kNone;
        bool defined = false;
        for (const double v : out) {
            if (!std::isnan(v)) {
                defined = true;
                best = std::max(best, v);
            }
        }
        chunk_best[c] = best;
        chunk_defined[c] = defined;
    });

    double global = kNone;
    bool any = false;
    for (std::size_t c = 0; c < chunks; ++c) {
        if (chunk_defined[c]) {
            any = true;
            global = std::max(global, chunk_best[c]);
        }
    }
    if (!any) {
        return std::nullopt;
    }

    // Pass 2: first index in each chunk that ties the global maximum.
    std::vector<std::size_t> chunk_first(chunks, count);
    run_chunks(chunks, cfg.workers, [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        for (std::size_t k = begin; k < end; ++k) {
            if (!std::isnan(values[k]) && entropy::ties_or_beats(values[k], global)) {
                chunk_first[c] = k;
                return;
            }
        }
    });

    const std::size_t winner = *std::min_element(chunk_first.begin(), chunk_first.end());
    return ArgmaxResult{winner, values[winner]};
}

entropy::ThresholdResult find_threshold(const entropy::Histogram2D& h, const entropy::EntropyParams& params,
                                        const ParallelConfig& cfg) {
    const entropy::ObjectiveTable table(h, params);
    const auto best = parallel_argmax(
        table.candidate_count(), [&table](std::size_t first, std::span<double> out) { table.evaluate_range(first, out); },
        cfg);
    if (!best) {
        throw Error(ErrorCode::NoValidSplit, "no valid split: every (t, s) leaves a class empty");
    }
    const auto [t, s] = table.candidate(best->index);
    return entropy::ThresholdResult{t, s, best->value, params.alpha};
}

namespace {

ParallelConfig row_bands(std::size_t rows, const ParallelConfig& cfg) {
    cfg.validate();
    const std::size_t band = std::max<std::size_t>(1, (rows + cfg.workers - 1) / cfg.workers);
    return ParallelConfig{cfg.workers, band};
}

} // namespace

AverageImage average_image(const GrayImage& f, const ParallelConfig& cfg) {
    AverageImage out(f.rows(), f.cols());
    parallel_for(f.rows(), row_bands(f.rows(), cfg),
                 [&](std::size_t begin, std::size_t end) { entropy::average_image_rows(f, begin, end, out); });
    return out;
}

entropy::Histogram2D histogram2d(const GrayImage& f, const AverageImage& g, std::size_t levels,
                                 const ParallelConfig& cfg) {
    if (!f.same_shape(g)) {
        throw Error(ErrorCode::ShapeMismatch, "image and average image differ in shape");
    }
    const ParallelConfig bands = row_bands(f.rows(), cfg);
    std::vector<entropy::Histogram2D> partial(chunk_count(f.rows(), bands.chunk_size), entropy::Histogram2D(levels));
    parallel_for(f.rows(), bands, [&](std::size_t begin, std::size_t end) {
        entropy::accumulate_rows(f, g, begin, end, partial[begin / bands.chunk_size]);
    });
    entropy::Histogram2D merged(levels);
    for (const auto& p : partial) {
        merged += p;
    }
    return merged;
}

entropy::ThresholdResult select_threshold(const GrayImage& f, const entropy::EntropyParams& params,
                                          const ParallelConfig& cfg) {
    const AverageImage g = average_image(f, cfg);
    return find_threshold(histogram2d(f, g, params.levels, cfg), params, cfg);
}

BenchReport run_bench(std::span<const GrayImage> image_set, std::span<const ParallelConfig> sweep,
                      const entropy::EntropyParams& params, std::size_t repeats) {
    if (repeats < 3) {
        throw Error(ErrorCode::InvalidArgument, "at least 3 repeats are required, got " + std::to_string(repeats));
    }
    if (image_set.empty()) {
        throw Error(ErrorCode::InvalidArgument, "benchmark needs at least one image");
    }
    params.validate();

    const ParallelConfig baseline{1, candidate_count(params.levels)};
    std::vector<ParallelConfig> configs(sweep.begin(), sweep.end());
    for (const auto& c : configs) {
        c.validate();
    }
    std::sort(configs.begin(), configs.end());
    configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
    std::erase(configs, baseline);
    configs.insert(configs.begin(), baseline);

    auto time_config = [&](const ParallelConfig& cfg) {
        std::vector<double> samples;
        samples.reserve(repeats);
        for (std::size_t r = 0; r < repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            for (const auto& image : image_set) {
                const auto result = select_threshold(image, params, cfg);
                static_cast<void>(result);
            }
            const auto stop = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
        std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(repeats / 2), samples.end());
        return std::max(samples[repeats / 2], std::numeric_limits<double>::min());
    };

    BenchReport report;
    double baseline_ms = 0.0;
    for (const auto& cfg : configs) {
        const double ms = time_config(cfg);
        const bool is_baseline = cfg == baseline;
        if (is_baseline) {
            baseline_ms = ms;
        }
        report.rows.push_back(BenchRow{
            is_baseline ? report.baseline_label
                        : "w" + std::to_string(cfg.workers) + "-c" + std::to_string(cfg.chunk_size),
            cfg.workers, cfg.chunk_size, ms, is_baseline ? 1.0 : baseline_ms / ms});
    }
    return report;
}

} // namespace airseg::engine
