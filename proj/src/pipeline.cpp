#include "airseg/pipeline.hpp"

#include "airseg/ingest.hpp"
#include "airseg/threshold.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>

namespace airseg::pipeline {

using nlohmann::json;

double StageTimings::total() const {
    return ingest + preprocess + morphology + segmentation + reconstruction;
}

std::string StageTimings::to_json() const {
    const json doc{{"ingest_ms", ingest},
                   {"preprocess_ms", preprocess},
                   {"morphology_ms", morphology},
                   {"segmentation_ms", segmentation},
                   {"reconstruction_ms", reconstruction},
                   {"total_ms", total()}};
    return doc.dump(2) + "\n";
}

std::string threshold_json(const entropy::ThresholdResult& result) {
    const json doc{{"t", result.t}, {"s", result.s}, {"alpha", result.alpha}, {"phi", result.phi}};
    return doc.dump(2) + "\n";
}

namespace {

// Runs one stage, adds its wall time to `slot`, and rewraps library errors.
template <typename Fn>
auto timed_stage(const char* name, double& slot, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto stop_clock = [&] {
        slot += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            stop_clock();
        } else {
            auto value = fn();
            stop_clock();
            return value;
        }
    } catch (const PipelineAborted&) {
        throw;
    } catch (const Error& e) {
        throw PipelineAborted(name, e.code(), e.what());
    } catch (const std::exception& e) {
        throw PipelineAborted(name, ErrorCode::IoError, e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing " + path.string());
    }
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    PipelineResult result;
    StageTimings& tm = result.timings;
    const engine::ParallelConfig per_slice{cfg.parallel.workers, 1};

    ingest::VolumeManifest manifest;
    const auto slices = timed_stage("ingest", tm.ingest, [&] {
        cfg.parallel.validate();
        manifest = ingest::load_manifest(cfg.manifest_path);
        if (manifest.slice_count == 0) {
            throw Error(ErrorCode::EmptyVolume, cfg.manifest_path.string() + " lists no slices");
        }
        return ingest::load_slices(manifest);
    });

    const auto gray = timed_stage("preprocess", tm.preprocess,
                                  [&] { return ingest::preprocess_volume(slices, manifest.background_value); });

    const auto masked = timed_stage("morphology", tm.morphology, [&] {
        const auto se = morph::disk(cfg.disk_radius);
        std::vector<GrayImage> out(gray.size());
        engine::parallel_for(gray.size(), per_slice, [&](std::size_t begin, std::size_t end) {
            for (std::size_t z = begin; z < end; ++z) {
                out[z] = morph::tophat_mask(gray[z], se, cfg.tophat_mode);
            }
        });
        return out;
    });

    std::vector<BinaryImage> masks(masked.size());
    result.threshold = timed_stage("segmentation", tm.segmentation, [&] {
        const entropy::EntropyParams params{cfg.alpha, cfg.levels};
        params.validate();
        std::vector<entropy::Histogram2D> partial(masked.size());
        engine::parallel_for(masked.size(), per_slice, [&](std::size_t begin, std::size_t end) {
            for (std::size_t z = begin; z < end; ++z) {
                partial[z] = entropy::histogram2d(masked[z], entropy::average_image(masked[z]), cfg.levels);
            }
        });
        entropy::Histogram2D volume_hist(cfg.levels);
        for (const auto& h : partial) {
            volume_hist += h;
        }
        const auto chosen = engine::find_threshold(volume_hist, params, cfg.parallel);
        engine::parallel_for(masked.size(), per_slice, [&](std::size_t begin, std::size_t end) {
            for (std::size_t z = begin; z < end; ++z) {
                masks[z] = threshold::apply_threshold(masked[z], chosen.t);
            }
        });
        return chosen;
    });

    timed_stage("reconstruction", tm.reconstruction, [&] {
        const auto& sp = manifest.spacing_mm;
        result.volume = volume::stack(masks, volume::Spacing{sp.slice, sp.row, sp.col});
        if (cfg.write_outputs) {
            std::filesystem::create_directories(cfg.output_dir);
            volume::export_volume(result.volume, cfg.output_dir / "volume");
            write_text(cfg.output_dir / "threshold.json", threshold_json(result.threshold));
        }
    });

    if (cfg.write_outputs) {
        timed_stage("reconstruction", tm.reconstruction,
                    [&] { write_text(cfg.output_dir / "timings.json", tm.to_json()); });
    }
    return result;
}

} // namespace airseg::pipeline
