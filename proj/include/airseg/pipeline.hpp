#pragma once

#include "airseg/engine.hpp"
#include "airseg/entropy.hpp"
#include "airseg/morphology.hpp"
#include "airseg/volume.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace airseg::pipeline {

struct PipelineConfig {
    std::filesystem::path manifest_path;
    double alpha = entropy::kDefaultAlpha;
    int disk_radius = 10;
    morph::TophatMode tophat_mode = morph::TophatMode::White;
    std::size_t levels = entropy::kDefaultLevels;
    engine::ParallelConfig parallel{1, 4096};
    std::filesystem::path output_dir = "out";
    /// When false only the in-memory result is produced.
    bool write_outputs = true;
};

/// Wall milliseconds per stage.
struct StageTimings {
    double ingest = 0.0;
    double preprocess = 0.0;
    double morphology = 0.0;
    double segmentation = 0.0;
    double reconstruction = 0.0;

    [[nodiscard]] double total() const;
    [[nodiscard]] std::string to_json() const;
};

struct PipelineResult {
    volume::VoxelVolume volume;
    StageTimings timings;
    entropy::ThresholdResult threshold;
};

/// ingest -> preprocess -> top-hat mask -> one volume-wide threshold -> binarize
/// -> stack -> export. Errors surface as PipelineAborted naming the stage.
/// Output files: volume.{json,raw,ply}, threshold.json, timings.json.
PipelineResult run_pipeline(const PipelineConfig& cfg);

std::string threshold_json(const entropy::ThresholdResult& result);

} // namespace airseg::pipeline
