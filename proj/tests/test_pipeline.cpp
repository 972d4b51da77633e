#include "airseg/phantom.hpp"
#include "airseg/pipeline.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace airseg;

namespace {

std::vector<std::uint8_t> flatten(const std::vector<BinaryImage>& masks) {
    std::vector<std::uint8_t> out;
    for (const auto& m : masks) {
        out.insert(out.end(), m.pixels().begin(), m.pixels().end());
    }
    return out;
}

pipeline::PipelineConfig phantom_config(const testutil::TempDir& dir, const phantom::Phantom& ph) {
    pipeline::PipelineConfig cfg;
    cfg.manifest_path = phantom::write(ph, dir / "in");
    cfg.output_dir = dir / "out";
    cfg.tophat_mode = morph::TophatMode::Black;
    return cfg;
}

} // namespace

TEST(Phantom, DeterministicAndValidated) {
    const auto a = phantom::generate({2, 64, 11});
    const auto b = phantom::generate({2, 64, 11});
    EXPECT_EQ(a.raw_slices, b.raw_slices);
    EXPECT_EQ(a.truth, b.truth);
    EXPECT_NE(a.raw_slices, phantom::generate({2, 64, 12}).raw_slices);
    EXPECT_THROW(phantom::generate({0, 64, 1}), Error);
    EXPECT_THROW(phantom::generate({2, 16, 1}), Error);
    std::size_t truth = 0;
    for (const auto& m : a.truth) {
        for (const auto p : m.pixels()) {
            truth += p;
        }
    }
    EXPECT_GT(truth, 0u);
}

TEST(Pipeline, RecoversPhantomAirways) {
    testutil::TempDir dir;
    const auto ph = phantom::generate({4, 128, 7});
    const auto result = pipeline::run_pipeline(phantom_config(dir, ph));
    EXPECT_EQ(result.volume.dims(), (volume::Dims{4, 128, 128}));
    EXPECT_EQ(result.volume.spacing(), (volume::Spacing{2.5, 0.7, 0.7}));
    EXPECT_GE(volume::dice(result.volume.voxels(), flatten(ph.truth)), 0.8);
}

TEST(Pipeline, WritesOutputs) {
    testutil::TempDir dir;
    const auto cfg = phantom_config(dir, phantom::generate({2, 64, 3}));
    const auto result = pipeline::run_pipeline(cfg);
    for (const char* name : {"volume.json", "volume.raw", "volume.ply", "threshold.json", "timings.json"}) {
        EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / name)) << name;
    }
    EXPECT_EQ(volume::load_volume(cfg.output_dir / "volume.json"), result.volume);
    EXPECT_EQ(volume::ply_vertex_count(cfg.output_dir / "volume.ply"), result.volume.count_set());

    const auto thr = nlohmann::json::parse(testutil::read_file(cfg.output_dir / "threshold.json"));
    EXPECT_EQ(thr.at("t").get<std::size_t>(), result.threshold.t);
    EXPECT_EQ(thr.at("s").get<std::size_t>(), result.threshold.s);
    const auto tm = nlohmann::json::parse(testutil::read_file(cfg.output_dir / "timings.json"));
    for (const char* key : {"ingest_ms", "preprocess_ms", "morphology_ms", "segmentation_ms", "reconstruction_ms"}) {
        ASSERT_TRUE(tm.contains(key)) << key;
        EXPECT_GE(tm.at(key).get<double>(), 0.0);
    }
}

TEST(Pipeline, RerunsAreByteIdentical) {
    testutil::TempDir dir;
    auto cfg = phantom_config(dir, phantom::generate({2, 64, 5}));
    pipeline::run_pipeline(cfg);
    const auto first_raw = testutil::read_file(cfg.output_dir / "volume.raw");
    const auto first_ply = testutil::read_file(cfg.output_dir / "volume.ply");
    const auto first_thr = testutil::read_file(cfg.output_dir / "threshold.json");
    pipeline::run_pipeline(cfg);
    EXPECT_EQ(testutil::read_file(cfg.output_dir / "volume.raw"), first_raw);
    EXPECT_EQ(testutil::read_file(cfg.output_dir / "volume.ply"), first_ply);
    EXPECT_EQ(testutil::read_file(cfg.output_dir / "threshold.json"), first_thr);
}

TEST(Pipeline, WorkerCountDoesNotChangeResult) {
    testutil::TempDir dir;
    auto cfg = phantom_config(dir, phantom::generate({2, 64, 9}));
    cfg.write_outputs = false;
    cfg.parallel = {1, 65025};
    const auto one = pipeline::run_pipeline(cfg);
    cfg.parallel = {4, 37};
    const auto four = pipeline::run_pipeline(cfg);
    EXPECT_EQ(one.volume, four.volume);
    EXPECT_EQ(one.threshold, four.threshold);
    EXPECT_FALSE(std::filesystem::exists(cfg.output_dir));
}

TEST(Pipeline, EmptyManifestAbortsAtIngest) {
    testutil::TempDir dir;
    ingest::VolumeManifest m;
    m.rows = m.cols = 8;
    ingest::write_manifest(dir / "empty.json", m);
    pipeline::PipelineConfig cfg;
    cfg.manifest_path = dir / "empty.json";
    cfg.output_dir = dir / "out";
    try {
        pipeline::run_pipeline(cfg);
        FAIL();
    } catch (const PipelineAborted& e) {
        EXPECT_EQ(e.stage(), "ingest");
        EXPECT_EQ(e.cause(), ErrorCode::EmptyVolume);
    }
}

TEST(Pipeline, MissingSliceAbortsAtIngest) {
    testutil::TempDir dir;
    auto cfg = phantom_config(dir, phantom::generate({2, 64, 1}));
    std::filesystem::remove(dir / "in" / "slice_001.raw");
    try {
        pipeline::run_pipeline(cfg);
        FAIL();
    } catch (const PipelineAborted& e) {
        EXPECT_EQ(e.stage(), "ingest");
        EXPECT_EQ(e.cause(), ErrorCode::MissingFile);
        EXPECT_NE(std::string(e.what()).find("slice_001.raw"), std::string::npos);
    }
}

TEST(StageTimings, TotalAndJson) {
    pipeline::StageTimings t{1.0, 2.0, 3.0, 4.0, 5.0};
    EXPECT_DOUBLE_EQ(t.total(), 15.0);
    const auto j = nlohmann::json::parse(t.to_json());
    EXPECT_DOUBLE_EQ(j.at("segmentation_ms").get<double>(), 4.0);
}
