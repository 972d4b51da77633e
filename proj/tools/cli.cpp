#include "cli.hpp"

#include "airseg/engine.hpp"
#include "airseg/ingest.hpp"
#include "airseg/morphology.hpp"
#include "airseg/pgm.hpp"
#include "airseg/phantom.hpp"
#include "airseg/pipeline.hpp"
#include "airseg/threshold.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace airseg::cli {

namespace {

namespace fs = std::filesystem;

struct SegmentArgs {
    std::string manifest;
    std::string out = "out";
    double alpha = entropy::kDefaultAlpha;
    int disk = 10;
    std::string tophat = "white";
    std::vector<std::size_t> workers;
    std::vector<std::size_t> chunks;
    std::size_t levels = entropy::kDefaultLevels;
};

struct ThresholdArgs {
    std::string input;
    std::string out = "out";
    double alpha = entropy::kDefaultAlpha;
    std::size_t levels = entropy::kDefaultLevels;
    std::vector<std::size_t> workers;
};

struct MorphArgs {
    std::string input;
    std::string out = "out";
    int disk = 10;
    std::string tophat = "white";
};

struct BenchArgs {
    std::size_t size = 512;
    std::vector<std::size_t> workers{1, 2, 4};
    std::vector<std::size_t> chunks{1, 64, 4096};
    std::size_t repeats = 5;
    double alpha = entropy::kDefaultAlpha;
    std::size_t levels = entropy::kDefaultLevels;
    std::uint64_t seed = 7;
    std::string input;
    std::string out = "bench_out";
};

struct PhantomArgs {
    std::size_t slices = 4;
    std::size_t size = 128;
    std::uint64_t seed = 7;
    std::string out = "phantom";
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing " + path.string());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    }
}

engine::ParallelConfig first_config(const std::vector<std::size_t>& workers, const std::vector<std::size_t>& chunks) {
    return {workers.empty() ? engine::default_workers() : workers.front(), chunks.empty() ? 4096 : chunks.front()};
}

int cmd_segment(const SegmentArgs& a, std::ostream& out) {
    pipeline::PipelineConfig cfg;
    cfg.manifest_path = a.manifest;
    cfg.output_dir = a.out;
    cfg.alpha = a.alpha;
    cfg.disk_radius = a.disk;
    cfg.tophat_mode = morph::parse_tophat_mode(a.tophat);
    cfg.levels = a.levels;
    cfg.parallel = first_config(a.workers, a.chunks);
    const auto result = pipeline::run_pipeline(cfg);
    const auto& d = result.volume.dims();
    out << "threshold t=" << result.threshold.t << " s=" << result.threshold.s << " phi=" << result.threshold.phi
        << "\nvolume " << d.nz << "x" << d.ny << "x" << d.nx << ", " << result.volume.count_set()
        << " voxels set\nwrote " << (fs::path(a.out) / "volume.json").string() << '\n';
    return 0;
}

int cmd_threshold(const ThresholdArgs& a, std::ostream& out) {
    const GrayImage image = pgm::read(a.input);
    const entropy::EntropyParams params{a.alpha, a.levels};
    params.validate();
    const auto cfg = first_config(a.workers, {});
    const auto result = engine::select_threshold(image, params, cfg);
    const auto mask = threshold::apply_threshold(image, result.t);
    ensure_dir(a.out);
    write_text(fs::path(a.out) / "threshold.json", pipeline::threshold_json(result));
    pgm::write(fs::path(a.out) / "mask.pgm", mask);
    out << "t=" << result.t << " s=" << result.s << " phi=" << result.phi << " foreground="
        << threshold::foreground_count(mask) << '\n';
    return 0;
}

int cmd_morph(const MorphArgs& a, std::ostream& out) {
    const GrayImage image = pgm::read(a.input);
    const auto se = morph::disk(a.disk);
    const auto mode = morph::parse_tophat_mode(a.tophat);
    ensure_dir(a.out);
    pgm::write(fs::path(a.out) / "opened.pgm", morph::open(image, se));
    pgm::write(fs::path(a.out) / "mask.pgm", morph::tophat_mask(image, se, mode));
    out << "wrote " << (fs::path(a.out) / "mask.pgm").string() << " (" << morph::to_string(mode) << " top-hat, disk "
        << a.disk << ")\n";
    return 0;
}

GrayImage bench_image(const BenchArgs& a) {
    if (!a.input.empty()) {
        return pgm::read(a.input);
    }
    const auto ph = phantom::generate({1, a.size, a.seed});
    ingest::HuSlice slice;
    slice.rows = slice.cols = a.size;
    slice.values.resize(a.size * a.size);
    for (std::size_t i = 0; i < slice.values.size(); ++i) {
        slice.values[i] = static_cast<std::int16_t>(ph.raw_slices[0][i] + ph.manifest.rescale_intercept);
    }
    return ingest::preprocess_volume(std::span(&slice, 1), ph.manifest.background_value).front();
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    const std::vector<GrayImage> images{bench_image(a)};
    std::vector<engine::ParallelConfig> sweep;
    for (const auto w : a.workers) {
        for (const auto c : a.chunks) {
            sweep.push_back({w, c});
        }
    }
    const auto report = engine::run_bench(images, sweep, {a.alpha, a.levels}, a.repeats);
    ensure_dir(a.out);
    write_text(fs::path(a.out) / "bench.csv", report.to_csv());
    write_text(fs::path(a.out) / "bench.json", report.to_json());

    out << std::left << std::setw(16) << "label" << std::right << std::setw(9) << "workers" << std::setw(12)
        << "chunk_size" << std::setw(14) << "wall_ms" << std::setw(10) << "speedup" << '\n';
    for (const auto& r : report.rows) {
        out << std::left << std::setw(16) << r.label << std::right << std::setw(9) << r.workers << std::setw(12)
            << r.chunk_size << std::setw(14) << std::fixed << std::setprecision(3) << r.wall_time_ms << std::setw(10)
            << std::setprecision(2) << r.speedup << '\n';
    }
    out.unsetf(std::ios::floatfield);
    return 0;
}

int cmd_export_phantom(const PhantomArgs& a, std::ostream& out) {
    const auto ph = phantom::generate({a.slices, a.size, a.seed});
    const auto manifest = phantom::write(ph, a.out);
    std::size_t truth_voxels = 0;
    for (const auto& m : ph.truth) {
        truth_voxels += threshold::foreground_count(m);
    }
    out << "wrote " << manifest.string() << " (" << a.slices << " slices, " << truth_voxels
        << " ground-truth voxels)\n";
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Airway segmentation from CT slices via 2D Tsallis-entropy thresholding", "airseg"};
    app.require_subcommand(1, 1);

    SegmentArgs seg;
    auto* segment = app.add_subcommand("segment", "Run the full pipeline on a volume manifest");
    segment->add_option("--manifest", seg.manifest, "Volume manifest JSON")->required();
    segment->add_option("--out", seg.out, "Output directory")->capture_default_str();
    segment->add_option("--alpha", seg.alpha, "Tsallis alpha (> 0)")->capture_default_str()->check(CLI::PositiveNumber);
    segment->add_option("--disk", seg.disk, "Disk radius of the structuring element")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    segment->add_option("--tophat", seg.tophat, "white|black")->capture_default_str()->check(CLI::IsMember({"white", "black"}));
    segment->add_option("--workers", seg.workers, "Worker count (default: AIRSEG_THREADS or hardware threads)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    segment->add_option("--chunks", seg.chunks, "Candidates per task")->delimiter(',')->check(CLI::PositiveNumber);
    segment->add_option("--levels", seg.levels, "Gray levels")->capture_default_str()->check(CLI::Range(2, 256));

    ThresholdArgs thr;
    auto* thresh = app.add_subcommand("threshold", "Select a threshold for one PGM and write its mask");
    thresh->add_option("--input", thr.input, "Binary PGM (P5, maxval 255)")->required();
    thresh->add_option("--out", thr.out, "Output directory")->capture_default_str();
    thresh->add_option("--alpha", thr.alpha, "Tsallis alpha (> 0)")->capture_default_str()->check(CLI::PositiveNumber);
    thresh->add_option("--levels", thr.levels, "Gray levels")->capture_default_str()->check(CLI::Range(2, 256));
    thresh->add_option("--workers", thr.workers, "Worker count")->delimiter(',')->check(CLI::PositiveNumber);

    MorphArgs mor;
    auto* morph_cmd = app.add_subcommand("morph", "Write the opening and top-hat mask of one PGM");
    morph_cmd->add_option("--input", mor.input, "Binary PGM (P5, maxval 255)")->required();
    morph_cmd->add_option("--out", mor.out, "Output directory")->capture_default_str();
    morph_cmd->add_option("--disk", mor.disk, "Disk radius")->capture_default_str()->check(CLI::NonNegativeNumber);
    morph_cmd->add_option("--tophat", mor.tophat, "white|black")->capture_default_str()->check(CLI::IsMember({"white", "black"}));

    BenchArgs ben;
    auto* bench = app.add_subcommand("bench", "Time the threshold search across worker/chunk configurations");
    bench->add_option("--size", ben.size, "Side of the synthetic test image")->capture_default_str()->check(CLI::Range(32, 8192));
    bench->add_option("--input", ben.input, "Use this PGM instead of a synthetic image");
    bench->add_option("--workers", ben.workers, "Comma-separated worker counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--chunks", ben.chunks, "Comma-separated chunk sizes")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--repeats", ben.repeats, "Repeats per configuration (>= 3)")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{3}, std::size_t{1000}));
    bench->add_option("--alpha", ben.alpha, "Tsallis alpha (> 0)")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--levels", ben.levels, "Gray levels")->capture_default_str()->check(CLI::Range(2, 256));
    bench->add_option("--seed", ben.seed, "Seed of the synthetic image")->capture_default_str();
    bench->add_option("--out", ben.out, "Directory for bench.csv and bench.json")->capture_default_str();

    PhantomArgs pha;
    auto* phantom_cmd = app.add_subcommand("export-phantom", "Write a synthetic CT volume with ground-truth masks");
    phantom_cmd->add_option("--slices", pha.slices, "Slice count")->capture_default_str()->check(CLI::PositiveNumber);
    phantom_cmd->add_option("--size", pha.size, "Slice side in pixels (>= 32)")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{32}, std::size_t{8192}));
    phantom_cmd->add_option("--seed", pha.seed, "Random seed")->capture_default_str();
    phantom_cmd->add_option("--out", pha.out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (segment->parsed()) return cmd_segment(seg, out);
        if (thresh->parsed()) return cmd_threshold(thr, out);
        if (morph_cmd->parsed()) return cmd_morph(mor, out);
        if (bench->parsed()) return cmd_bench(ben, out);
        if (phantom_cmd->parsed()) return cmd_export_phantom(pha, out);
    } catch (const Error& e) {
        const auto code = e.code() == ErrorCode::PipelineAborted ? static_cast<const PipelineAborted&>(e).cause() : e.code();
        if (code == ErrorCode::NoValidSplit) {
            err << "error: no valid split (" << e.what() << ")\n";
        } else {
            err << "error: " << e.what() << '\n';
        }
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace airseg::cli
