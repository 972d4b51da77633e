#include "airseg/phantom.hpp"

#include "airseg/pgm.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

namespace airseg::phantom {

namespace {

constexpr int kBackgroundHu = -2000;
constexpr int kSoftTissueHu = 40;
constexpr int kLungHu = -850;
constexpr int kAirHu = -1000;
constexpr int kBoneHu = 700;
constexpr double kNoiseHu = 10.0;
constexpr int kRawOffset = 1024; // raw = HU + 1024, intercept -1024

// Approximately normal noise built from the raw 64-bit engine output so the
// sequence does not depend on the standard library's distributions.
class Noise {
public:
    explicit Noise(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            sum += static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }
        // sum of 4 U(0,1): mean 2, variance 1/3
        return (sum - 2.0) * std::sqrt(3.0);
    }

private:
    std::mt19937_64 engine_;
};

struct Ellipse {
    double cy, cx, ry, rx;
    [[nodiscard]] bool contains(double y, double x) const {
        const double u = (y - cy) / ry;
        const double v = (x - cx) / rx;
        return u * u + v * v <= 1.0;
    }
};

} // namespace

Phantom generate(const PhantomSpec& spec) {
    if (spec.slices == 0 || spec.size == 0) {
        throw Error(ErrorCode::InvalidArgument, "phantom needs at least one slice and a positive size");
    }
    if (spec.size < 32) {
        throw Error(ErrorCode::InvalidArgument, "phantom size must be at least 32");
    }
    const std::size_t n = spec.size;
    const double N = static_cast<double>(n);
    const double mid = 0.5 * N;

    const Ellipse body{mid, mid, 0.30 * N, 0.38 * N};
    const Ellipse lung_left{mid, mid - 0.21 * N, 0.20 * N, 0.13 * N};
    const Ellipse lung_right{mid, mid + 0.21 * N, 0.20 * N, 0.13 * N};
    const Ellipse spine{mid + 0.24 * N, mid, 0.04 * N, 0.04 * N};

    Phantom out;
    out.manifest.slice_count = spec.slices;
    out.manifest.rows = n;
    out.manifest.cols = n;
    out.manifest.spacing_mm = {0.7, 0.7, 2.5};
    out.manifest.rescale_slope = 1.0;
    out.manifest.rescale_intercept = -kRawOffset;
    out.manifest.background_value = kBackgroundHu;

    Noise noise(spec.seed);
    for (std::size_t z = 0; z < spec.slices; ++z) {
        const double depth = spec.slices > 1 ? static_cast<double>(z) / static_cast<double>(spec.slices - 1) : 0.0;

        // Trachea in the mediastinum; below one third of the stack it has
        // split into two bronchi that drift outwards into the lungs.
        std::vector<Ellipse> tubes;
        tubes.push_back({0.42 * N, mid, 0.04 * N, 0.04 * N});
        if (depth >= 1.0 / 3.0) {
            const double offset = (0.16 + 0.06 * depth) * N;
            tubes.push_back({0.47 * N, mid - offset, 0.03 * N, 0.03 * N});
            tubes.push_back({0.47 * N, mid + offset, 0.03 * N, 0.03 * N});
        }

        std::vector<std::int16_t> raw(n * n);
        BinaryImage truth(n, n);
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t x = 0; x < n; ++x) {
                const double py = static_cast<double>(y) + 0.5;
                const double px = static_cast<double>(x) + 0.5;
                const double jitter = noise();
                int hu = kBackgroundHu;
                if (body.contains(py, px)) {
                    double value = kSoftTissueHu;
                    if (lung_left.contains(py, px) || lung_right.contains(py, px)) {
                        value = kLungHu;
                    }
                    if (spine.contains(py, px)) {
                        value = kBoneHu;
                    }
                    bool in_tube = false;
                    for (const auto& t : tubes) {
                        in_tube = in_tube || t.contains(py, px);
                    }
                    if (in_tube) {
                        value = kAirHu;
                        truth.at(y, x) = 1;
                    }
                    hu = static_cast<int>(std::lround(value + kNoiseHu * jitter));
                }
                raw[y * n + x] = static_cast<std::int16_t>(hu + kRawOffset);
            }
        }
        char name[32];
        std::snprintf(name, sizeof name, "slice_%03zu.raw", z);
        out.manifest.data_files.emplace_back(name);
        out.raw_slices.push_back(std::move(raw));
        out.truth.push_back(std::move(truth));
    }
    return out;
}

std::filesystem::path write(const Phantom& phantom, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    }
    for (std::size_t z = 0; z < phantom.raw_slices.size(); ++z) {
        ingest::write_raw_slice(dir / phantom.manifest.data_files[z], phantom.raw_slices[z]);
        char name[32];
        std::snprintf(name, sizeof name, "truth_%03zu.pgm", z);
        pgm::write(dir / name, phantom.truth[z]);
    }
    const auto manifest_path = dir / "manifest.json";
    ingest::write_manifest(manifest_path, phantom.manifest);
    return manifest_path;
}

} // namespace airseg::phantom
