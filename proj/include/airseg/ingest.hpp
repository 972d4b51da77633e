#pragma once

#include "airseg/image.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace airseg::ingest {

inline constexpr int kMinHu = -4096;
inline constexpr int kMaxHu = 4095;
inline constexpr int kDefaultBackground = -2000;

/// Physical pixel pitch in millimetres, ordered (row, col, slice) as in the manifest.
struct SpacingMm {
    double row = 1.0;
    double col = 1.0;
    double slice = 1.0;

    friend bool operator==(const SpacingMm&, const SpacingMm&) = default;
};

/// One CT slice in Hounsfield units.
struct HuSlice {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int16_t> values;
    std::size_t slice_index = 0;
    SpacingMm spacing_mm;

    [[nodiscard]] std::int16_t at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Stand-in for DICOM series headers. Paths in data_files are resolved
/// against the manifest's directory when relative.
struct VolumeManifest {
    std::size_t slice_count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    SpacingMm spacing_mm;
    double rescale_slope = 1.0;
    double rescale_intercept = 0.0;
    int background_value = kDefaultBackground;
    std::vector<std::filesystem::path> data_files;
};

/// Parses and validates a manifest JSON file.
/// Throws Error with MissingFile, SchemaError or CountMismatch.
VolumeManifest load_manifest(const std::filesystem::path& path);

/// Serializes a manifest with the exact key set load_manifest accepts.
/// data_files are written as given (relative paths stay relative).
void write_manifest(const std::filesystem::path& path, const VolumeManifest& manifest);

/// HU = 1000 (mu - mu_water) / (mu_water - mu_air).
double hu_from_attenuation(double mu, double mu_water, double mu_air);

/// Reads every raw little-endian int16 slice and applies slope/intercept,
/// rounding half away from zero. Throws MissingFile, SizeMismatch, or
/// ValueOutOfRange when a rescaled value leaves [kMinHu, kMaxHu].
std::vector<HuSlice> load_slices(const VolumeManifest& manifest);

/// Maps a volume to 8 bits with one volume-wide linear transform.
/// Background pixels first take the minimum of the remaining values so that
/// they land on 0.
std::vector<GrayImage> preprocess_volume(std::span<const HuSlice> slices, int background_value);

/// Writes raw values as little-endian int16, the on-disk slice format.
void write_raw_slice(const std::filesystem::path& path, std::span<const std::int16_t> raw);

} // namespace airseg::ingest
