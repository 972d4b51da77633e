#pragma once

#include "airseg/image.hpp"
#include "airseg/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace airseg::phantom {

struct PhantomSpec {
    std::size_t slices = 4;
    std::size_t size = 128;
    std::uint64_t seed = 7;
};

/// Synthetic chest: body ellipse in a -2000 background, two lungs, and dark
/// air tubes (a trachea splitting into two bronchi) running through the slices.
struct Phantom {
    ingest::VolumeManifest manifest; ///< data_files are bare file names
    std::vector<std::vector<std::int16_t>> raw_slices;
    std::vector<BinaryImage> truth; ///< 1 inside a tube
};

/// Deterministic for a given spec. Throws InvalidArgument when slices or size
/// is zero, or size is below 32.
Phantom generate(const PhantomSpec& spec);

/// Writes manifest.json, slice_NNN.raw and truth_NNN.pgm into dir.
/// Returns the manifest path.
std::filesystem::path write(const Phantom& phantom, const std::filesystem::path& dir);

} // namespace airseg::phantom
