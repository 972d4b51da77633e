#pragma once

#include "airseg/image.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace airseg::volume {

struct Dims {
    std::size_t nz = 0;
    std::size_t ny = 0;
    std::size_t nx = 0;

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Voxel pitch in millimetres, (z, y, x).
struct Spacing {
    double z = 1.0;
    double y = 1.0;
    double x = 1.0;

    friend bool operator==(const Spacing&, const Spacing&) = default;
};

/// Binary voxel grid, slice-major (z, then y, then x).
class VoxelVolume {
public:
    VoxelVolume() = default;
    /// Throws SizeMismatch on a voxel count mismatch and InvalidArgument
    /// when a spacing component is not positive.
    VoxelVolume(Dims dims, Spacing spacing, std::vector<std::uint8_t> voxels);

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] const Spacing& spacing() const noexcept { return spacing_; }
    [[nodiscard]] std::span<const std::uint8_t> voxels() const noexcept { return voxels_; }
    [[nodiscard]] bool at(std::size_t z, std::size_t y, std::size_t x) const {
        return voxels_[(z * dims_.ny + y) * dims_.nx + x] != 0;
    }
    [[nodiscard]] std::size_t count_set() const;

    friend bool operator==(const VoxelVolume&, const VoxelVolume&) = default;

private:
    Dims dims_;
    Spacing spacing_;
    std::vector<std::uint8_t> voxels_;
};

/// Throws EmptyStack or ShapeMismatch.
VoxelVolume stack(std::span<const BinaryImage> masks, Spacing spacing);

struct ExportPaths {
    std::filesystem::path metadata;
    std::filesystem::path raw;
    std::filesystem::path ply;
};

/// Writes <stem>.json, <stem>.raw and <stem>.ply, creating the parent
/// directory if needed. Throws IoError.
ExportPaths export_volume(const VoxelVolume& v, const std::filesystem::path& stem);

/// Reads the metadata JSON and its raw companion back. Throws MissingFile,
/// SchemaError or SizeMismatch.
VoxelVolume load_volume(const std::filesystem::path& metadata_path);

/// Number of vertices declared in an ASCII PLY header.
std::size_t ply_vertex_count(const std::filesystem::path& ply_path);

/// 2|A and B| / (|A| + |B|); 1 when both are empty. Throws ShapeMismatch.
double dice(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

} // namespace airseg::volume
