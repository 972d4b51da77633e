#include "airseg/volume.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <string>

namespace airseg::volume {

using nlohmann::json;

VoxelVolume::VoxelVolume(Dims dims, Spacing spacing, std::vector<std::uint8_t> voxels)
    : dims_(dims), spacing_(spacing), voxels_(std::move(voxels)) {
    if (voxels_.size() != dims_.nz * dims_.ny * dims_.nx) {
        throw Error(ErrorCode::SizeMismatch, "voxel buffer of length " + std::to_string(voxels_.size()) +
                                                 " does not match dims");
    }
    if (!(spacing_.z > 0 && spacing_.y > 0 && spacing_.x > 0)) {
        throw Error(ErrorCode::InvalidArgument, "voxel spacing must be positive");
    }
}

std::size_t VoxelVolume::count_set() const {
    return static_cast<std::size_t>(
        std::count_if(voxels_.begin(), voxels_.end(), [](std::uint8_t v) { return v != 0; }));
}

VoxelVolume stack(std::span<const BinaryImage> masks, Spacing spacing) {
    if (masks.empty()) {
        throw Error(ErrorCode::EmptyStack, "no masks to stack");
    }
    const auto& first = masks.front();
    std::vector<std::uint8_t> voxels;
    voxels.reserve(masks.size() * first.size());
    for (std::size_t z = 0; z < masks.size(); ++z) {
        if (!masks[z].same_shape(first)) {
            throw Error(ErrorCode::ShapeMismatch, "mask " + std::to_string(z) + " differs in shape from mask 0");
        }
        for (const auto v : masks[z].pixels()) {
            voxels.push_back(v ? 1 : 0);
        }
    }
    return VoxelVolume(Dims{masks.size(), first.rows(), first.cols()}, spacing, std::move(voxels));
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing " + path.string());
    }
}

} // namespace

ExportPaths export_volume(const VoxelVolume& v, const std::filesystem::path& stem) {
    ExportPaths paths{stem, stem, stem};
    paths.metadata.replace_extension(".json");
    paths.raw.replace_extension(".raw");
    paths.ply.replace_extension(".ply");
    if (stem.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(stem.parent_path(), ec);
        if (ec) {
            throw Error(ErrorCode::IoError, "cannot create " + stem.parent_path().string() + ": " + ec.message());
        }
    }

    const auto& d = v.dims();
    const auto& sp = v.spacing();
    const std::size_t set = v.count_set();

    json meta;
    meta["dims"] = {d.nz, d.ny, d.nx};
    meta["spacing_mm"] = {sp.z, sp.y, sp.x};
    meta["format"] = "u8";
    meta["count_set"] = set;
    meta["raw_file"] = paths.raw.filename().string();
    {
        auto out = open_for_write(paths.metadata);
        out << meta.dump(2) << '\n';
        finish(out, paths.metadata);
    }
    {
        auto out = open_for_write(paths.raw, std::ios::binary);
        out.write(reinterpret_cast<const char*>(v.voxels().data()), static_cast<std::streamsize>(v.voxels().size()));
        finish(out, paths.raw);
    }
    {
        std::string body = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(set) +
                           "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
        char buf[64];
        auto put = [&](double value, char sep) {
            const auto res = std::to_chars(buf, buf + sizeof buf - 1, static_cast<float>(value));
            *res.ptr = sep;
            body.append(buf, res.ptr + 1);
        };
        for (std::size_t z = 0; z < d.nz; ++z) {
            for (std::size_t y = 0; y < d.ny; ++y) {
                for (std::size_t x = 0; x < d.nx; ++x) {
                    if (v.at(z, y, x)) {
                        put(static_cast<double>(x) * sp.x, ' ');
                        put(static_cast<double>(y) * sp.y, ' ');
                        put(static_cast<double>(z) * sp.z, '\n');
                    }
                }
            }
        }
        auto out = open_for_write(paths.ply);
        out << body;
        finish(out, paths.ply);
    }
    return paths;
}

VoxelVolume load_volume(const std::filesystem::path& metadata_path) {
    std::ifstream in(metadata_path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + metadata_path.string());
    }
    json meta;
    try {
        meta = json::parse(in);
        const auto dims = meta.at("dims").get<std::vector<std::size_t>>();
        const auto spacing = meta.at("spacing_mm").get<std::vector<double>>();
        if (dims.size() != 3 || spacing.size() != 3 || meta.at("format").get<std::string>() != "u8") {
            throw Error(ErrorCode::SchemaError, metadata_path.string() + ": malformed volume metadata");
        }
        const auto raw_path = metadata_path.parent_path() / meta.at("raw_file").get<std::string>();
        std::ifstream raw(raw_path, std::ios::binary);
        if (!raw) {
            throw Error(ErrorCode::MissingFile, "cannot open " + raw_path.string());
        }
        std::vector<std::uint8_t> voxels((std::istreambuf_iterator<char>(raw)), std::istreambuf_iterator<char>());
        VoxelVolume v(Dims{dims[0], dims[1], dims[2]}, Spacing{spacing[0], spacing[1], spacing[2]},
                      std::move(voxels));
        if (v.count_set() != meta.at("count_set").get<std::size_t>()) {
            throw Error(ErrorCode::SchemaError, metadata_path.string() + ": count_set disagrees with raw data");
        }
        return v;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, metadata_path.string() + ": " + e.what());
    }
}

std::size_t ply_vertex_count(const std::filesystem::path& ply_path) {
    std::ifstream in(ply_path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + ply_path.string());
    }
    std::string line;
    const std::string key = "element vertex ";
    while (std::getline(in, line) && line != "end_header") {
        if (line.rfind(key, 0) == 0) {
            return std::stoul(line.substr(key.size()));
        }
    }
    throw Error(ErrorCode::SchemaError, ply_path.string() + ": no vertex element");
}

double dice(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::ShapeMismatch, "dice operands differ in size");
    }
    std::size_t both = 0;
    std::size_t na = 0;
    std::size_t nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool x = a[i] != 0;
        const bool y = b[i] != 0;
        na += x;
        nb += y;
        both += x && y;
    }
    return na + nb == 0 ? 1.0 : 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

} // namespace airseg::volume
