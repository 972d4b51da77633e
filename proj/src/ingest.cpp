#include "airseg/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace airseg::ingest {

namespace {

using nlohmann::json;

const std::set<std::string>& manifest_keys() {
    static const std::set<std::string> keys{"slice_count",       "rows",
                                            "cols",              "spacing_mm",
                                            "rescale_slope",     "rescale_intercept",
                                            "background_value",  "data_files"};
    return keys;
}

[[noreturn]] void schema_error(const std::filesystem::path& path, const std::string& what) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + what);
}

const json& require(const json& doc, const char* key, const std::filesystem::path& path) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        schema_error(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

std::size_t require_count(const json& doc, const char* key, const std::filesystem::path& path) {
    const json& v = require(doc, key, path);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        schema_error(path, std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

double require_real(const json& doc, const char* key, const std::filesystem::path& path) {
    const json& v = require(doc, key, path);
    if (!v.is_number()) {
        schema_error(path, std::string("'") + key + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        schema_error(path, std::string("'") + key + "' must be finite");
    }
    return d;
}

std::int16_t rescale(std::int16_t raw, double slope, double intercept, const std::filesystem::path& file) {
    const double hu = std::round(slope * raw + intercept);
    if (!(hu >= kMinHu && hu <= kMaxHu)) {
        std::ostringstream msg;
        msg << file.string() << ": rescaled value " << hu << " outside [" << kMinHu << ", " << kMaxHu << "]";
        throw Error(ErrorCode::ValueOutOfRange, msg.str());
    }
    return static_cast<std::int16_t>(hu);
}

} // namespace

VolumeManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open manifest " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        schema_error(path, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        schema_error(path, "manifest must be a JSON object");
    }
    for (const auto& [key, _] : doc.items()) {
        if (!manifest_keys().contains(key)) {
            schema_error(path, "unknown field '" + key + "'");
        }
    }

    VolumeManifest m;
    m.slice_count = require_count(doc, "slice_count", path);
    m.rows = require_count(doc, "rows", path);
    m.cols = require_count(doc, "cols", path);
    if (m.rows == 0 || m.cols == 0) {
        schema_error(path, "rows and cols must be positive");
    }

    const json& spacing = require(doc, "spacing_mm", path);
    if (!spacing.is_array() || spacing.size() != 3 ||
        !std::all_of(spacing.begin(), spacing.end(), [](const json& v) { return v.is_number(); })) {
        schema_error(path, "'spacing_mm' must be an array of three numbers");
    }
    m.spacing_mm = {spacing[0].get<double>(), spacing[1].get<double>(), spacing[2].get<double>()};
    if (!(m.spacing_mm.row > 0 && m.spacing_mm.col > 0 && m.spacing_mm.slice > 0)) {
        schema_error(path, "'spacing_mm' components must be positive");
    }

    m.rescale_slope = require_real(doc, "rescale_slope", path);
    if (m.rescale_slope == 0.0) {
        schema_error(path, "'rescale_slope' must be non-zero");
    }
    m.rescale_intercept = require_real(doc, "rescale_intercept", path);

    if (const auto it = doc.find("background_value"); it != doc.end()) {
        if (!it->is_number_integer()) {
            schema_error(path, "'background_value' must be an integer");
        }
        m.background_value = it->get<int>();
    }

    const json& files = require(doc, "data_files", path);
    if (!files.is_array()) {
        schema_error(path, "'data_files' must be an array of strings");
    }
    const auto base = path.parent_path();
    for (const json& f : files) {
        if (!f.is_string()) {
            schema_error(path, "'data_files' must be an array of strings");
        }
        std::filesystem::path p = f.get<std::string>();
        m.data_files.push_back(p.is_relative() ? base / p : p);
    }
    if (m.data_files.size() != m.slice_count) {
        throw Error(ErrorCode::CountMismatch,
                    path.string() + ": slice_count " + std::to_string(m.slice_count) + " but " +
                        std::to_string(m.data_files.size()) + " data files listed");
    }
    return m;
}

void write_manifest(const std::filesystem::path& path, const VolumeManifest& m) {
    json doc;
    doc["slice_count"] = m.slice_count;
    doc["rows"] = m.rows;
    doc["cols"] = m.cols;
    doc["spacing_mm"] = {m.spacing_mm.row, m.spacing_mm.col, m.spacing_mm.slice};
    doc["rescale_slope"] = m.rescale_slope;
    doc["rescale_intercept"] = m.rescale_intercept;
    doc["background_value"] = m.background_value;
    json files = json::array();
    for (const auto& f : m.data_files) {
        files.push_back(f.generic_string());
    }
    doc["data_files"] = files;

    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write manifest " + path.string());
    }
    out << doc.dump(2) << '\n';
}

double hu_from_attenuation(double mu, double mu_water, double mu_air) {
    if (mu_water == mu_air) {
        throw Error(ErrorCode::DegenerateCalibration, "water and air attenuation coincide");
    }
    return 1000.0 * (mu - mu_water) / (mu_water - mu_air);
}

std::vector<HuSlice> load_slices(const VolumeManifest& manifest) {
    const std::size_t pixels = manifest.rows * manifest.cols;
    const std::size_t expected_bytes = pixels * 2;

    std::vector<HuSlice> slices;
    slices.reserve(manifest.data_files.size());
    for (std::size_t z = 0; z < manifest.data_files.size(); ++z) {
        const auto& file = manifest.data_files[z];
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::MissingFile, "cannot open slice file " + file.string());
        }
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (bytes.size() != expected_bytes) {
            throw Error(ErrorCode::SizeMismatch, file.string() + ": expected " + std::to_string(expected_bytes) +
                                                     " bytes, found " + std::to_string(bytes.size()));
        }

        HuSlice slice;
        slice.rows = manifest.rows;
        slice.cols = manifest.cols;
        slice.slice_index = z;
        slice.spacing_mm = manifest.spacing_mm;
        slice.values.resize(pixels);
        for (std::size_t i = 0; i < pixels; ++i) {
            const auto raw = static_cast<std::int16_t>(static_cast<std::uint16_t>(bytes[2 * i]) |
                                                       static_cast<std::uint16_t>(bytes[2 * i + 1] << 8));
            slice.values[i] = rescale(raw, manifest.rescale_slope, manifest.rescale_intercept, file);
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

std::vector<GrayImage> preprocess_volume(std::span<const HuSlice> slices, int background_value) {
    if (slices.empty()) {
        throw Error(ErrorCode::EmptyVolume, "no slices to preprocess");
    }
    const std::size_t rows = slices.front().rows;
    const std::size_t cols = slices.front().cols;
    for (const auto& s : slices) {
        if (s.rows != rows || s.cols != cols || s.values.size() != rows * cols) {
            throw Error(ErrorCode::ShapeMismatch, "slice " + std::to_string(s.slice_index) + " is " +
                                                      std::to_string(s.rows) + "x" + std::to_string(s.cols) +
                                                      ", expected " + std::to_string(rows) + "x" +
                                                      std::to_string(cols));
        }
    }

    // Range of the non-background values; background then equals lo.
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& s : slices) {
        for (const std::int16_t v : s.values) {
            if (v != background_value) {
                lo = std::min<int>(lo, v);
                hi = std::max<int>(hi, v);
            }
        }
    }
    const bool all_background = lo > hi;
    const double span = all_background ? 0.0 : static_cast<double>(hi - lo);

    std::vector<GrayImage> out;
    out.reserve(slices.size());
    for (const auto& s : slices) {
        GrayImage img(rows, cols);
        auto px = img.pixels();
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const int v = s.values[i] == background_value ? lo : s.values[i];
            px[i] = span == 0.0 ? 0 : static_cast<std::uint8_t>(std::lround(255.0 * (v - lo) / span));
        }
        out.push_back(std::move(img));
    }
    return out;
}

void write_raw_slice(const std::filesystem::path& path, std::span<const std::int16_t> raw) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write slice file " + path.string());
    }
    std::vector<char> bytes(raw.size() * 2);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto u = static_cast<std::uint16_t>(raw[i]);
        bytes[2 * i] = static_cast<char>(u & 0xFF);
        bytes[2 * i + 1] = static_cast<char>(u >> 8);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing " + path.string());
    }
}

} // namespace airseg::ingest
