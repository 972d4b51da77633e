#include "airseg/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace airseg::pgm {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int ch = 0;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) {
                break;
            }
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    return token;
}

std::size_t parse_dimension(const std::string& token, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const long long value = std::stoll(token, &pos);
        if (pos == token.size() && value > 0) {
            return static_cast<std::size_t>(value);
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::SchemaError, "bad PGM header field '" + token + "' in " + path.string());
}

void write_bytes(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                 std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << cols << ' ' << rows << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing " + path.string());
    }
}

} // namespace

GrayImage read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
    }
    if (next_token(in) != "P5") {
        throw Error(ErrorCode::SchemaError, path.string() + " is not a binary PGM (P5)");
    }
    const std::size_t cols = parse_dimension(next_token(in), path);
    const std::size_t rows = parse_dimension(next_token(in), path);
    const std::size_t maxval = parse_dimension(next_token(in), path);
    if (maxval != 255) {
        throw Error(ErrorCode::SchemaError, path.string() + ": only maxval 255 is supported");
    }
    // next_token consumed exactly one whitespace byte after maxval.
    std::vector<std::uint8_t> pixels(rows * cols);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != pixels.size()) {
        throw Error(ErrorCode::SizeMismatch, path.string() + ": truncated pixel data");
    }
    return GrayImage(rows, cols, std::move(pixels));
}

void write(const std::filesystem::path& path, const GrayImage& image) {
    write_bytes(path, image.rows(), image.cols(), image.pixels());
}

void write(const std::filesystem::path& path, const BinaryImage& mask) {
    std::vector<std::uint8_t> bytes(mask.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = mask.pixels()[i] ? 255 : 0;
    }
    write_bytes(path, mask.rows(), mask.cols(), bytes);
}

} // namespace airseg::pgm
