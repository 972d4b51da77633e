#include "airseg/engine.hpp"

#include <json.hpp>

#include <iomanip>
#include <limits>
#include <sstream>

namespace airseg::engine {

using nlohmann::json;

namespace {

constexpr const char* kCsvHeader = "label,workers,chunk_size,wall_time_ms,speedup";

} // namespace

const BenchRow& BenchReport::baseline() const {
    for (const auto& row : rows) {
        if (row.label == baseline_label) {
            return row;
        }
    }
    throw Error(ErrorCode::SchemaError, "report has no baseline row '" + baseline_label + "'");
}

std::string BenchReport::to_csv() const {
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.label << ',' << r.workers << ',' << r.chunk_size << ',' << r.wall_time_ms << ',' << r.speedup
            << '\n';
    }
    return out.str();
}

std::string BenchReport::to_json() const {
    json doc;
    doc["baseline_label"] = baseline_label;
    doc["rows"] = json::array();
    for (const auto& r : rows) {
        doc["rows"].push_back({{"label", r.label},
                               {"workers", r.workers},
                               {"chunk_size", r.chunk_size},
                               {"wall_time_ms", r.wall_time_ms},
                               {"speedup", r.speedup}});
    }
    return doc.dump(2) + "\n";
}

BenchReport BenchReport::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw Error(ErrorCode::SchemaError, "bench CSV must start with '" + std::string(kCsvHeader) + "'");
    }
    BenchReport report;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string label, workers, chunk, ms, speedup;
        if (!std::getline(fields, label, ',') || !std::getline(fields, workers, ',') ||
            !std::getline(fields, chunk, ',') || !std::getline(fields, ms, ',') || !std::getline(fields, speedup)) {
            throw Error(ErrorCode::SchemaError, "malformed bench CSV row: " + line);
        }
        try {
            report.rows.push_back(BenchRow{label, std::stoul(workers), std::stoul(chunk), std::stod(ms),
                                           std::stod(speedup)});
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaError, "malformed bench CSV row: " + line);
        }
    }
    return report;
}

BenchReport BenchReport::from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        BenchReport report;
        report.baseline_label = doc.at("baseline_label").get<std::string>();
        for (const auto& r : doc.at("rows")) {
            report.rows.push_back(BenchRow{r.at("label").get<std::string>(), r.at("workers").get<std::size_t>(),
                                           r.at("chunk_size").get<std::size_t>(), r.at("wall_time_ms").get<double>(),
                                           r.at("speedup").get<double>()});
        }
        return report;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("malformed bench JSON: ") + e.what());
    }
}

} // namespace airseg::engine
