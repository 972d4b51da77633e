#include "airseg/error.hpp"

namespace airseg {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::DegenerateCalibration: return "DegenerateCalibration";
    case ErrorCode::EmptyVolume: return "EmptyVolume";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LevelOverflow: return "LevelOverflow";
    case ErrorCode::NoValidSplit: return "NoValidSplit";
    case ErrorCode::EmptyStack: return "EmptyStack";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PipelineAborted: return "PipelineAborted";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

PipelineAborted::PipelineAborted(std::string stage, ErrorCode cause, const std::string& detail)
    : Error(ErrorCode::PipelineAborted, "pipeline aborted in " + stage + ": " + detail),
      stage_(std::move(stage)),
      cause_(cause) {}

} // namespace airseg
