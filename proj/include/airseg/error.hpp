#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace airseg {

enum class ErrorCode {
    MissingFile,
    SchemaError,
    CountMismatch,
    SizeMismatch,
    ValueOutOfRange,
    DegenerateCalibration,
    EmptyVolume,
    ShapeMismatch,
    LevelOverflow,
    NoValidSplit,
    EmptyStack,
    IoError,
    InvalidArgument,
    PipelineAborted,
};

std::string_view to_string(ErrorCode code);

/// Base error for every failure raised by the library. The code is stable;
/// the message is meant for humans and usually carries the offending path.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the pipeline; wraps the error of the stage that failed.
class PipelineAborted : public Error {
public:
    PipelineAborted(std::string stage, ErrorCode cause, const std::string& detail);

    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] ErrorCode cause() const noexcept { return cause_; }

private:
    std::string stage_;
    ErrorCode cause_;
};

} // namespace airseg
