#pragma once

#include <stdexcept>
#include <string>

namespace treecut {

enum class ErrorCode {
    // validation
    Malformed,
    IndexOutOfRange,
    MultipleRoots,
    CycleDetected,
    InvalidArgument,
    UndefinedGap,
    DegenerateVariance,
    DegreeMismatch,
    // resource
    SizeOverCap,
    AttemptCapExceeded,
    // numerical
    AntisymmetrizationFailed,
    NotConverged,
};

enum class ErrorCategory { Validation, Resource, Numerical };

constexpr ErrorCategory category_of(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SizeOverCap:
        case ErrorCode::AttemptCapExceeded:
            return ErrorCategory::Resource;
        case ErrorCode::AntisymmetrizationFailed:
        case ErrorCode::NotConverged:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Validation;
    }
}

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace treecut
