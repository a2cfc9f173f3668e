#pragma once

#include <stdexcept>
#include <string>

namespace ambigeo {

enum class ErrorCode {
    Domain,            // zero norm, degenerate variance
    Shape,             // dimension / length mismatch
    InsufficientData,  // too few rows, pairs or items
    Format,            // malformed file or header
    Truncation,        // payload shorter than declared
    Validation,        // non-finite values, duplicate ids
    EmptyDataset,      // nothing left after filtering
    Singularity,       // rank-deficient design matrix
    DegenerateInput,   // duplicate points, identical layouts
    Split,             // train/test split would leave a side empty
    UnknownClass,
    ReservedLabel,
    UndefinedAlpha,
    Configuration,
    NoBetweenPairs,
    Precondition,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code lets callers (the CLI in
/// particular) tell input problems from internal faults without parsing
/// message text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ambigeo
