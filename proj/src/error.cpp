#include "ambigeo/error.hpp"

namespace ambigeo {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Domain: return "domain error";
        case ErrorCode::Shape: return "shape error";
        case ErrorCode::InsufficientData: return "insufficient data";
        case ErrorCode::Format: return "format error";
        case ErrorCode::Truncation: return "truncation error";
        case ErrorCode::Validation: return "validation error";
        case ErrorCode::EmptyDataset: return "empty dataset";
        case ErrorCode::Singularity: return "singular design";
        case ErrorCode::DegenerateInput: return "degenerate input";
        case ErrorCode::Split: return "split error";
        case ErrorCode::UnknownClass: return "unknown class";
        case ErrorCode::ReservedLabel: return "reserved label";
        case ErrorCode::UndefinedAlpha: return "undefined alpha";
        case ErrorCode::Configuration: return "configuration error";
        case ErrorCode::NoBetweenPairs: return "no between-group pairs";
        case ErrorCode::Precondition: return "precondition violated";
        case ErrorCode::Io: return "i/o error";
    }
    return "error";
}

}  // namespace ambigeo
