#pragma once

#include <stdexcept>
#include <string>

namespace mukai {

enum class ErrorCode {
    InvalidInput,
    HodgeInfeasible,
    UndefinedCrossTerm,
    NonPrimitive,
    NotSpherical,
    NotInvariant,
    NonIntegral,
    NonPositiveIm,
    EmptyRange,
    RankMismatch,
    VectorNotInLattice,
    DegreeMismatch,
    UnknownCase,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::HodgeInfeasible: return "HodgeInfeasible";
        case ErrorCode::UndefinedCrossTerm: return "UndefinedCrossTerm";
        case ErrorCode::NonPrimitive: return "NonPrimitive";
        case ErrorCode::NotSpherical: return "NotSpherical";
        case ErrorCode::NotInvariant: return "NotInvariant";
        case ErrorCode::NonIntegral: return "NonIntegral";
        case ErrorCode::NonPositiveIm: return "NonPositiveIm";
        case ErrorCode::EmptyRange: return "EmptyRange";
        case ErrorCode::RankMismatch: return "RankMismatch";
        case ErrorCode::VectorNotInLattice: return "VectorNotInLattice";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::UnknownCase: return "UnknownCase";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mukai
