#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracspec {

enum class ErrorCode {
    InvalidArgument,
    CapExceeded,
    TailUnfittable,
    NotMonotone,
    NotPositive,
    NotVanishing,
    GridTooCoarse,
    EmptySubsequence,
    NotL1Weak,
    SpecNotDiverging,
    DivergentSpec,
    BudgetExceeded,
    EpsilonBelowResolution,
    OverlappingImages,
    TruncationTooCoarse,
    SBelowDimension,
    SeedCoincident,
    UndefinedTag,
    KindMismatch,
};

std::string_view error_code_name(ErrorCode code);

// Numeric precondition failures raised by the library. Configuration
// problems are reported separately by the config validator.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::TailUnfittable: return "TAIL_UNFITTABLE";
    case ErrorCode::NotMonotone: return "NOT_MONOTONE";
    case ErrorCode::NotPositive: return "NOT_POSITIVE";
    case ErrorCode::NotVanishing: return "NOT_VANISHING";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::EmptySubsequence: return "EMPTY_SUBSEQUENCE";
    case ErrorCode::NotL1Weak: return "NOT_L1_WEAK";
    case ErrorCode::SpecNotDiverging: return "SPEC_NOT_DIVERGING";
    case ErrorCode::DivergentSpec: return "DIVERGENT_SPEC";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::EpsilonBelowResolution: return "EPSILON_BELOW_RESOLUTION";
    case ErrorCode::OverlappingImages: return "OVERLAPPING_IMAGES";
    case ErrorCode::TruncationTooCoarse: return "TRUNCATION_TOO_COARSE";
    case ErrorCode::SBelowDimension: return "S_BELOW_DIMENSION";
    case ErrorCode::SeedCoincident: return "SEED_COINCIDENT";
    case ErrorCode::UndefinedTag: return "UNDEFINED_TAG";
    case ErrorCode::KindMismatch: return "KIND_MISMATCH";
    }
    return "UNKNOWN";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) fail(code, what);
}

}  // namespace fracspec
