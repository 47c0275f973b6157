#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fokas_heat {

enum class ErrorCode {
    NonPositiveSigma,
    NonAbuttingLayers,
    UnsupportedBoundaryOperator,
    WrongDecaySign,
    QuadratureOrderTooLow,
    TimeTooSmall,
    NoConvergence,
    NaNInIntegrand,
    TransformValidity,
    DomainMismatch,
    SingularNode,
    RootBracketFailure,
    TruncationTooTight,
    ParseError,
    UnknownKey,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::NonAbuttingLayers: return "NonAbuttingLayers";
    case ErrorCode::UnsupportedBoundaryOperator: return "UnsupportedBoundaryOperator";
    case ErrorCode::WrongDecaySign: return "WrongDecaySign";
    case ErrorCode::QuadratureOrderTooLow: return "QuadratureOrderTooLow";
    case ErrorCode::TimeTooSmall: return "TimeTooSmall";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NaNInIntegrand: return "NaNInIntegrand";
    case ErrorCode::TransformValidity: return "TransformValidity";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::SingularNode: return "SingularNode";
    case ErrorCode::RootBracketFailure: return "RootBracketFailure";
    case ErrorCode::TruncationTooTight: return "TruncationTooTight";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    }
    return "Unknown";
}

/// Configuration problems (bad input) as opposed to numerical failures.
constexpr bool is_configuration_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveSigma:
    case ErrorCode::NonAbuttingLayers:
    case ErrorCode::UnsupportedBoundaryOperator:
    case ErrorCode::WrongDecaySign:
    case ErrorCode::DomainMismatch:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownKey:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fokas_heat
