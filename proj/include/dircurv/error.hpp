#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace dircurv {

enum class ErrorCode {
    // input errors
    SyntaxError,
    UnknownVariable,
    NonIntegerExponent,
    DimensionMismatch,
    InvalidBody,
    InvalidArgument,
    NotOnBoundary,
    NonSmoothPoint,
    OrientationViolation,
    NotTangent,
    ZeroDirection,
    InvalidIndex,
    NotInterior,
    // numerical failures
    DivisionByZero,
    RankDeficient,
    NotSymmetric,
    RayEscapes,
    NegativeCurvature,
    DegenerateTangent,
    NoBoundaryIntersection,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::NonIntegerExponent: return "NonIntegerExponent";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidBody: return "InvalidBody";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotOnBoundary: return "NotOnBoundary";
        case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
        case ErrorCode::OrientationViolation: return "OrientationViolation";
        case ErrorCode::NotTangent: return "NotTangent";
        case ErrorCode::ZeroDirection: return "ZeroDirection";
        case ErrorCode::InvalidIndex: return "InvalidIndex";
        case ErrorCode::NotInterior: return "NotInterior";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::RayEscapes: return "RayEscapes";
        case ErrorCode::NegativeCurvature: return "NegativeCurvature";
        case ErrorCode::DegenerateTangent: return "DegenerateTangent";
        case ErrorCode::NoBoundaryIntersection: return "NoBoundaryIntersection";
    }
    return "Unknown";
}

// True for errors caused by bad user input (as opposed to a numerical breakdown).
constexpr bool is_input_error(ErrorCode code) {
    return code < ErrorCode::DivisionByZero;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string location = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), detail_(message), location_(std::move(location)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    // Where the error was detected: a 1-based character position, an input
    // index, or a subexpression, depending on the code. May be empty.
    const std::string& location() const noexcept { return location_; }

private:
    ErrorCode code_;
    std::string detail_;
    std::string location_;
};

}  // namespace dircurv
