#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dehnfill {

enum class ErrorCode {
    ZeroPolynomial,
    MalformedTerm,
    DuplicateTerm,
    NonUnimodular,
    ExponentOverflow,
    DegeneratePolynomial,
    Tie,
    DegreeBoundExceeded,
    InternalCheckFailed,
    NonConvergence,
    InsufficientData,
    InvalidArgument,
    Io,
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::MalformedTerm: return "MalformedTerm";
    case ErrorCode::DuplicateTerm: return "DuplicateTerm";
    case ErrorCode::NonUnimodular: return "NonUnimodular";
    case ErrorCode::ExponentOverflow: return "ExponentOverflow";
    case ErrorCode::DegeneratePolynomial: return "DegeneratePolynomial";
    case ErrorCode::Tie: return "Tie";
    case ErrorCode::DegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorCode::InternalCheckFailed: return "InternalCheckFailed";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can report it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dehnfill
