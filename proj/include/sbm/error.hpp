#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbm {

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorCode {
    InvalidArgument,
    BelowConnectivityScale,
    DimensionMismatch,
    DomainViolation,
    RootSelectionAmbiguous,
    EdgeNotBracketed,
    NonConvergence,
    SizeGuard,
    MissingVectors,
    DegenerateEmbedding,
    EmptyInput,
    SizeMismatch,
    Io,
    Config,
};

std::string_view to_string(ErrorCode code);

/// True for errors raised by a numerical routine rather than by bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sbm
