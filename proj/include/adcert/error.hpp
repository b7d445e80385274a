#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adcert {

enum class ErrorCode {
    GapOrOverlap,
    Discontinuous,
    BadParams,
    NotExtendedDerivative,
    DimMismatch,
    BadBiaffinePattern,
    LengthMismatch,
    PreconditionViolated,
    ExplosionGuard,
    RequiresBias,
    GridTooLarge,
    NotApplicable,
    IncompleteReport,
    BadConfig,
    Parse,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace adcert
