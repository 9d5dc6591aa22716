#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causaldo {

enum class ErrorKind {
    CycleDetected,
    UnknownEndpoint,
    DuplicateEdge,
    UnknownNode,
    TargetIsIntervened,
    RootNodeHasNoCoefficients,
    MissingColumn,
    NumericalFailure,
    AllWeightsUnderflow,
    NonFiniteResult,
    EmptyInput,
    InvalidArgument,
    Format,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    bool is_numerical() const noexcept {
        return kind_ == ErrorKind::NumericalFailure || kind_ == ErrorKind::AllWeightsUnderflow ||
               kind_ == ErrorKind::NonFiniteResult;
    }

private:
    ErrorKind kind_;
};

#define CAUSALDO_REQUIRE(cond, kind, msg)                     \
    do {                                                      \
        if (!(cond)) throw ::causaldo::Error((kind), (msg));  \
    } while (0)

}  // namespace causaldo
