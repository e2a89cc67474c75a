#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asrbias {

enum class ErrorKind {
    FormatError,
    DuplicateUtteranceId,
    MissingAttribute,
    ZeroReferenceLength,
    NegativeWer,
    EmptyInput,
    InsufficientData,
    MissingNormGroup,
    ZeroBaseWer,
    NoGroupsRemaining,
    EmptyGroup,
    MissingSection,
    ValidationError,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Input or domain error. The CLI maps these to exit status 1; anything
/// else escaping the pipeline is treated as an internal failure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace asrbias
