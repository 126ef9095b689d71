#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace radar {

enum class ErrorKind {
    MalformedLine,
    MalformedCsv,
    MalformedJson,
    Io,
    InsufficientData,
    DegenerateInput,
    EmptyRegion,
    EmptySeries,
    NonMonotonic,
    NegativeTime,
    BadConfig,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace radar
