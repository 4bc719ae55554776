#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tipping {

enum class ErrorKind {
    Validation,
    Numeric,
    Solver,
    Parse,
    NoThreshold,
    Io,
    Usage,
};

// Short machine-parseable tag, printed by the CLI as the first token of an
// error line.
constexpr std::string_view category_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::NoThreshold: return "no-threshold";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace tipping
