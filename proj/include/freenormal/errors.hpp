#pragma once

#include <stdexcept>
#include <string>

namespace freenormal {

enum class ErrorKind {
    DomainError,
    PoleProximity,
    NoConvergence,
    InvalidContour,
    SeedNotFound,
    StepUnderflow,
    NoSignChange,
    QuadratureFailure,
    InvariantViolation,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base for every failure raised by the library. The kind is stable and is
/// what the CLI maps to an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace freenormal
