#pragma once

#include <stdexcept>
#include <string>

namespace curvebound {

// Base class for all library errors.  `code` is a stable machine-readable
// identifier; `what()` carries the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Bad arguments / malformed data / violated preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Failures arising during a computation (non-convergence, resolution limits,
// internal inconsistency).
class ComputationError : public Error {
public:
    using Error::Error;
};

}  // namespace curvebound
