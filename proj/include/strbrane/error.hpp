#pragma once

#include <stdexcept>
#include <string>

namespace strbrane {

// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorKind : int {
    Io = 1,
    Validation = 2,
    Numeric = 3,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Raised when a numeric precondition does not hold (zero variance,
/// singular systems, non-stationary fits).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

}  // namespace strbrane
