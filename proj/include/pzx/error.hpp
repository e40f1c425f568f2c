#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pzx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or parameter outside its admissible range.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Lookup of a session, system, assignment or topic that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Failure while tokenizing, parsing or normalizing a transfer-function
/// expression. `offset` is a 0-based character (code point) offset.
class ExpressionError : public Error {
public:
    enum class Kind { syntax, unbound_symbol, unsupported_delay, non_rational, zero_denominator };

    ExpressionError(Kind kind, std::size_t offset, const std::string& message)
        : Error("error at " + std::to_string(offset) + ": " + message),
          kind_(kind), offset_(offset), detail_(message) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    Kind kind_;
    std::size_t offset_;
    std::string detail_;
};

} // namespace pzx
