#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mechquot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, bad index, schema violation.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    enum class Kind { Syntax, UnknownIdentifier, DivisionByZero, BadExponent };

    ParseError(Kind kind, std::size_t position, const std::string &what)
        : InputError(what + " at position " + std::to_string(position)),
          kind_(kind), position_(position) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// Mismatched charts, dimensions or coordinate names.
class ChartError : public InputError {
public:
    using InputError::InputError;
};

/// Division by an identically zero expression or evaluation at a pole.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iteration cap or expression-size ceiling was hit.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation does not hold (e.g. NOT_ADAPTED).
class PreconditionError : public Error {
public:
    PreconditionError(std::string code, const std::string &what)
        : Error(code + ": " + what), code_(std::move(code)) {}

    const std::string &code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Failure raised while integrating a trajectory.
class IntegrationError : public Error {
public:
    IntegrationError(double time, const std::string &what)
        : Error(what + " at t=" + std::to_string(time)), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace mechquot
