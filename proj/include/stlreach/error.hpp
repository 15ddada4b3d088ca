#pragma once

#include <stdexcept>
#include <string>

namespace stlreach {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated an operation precondition (dimension mismatch, a > b, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// A formula references a predicate that is not declared.
class BindingError : public Error {
public:
    using Error::Error;
};

// Right-hand side could not be enclosed (division by an interval containing 0, ...).
class EvaluationError : public Error {
public:
    using Error::Error;
};

// The a priori enclosure did not contract within the allowed inflation rounds.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

// A refined enclosure has an empty intersection with its parent. Always a bug.
class SoundnessViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace stlreach
