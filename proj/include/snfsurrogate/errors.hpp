/**
 * @file errors.hpp
 * @brief Exception types shared by all snfsurrogate modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace snf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration: inverted ranges, bad counts, out-of-space hyperparameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. negative nuclide amounts).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unusable numerical data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Too few rows or mismatched shapes.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Malformed file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace snf
