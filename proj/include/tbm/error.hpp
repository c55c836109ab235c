#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tbm {

/// Malformed input text. Carries the 1-based line number of the offending line
/// (0 when the error is not tied to a line, e.g. an empty file).
class ParseError : public std::runtime_error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input data that parses but cannot be used (empty dataset, pattern outside
/// the sample space, zero model probability on observed data, ...).
class DataError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A configured resource cap (parameter-domain size, 2^n enumeration) was hit.
class LimitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace tbm
