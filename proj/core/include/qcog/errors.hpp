#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcog {

/// Base class for all qcog errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (CSV / JSON). Carries a 1-based line number when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Values outside their admissible domain, or degenerate data.
class DomainError : public Error {
    using Error::Error;
};

/// Unknown state / context / property identifier.
class LookupError : public Error {
    using Error::Error;
};

/// Data that admits no model under the construction: |cos phi| > 1, negative
/// lambda radicand, c_m > 1, or non-intersecting placement level sets.
class InfeasibleError : public Error {
    using Error::Error;
};

/// Numerically singular linear system.
class SingularMatrixError : public Error {
    using Error::Error;
};

}  // namespace qcog
