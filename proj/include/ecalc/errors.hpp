#pragma once

#include <stdexcept>
#include <string>

namespace ecalc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (expression grammar, JSON shape).  Carries a byte
/// offset into the offending string when one is known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

/// A structural precondition was violated (mismatched variable sets, wrong
/// degrees, frame/model mismatches, unsupported mode).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Numeric evaluation of a quotient hit a point where a denominator factor
/// vanishes.  Distinct from DomainError so callers can probe the singular
/// locus deliberately.
class SingularEvalError : public Error {
public:
    explicit SingularEvalError(const std::string& what) : Error(what) {}
};

} // namespace ecalc
