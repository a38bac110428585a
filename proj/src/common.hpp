#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace nilmult {

// All counts, exponents and moduli are exact; nothing in the theory bounds
// their growth, so arbitrary precision throughout.
using Int = boost::multiprecision::cpp_int;

// Precondition violations: bad arguments, mismatched contexts, malformed input.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// An enumeration or collection exceeded its node/step budget.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A checked mathematical invariant failed; signals a bug, not bad input.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

// Group-expression parse failure, with the byte offset of the offending token.
struct ParseError : DomainError {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& what)
        : DomainError("parse error at offset " + std::to_string(off) + ": " + what),
          offset(off) {}
};

}  // namespace nilmult
