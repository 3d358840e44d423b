#pragma once

#include <stdexcept>
#include <string>

namespace ipsw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, violated preconditions and failed guards.
struct DomainError : Error {
    using Error::Error;
};

struct DivisionByZero : DomainError {
    DivisionByZero() : DomainError("division by zero") {}
};

struct NoExtremalMonomial : DomainError {
    NoExtremalMonomial() : DomainError("zero polynomial has no extremal monomial") {}
};

// Expansion or enumeration budget exceeded.
struct ResourceError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// The axiom system handed to a refutation builder has a boolean solution.
struct SatisfiableError : Error {
    using Error::Error;
};

}  // namespace ipsw
