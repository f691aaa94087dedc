#pragma once

#include <stdexcept>
#include <string>

namespace quasireg {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Gram matrix is not positive definite, or n <= k.
class RankError : public Error {
public:
    using Error::Error;
};

/// Argument outside the function's domain (non-positive sigma, p outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed selection rule or box.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Unreadable or malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace quasireg
