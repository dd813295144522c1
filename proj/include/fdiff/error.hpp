#pragma once

#include <stdexcept>
#include <string>

namespace fdiff {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands disagree in number of variables or truncation order.
class MismatchError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain (e.g. exp of a field with a
/// non-nilpotent linear part, division by a non-unit).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two routes that must agree did not. Indicates a bug or an inconsistent
/// input that slipped past the precondition checks.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace fdiff
