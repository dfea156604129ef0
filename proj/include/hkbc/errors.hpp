#pragma once

#include <stdexcept>
#include <string>

namespace hkbc {

/// Root of the toolkit's exception hierarchy. Every subclass maps onto one
/// CLI exit code (see exit_code_for).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments, violated preconditions, misuse of an API.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed or semantically invalid input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Training could not start or finish (e.g. only one class present).
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Non-finite values during optimisation.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Unknown key in a fitted lookup table.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Model file does not parse or has the wrong version.
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hkbc
