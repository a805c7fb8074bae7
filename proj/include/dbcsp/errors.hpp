#pragma once

#include <stdexcept>
#include <string>

namespace dbcsp {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function was called with arguments that violate its contract
/// (dimension mismatches, out-of-range values, degenerate inputs).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A user-supplied configuration is invalid (bad fold count, bad grid,
/// unknown distance name, invalid plot selectors). The CLI maps these
/// to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed: eigensolver did not converge, or a matrix
/// required to be positive definite is not.
class NumericError : public Error {
public:
    using Error::Error;
};

/// External data could not be parsed or fails validation (CSV parse
/// errors, corrupt or unsupported model files, insufficient samples).
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace dbcsp
