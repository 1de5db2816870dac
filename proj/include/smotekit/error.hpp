#pragma once

#include <stdexcept>
#include <string>

namespace smotekit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (bad flags, empty grids, out-of-range values).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data that violates a dataset contract (malformed CSV, unknown class, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures: unreadable input, unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace smotekit
