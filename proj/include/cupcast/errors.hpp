#pragma once

#include <stdexcept>
#include <string>

namespace cupcast {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CSV files, team lists, model bundles).
struct DataError : Error {
    using Error::Error;
};

// Invalid tournament configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Model fitting or evaluation failure (singular design, degenerate response, ...).
struct FitError : Error {
    using Error::Error;
};

}  // namespace cupcast
