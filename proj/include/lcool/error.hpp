#pragma once

#include <stdexcept>
#include <string>

namespace lcool {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
    ok = 0,
    usage = 1,
    data = 2,
    divergence = 3,
};

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::data; }
};

/// Shape or dimension mismatch between a point and a model.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Bad input data, malformed files, invalid configuration values.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical quantity became non-finite or exceeded its guard.
class DivergenceError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::divergence; }
};

} // namespace lcool
