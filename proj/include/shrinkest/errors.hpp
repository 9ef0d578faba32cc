#pragma once

#include <stdexcept>
#include <string>

namespace shrinkest {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
    success = 0,
    config_error = 2,
    data_error = 3,
    numerical_failure = 4,
};

/// Base for every error raised by the library. Carries the exit code the CLI reports.
class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// Invalid or inconsistent parameters (missing k, bad partition, W not positive definite...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ExitCode::config_error, what) {}
};

/// Malformed input data (missing cells, constant regressors, ragged rows).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ExitCode::data_error, what) {}
};

/// Rank deficiency, exact collinearity, or other numerical breakdown.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ExitCode::numerical_failure, what) {}
};

}  // namespace shrinkest
