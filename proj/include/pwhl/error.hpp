#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace pwhl {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inconsistent dimensions between inputs.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate values.
class NumericError : public Error {
public:
    using Error::Error;
};

/// The inner solver could not make progress. Carries the last iterate.
class SolverError : public Error {
public:
    SolverError(const std::string& what, Eigen::VectorXd last_iterate)
        : Error(what), last_iterate_(std::move(last_iterate)) {}

    const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }

private:
    Eigen::VectorXd last_iterate_;
};

/// No admissible grid point during tuning.
class TuningError : public Error {
public:
    using Error::Error;
};

/// Malformed user input (CSV cells, missing columns, mismatched reports).
class InputError : public Error {
public:
    InputError(const std::string& what, long row = -1, long column = -1)
        : Error(what), row_(row), column_(column) {}

    long row() const noexcept { return row_; }
    long column() const noexcept { return column_; }

private:
    long row_;
    long column_;
};

/// Invalid scenario or option combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pwhl
