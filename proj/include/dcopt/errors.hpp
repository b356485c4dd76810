#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dcopt {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Subproblem solver missed its optimality tolerance within its budget.
struct SubproblemFailure : SolverError {
    using SolverError::SolverError;
};

// The objective evaluated to NaN or +-inf; the problem instance is broken.
struct NonFiniteValue : SolverError {
    using SolverError::SolverError;
};

struct InsufficientTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The subproblem matrix is not numerically SPD (corrupt weights).
struct FactorizationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyFileError : IoError {
    using IoError::IoError;
};

struct ParseError : IoError {
    std::size_t row;
    std::size_t col;
    ParseError(std::size_t row_, std::size_t col_, const std::string& detail)
        : IoError("parse error at row " + std::to_string(row_) + ", column " +
                  std::to_string(col_) + ": " + detail),
          row(row_),
          col(col_) {}
};

} // namespace dcopt
