#pragma once

#include <stdexcept>
#include <string>

namespace cornersol {

/// Base of all library exceptions.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input or violated precondition. CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

/// An iterative or adaptive scheme failed to reach its tolerance.
/// CLI maps these to exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

struct PoleAtVertex : ValidationError {
    PoleAtVertex() : ValidationError("evaluation at the corner vertex of a singular field") {}
    using ValidationError::ValidationError;
};

struct RegionBoundaryHitsRoot : ValidationError {
    using ValidationError::ValidationError;
};

struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct NoPositiveRoot : ValidationError {
    using ValidationError::ValidationError;
};

struct NotARoot : ValidationError {
    using ValidationError::ValidationError;
};

struct NotInL2 : ValidationError {
    using ValidationError::ValidationError;
};

struct EpsOutsidePlateau : ValidationError {
    using ValidationError::ValidationError;
};

struct NonConvergent : NumericalError {
    using NumericalError::NumericalError;
};

struct StepTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct SupportTouchesBoundary : ValidationError {
    using ValidationError::ValidationError;
};

struct SolverStall : NumericalError {
    using NumericalError::NumericalError;
};

struct EmptyBall : ValidationError {
    using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : ValidationError(msg + " (line " + std::to_string(line_) + ", column " +
                          std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

}  // namespace cornersol
