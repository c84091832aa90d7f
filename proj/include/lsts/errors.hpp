#ifndef LSTS_ERRORS_HPP
#define LSTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lsts {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fewer than two design points carry positive kernel weight at a grid point.
struct DegenerateWindow : Error {
    using Error::Error;
};

// Every bandwidth candidate failed the fit precondition.
struct AllDegenerate : Error {
    using Error::Error;
};

// A fit grid does not cover the design points it is asked for.
struct GridMismatch : Error {
    using Error::Error;
};

// Block size exceeds a quarter of the window.
struct BlockTooLarge : Error {
    using Error::Error;
};

// Probability argument outside (0,1), or similar domain violations.
struct DomainError : Error {
    using Error::Error;
};

// A lag curve lacks a required evaluation point.
struct MissingMidpoint : Error {
    using Error::Error;
};

// Symmetric eigendecomposition did not converge.
struct EigenFailure : Error {
    using Error::Error;
};

// The positive-definite corrected system could not be solved accurately.
struct SolveFailure : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

// Filter coefficients violate the geometric-decay precondition.
struct UnstableFilter : Error {
    using Error::Error;
};

// Requested operation has no analytic form for this process kind.
struct Unsupported : Error {
    using Error::Error;
};

// CSV/config parse failure; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Input series has no usable rows after cleaning.
struct EmptyAfterCleaning : Error {
    using Error::Error;
};

} // namespace lsts

#endif
