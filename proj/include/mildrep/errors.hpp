#pragma once

#include <stdexcept>
#include <string>

namespace mildrep {

// Precondition violations: bad parameters, malformed input. The CLI maps
// these to exit status 1.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation could not produce a trustworthy number (non-convergence,
// blow-up, failed certificate). The CLI maps these to exit status 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A derivative whose one-sided limits disagree or diverge.
class UndefinedValue : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A quadratic certificate could not be established. Not the same as a
// saddle verdict.
class Inconclusive : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace mildrep
