#pragma once

#include <stdexcept>
#include <string>

namespace calab {

/// Bad parameters or configuration. The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The CLI maps every NumericalError to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters fall outside the weak-coupling / off-resonance regime.
class RegimeViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Some peripheral frequency is too close to resonance with the central one.
class DegenerateSpectrum : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// An estimator denominator is zero or statistically indistinguishable from it.
class IllConditioned : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace calab
