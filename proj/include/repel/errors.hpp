#pragma once

#include <stdexcept>
#include <string>

namespace repel {

// Base class; every library failure derives from it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed documents, invariant violations, out-of-domain parameters.
class ParseError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class IncompatibleInputs : public Error { using Error::Error; };
class TooLarge : public Error { using Error::Error; };
class TooFewSamples : public Error { using Error::Error; };
class InsufficientLevels : public Error { using Error::Error; };
class TooFine : public Error { using Error::Error; };

// Numerical trouble.
class NumericalError : public Error { using Error::Error; };
class NumericalInversionFailure : public NumericalError { using NumericalError::NumericalError; };
class SingularSystem : public NumericalError { using NumericalError::NumericalError; };
class DegenerateTransform : public NumericalError { using NumericalError::NumericalError; };

// Internal state corruption; indicates a bug in a caller's rate logic.
class StateError : public Error { using Error::Error; };
class NoCrossingLeft : public StateError { using StateError::StateError; };
class TimeOverdraft : public StateError { using StateError::StateError; };
class StuckState : public StateError { using StateError::StateError; };

}  // namespace repel
