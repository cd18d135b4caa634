// errors.hpp — Exception types raised by the qhm library

#pragma once

#include <stdexcept>
#include <string>

namespace qhm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid arguments and broken type invariants.
struct InvalidArgument : Error { using Error::Error; };
struct InvalidScheme : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct InvalidMachine : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct DomainError : InvalidArgument { using InvalidArgument::InvalidArgument; };
struct ConfigError : InvalidArgument { using InvalidArgument::InvalidArgument; };

// Numerical failures.
struct NumericalError : Error { using Error::Error; };
struct MassDeficitError : NumericalError { using NumericalError::NumericalError; };
struct NegativeSidebandError : NumericalError { using NumericalError::NumericalError; };
struct ConvergenceError : NumericalError { using NumericalError::NumericalError; };
struct DecoupledError : NumericalError { using NumericalError::NumericalError; };
struct SecondLawViolation : NumericalError { using NumericalError::NumericalError; };
struct NoEngineWindow : NumericalError { using NumericalError::NumericalError; };
struct NoSignChange : NumericalError { using NumericalError::NumericalError; };
struct StiffnessError : NumericalError { using NumericalError::NumericalError; };
struct NotConverged : NumericalError { using NumericalError::NumericalError; };

} // namespace qhm
