#pragma once

// errors.hpp -- exception hierarchy shared by the whole library.
//
// The CLI maps these onto process exit codes, so every throw site should pick
// the class that matches what actually went wrong:
//   ParameterError / ScenarioError -> exit 2 (bad inputs)
//   RegimeError                    -> exit 3 (model preconditions violated)
//   RunawayError                   -> exit 4 (simulation exceeded its guard)
//   ValidationError                -> exit 5 (model vs. simulation mismatch)

#include <stdexcept>
#include <string>

namespace sdcplan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameter values or an otherwise malformed request.
struct ParameterError : Error {
    using Error::Error;
};

// Scenario file cannot be read or parsed (unknown fields, bad units, ...).
struct ScenarioError : ParameterError {
    using ParameterError::ParameterError;
};

// Parameters are individually fine but the requested model does not apply
// (negative radicand, waste coefficients outside their feasible range, ...).
struct RegimeError : Error {
    using Error::Error;
};

// A Monte Carlo trial exceeded its wall-clock guard.
struct RunawayError : Error {
    using Error::Error;
};

// The validate command found a model/simulation disagreement beyond tolerance.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace sdcplan
