#pragma once

#include <stdexcept>
#include <string>

namespace gravdec {

// Exit-code mapping used by the CLI: config 2, numerical/validity 3,
// out-of-range physics 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kernel evaluated inside the light-cone guard band; callers must switch to
// singularity-aware quadrature instead.
struct LightConeError : NumericalError {
    using NumericalError::NumericalError;
};

// Equal-point equal-time variance of the fluctuation field is UV-divergent.
struct DivergenceError : NumericalError {
    using NumericalError::NumericalError;
};

// |gamma| >= 1 encountered along a worldline; the field is outside the
// perturbative regime the line-length integral assumes.
struct PerturbativityError : NumericalError {
    using NumericalError::NumericalError;
};

// A point-like density was used where a finite size is required.
struct RegularizationError : DomainError {
    using DomainError::DomainError;
};

struct StepSizeError : DomainError {
    using DomainError::DomainError;
};

// Physics result outside the configured search range (e.g. no localization
// bracket within [1e-30, 1e30] cm).
struct OutOfRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gravdec
