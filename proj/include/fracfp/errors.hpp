#pragma once

#include <stdexcept>
#include <string>

namespace fracfp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// inverse_transform received a spectrum whose imaginary residue exceeds tolerance.
struct NonHermitianSpectrum : Error {
    double residue;
    explicit NonHermitianSpectrum(double res)
        : Error("spectrum is not Hermitian (relative imaginary residue " +
                std::to_string(res) + ")"),
          residue(res) {}
};

/// Inverse multiplier requested at a singular zero mode (eps=0 with nonzero mass).
struct SingularInverse : Error {
    using Error::Error;
};

/// Scalar argument outside the operation's domain.
struct DomainError : Error {
    using Error::Error;
};

/// Adaptive quadrature exhausted its evaluation budget before reaching tolerance.
struct QuadratureFailure : Error {
    double best_estimate;
    double error_estimate;
    QuadratureFailure(const std::string& what, double best, double err)
        : Error(what), best_estimate(best), error_estimate(err) {}
};

/// Particle state became non-finite during SDE stepping.
struct NonfiniteState : Error {
    using Error::Error;
};

/// Run configuration failed schema validation.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace fracfp
