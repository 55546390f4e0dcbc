#ifndef ALLOYFREEZE_ERRORS_HPP
#define ALLOYFREEZE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace alloyfreeze {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dt too large for the recorded velocity field.
struct CflExceeded : SolverError {
    using SolverError::SolverError;
};

// Conjugate-gradient solve hit its iteration cap above tolerance.
struct EllipticDiverged : SolverError {
    using SolverError::SolverError;
};

// NaN or Inf detected in a field.
struct NonFinite : SolverError {
    using SolverError::SolverError;
};

struct NotConverged : SolverError {
    using SolverError::SolverError;
};

struct EmptySolidRegion : SolverError {
    using SolverError::SolverError;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace alloyfreeze

#endif
