#pragma once

#include <stdexcept>
#include <string>

namespace evostab {

/// Malformed or inconsistent run configuration (CLI exit status 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iteration failed to converge; carries the last observed residual
/// (CLI exit status 3).
struct ConvergenceError : std::runtime_error {
    double last_residual;
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
};

/// A sampling-based estimator received degenerate data, e.g. every drawn
/// pair coincides (CLI exit status 3).
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The inputs violate a hypothesis of the result being applied, e.g. the
/// excluded exponent pair (1, inf) or a nonzero reaction at the origin
/// (CLI exit status 4).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace evostab
