#pragma once

#include "evostab/exponent.hpp"
#include "evostab/signal.hpp"

namespace evostab {

/// L^p norm of a grid function: composite trapezoid of ||f(t)||^p followed
/// by the p-th root; for p = inf, the maximum node norm (grid functions
/// carry no null sets, so the grid max plays the role of the ess sup).
double lp_norm(const SampledSignal& f, Exponent p);

/// Time gauge t^{1-1/p} (t for p = inf). Controls how much L^1 mass a
/// window of length t can extract from an L^p function.
double gauge_a(double t, Exponent p);

/// Norm of the unit indicator on [0, t]: t^{1/p} (1 for p = inf).
double gauge_b(double t, Exponent p);

/// Signal equal to `amplitude` on [a, b] (intersected with the grid) and
/// zero elsewhere. Throws std::invalid_argument for a > b or a < 0.
SampledSignal indicator_signal(const Grid& grid, double a, double b, const State& amplitude);

/// Trapezoid integral of ||f|| over [from, to] intersected with the grid
/// domain (the signal is treated as zero outside its grid).
double integral_of_norm(const SampledSignal& f, double from, double to);

struct TruncationCheck {
    double lhs = 0.0;  ///< integral of ||f|| over [t0, t0 + t]
    double rhs = 0.0;  ///< gauge_a(t, p) * lp_norm(f, p)
    bool holds = false;
};

/// Checks the window truncation inequality
///   int_{t0}^{t0+t} ||f(s)|| ds <= a_p(t) ||f||_p  (+ tol).
TruncationCheck truncation_bound_check(const SampledSignal& f, Exponent p, double t0,
                                       double t, double tol = 1e-9);

/// Default absolute tolerance plus a second-order quadrature allowance.
inline double quad_allowance(double dt, double length, double scale = 1.0) {
    return 1e-9 + scale * dt * dt * length;
}

} // namespace evostab
