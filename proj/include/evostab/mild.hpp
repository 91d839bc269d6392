#pragma once

#include <functional>

#include "evostab/evolution.hpp"
#include "evostab/signal.hpp"

namespace evostab {

/// Reaction term f(t, x): uniformly Lipschitz in x with constant
/// lipschitz_L; vanishes_at_zero marks f(t, 0) = 0 for all t.
struct Nonlinearity {
    std::function<State(double t, const State&)> evaluate;
    double lipschitz_L = 0.0;
    bool vanishes_at_zero = true;

    State operator()(double t, const State& x) const { return evaluate(t, x); }
};

Nonlinearity zero_nonlinearity(std::size_t dim);

/// f(t, x) = c x.
Nonlinearity linear_reaction(double c, std::size_t dim);

/// State-independent forcing f(t, x) = g(t) (Lipschitz constant 0; does not
/// vanish at zero unless g does).
Nonlinearity forcing_term(std::function<State(double)> g, std::size_t dim);

struct MildSolveConfig {
    double dt = 1e-2;
    std::size_t max_picard_iters = 64;
    double fixed_point_tol = 1e-10;
    /// Long horizons are solved by composing sub-solves of this length;
    /// keeps the fixed-point map contractive independent of the horizon.
    double chunk_length = 1.0;
};

struct MildSolution {
    SampledSignal path;
    std::size_t iterations = 0;       ///< total fixed-point iterations over all chunks
    double residual = 0.0;            ///< worst certified defect of the discrete equation
    std::vector<double> residual_history;
};

/// Solves x(t) = U(t,s)x + int_s^t U(t,tau) f(tau, x(tau)) dtau on the grid
/// s + k dt by fixed-point iteration of the trapezoid-discretized equation,
/// starting from the pure propagation U(t,s)x. The returned path satisfies
/// the discrete equation on each chunk with defect <= fixed_point_tol.
/// Throws ConvergenceError when the iteration stalls or expands.
MildSolution solve_mild(const EvolutionFamily& U, const Nonlinearity& f, double s,
                        const State& x, double horizon, const MildSolveConfig& cfg);

/// Same equation solved on a caller-supplied grid (grid.t0 is the start time).
MildSolution solve_mild_on_grid(const EvolutionFamily& U, const Nonlinearity& f,
                                const State& x, const Grid& grid, const MildSolveConfig& cfg);

/// Single trapezoid step of the integral equation from (t_prev, a) to t_next.
State one_step_mild(const EvolutionFamily& U, const Nonlinearity& f, double t_prev,
                    double t_next, const State& a);

/// Sequential one-step marching over the grid (the chunk-length -> dt limit
/// of solve_mild); the cheap way to tabulate one long trajectory.
SampledSignal march_mild(const EvolutionFamily& U, const Nonlinearity& f, const State& x,
                         const Grid& grid);

/// Wraps the solver as an evolution family: evaluate(t,s,x) is the mild
/// solution at t started from (s, x). Declared growth (K, omega + K L) from
/// the propagator bound and the reaction's Lipschitz constant.
EvolutionFamily generate_family(const EvolutionFamily& U, const Nonlinearity& f,
                                const MildSolveConfig& cfg);

struct GronwallCheck {
    double lhs = 0.0;   ///< ||X(t,s)x - X(t,s)y||
    double rhs = 0.0;   ///< K e^{(omega + K L)(t-s)} ||x - y|| + allowance
    bool holds = false;
};

/// Checks the perturbed-growth bound satisfied by the generated family.
GronwallCheck gronwall_bound_check(const EvolutionFamily& U, const Nonlinearity& f,
                                   const EvolutionFamily& generated, double t, double s,
                                   const State& x, const State& y, double allowance = 1e-9);

} // namespace evostab
