#include "evostab/mild.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evostab/errors.hpp"

namespace evostab {

namespace {

void axpy(State& y, double a, const State& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

} // namespace

Nonlinearity zero_nonlinearity(std::size_t dim) {
    return Nonlinearity{[dim](double, const State&) { return State(dim, 0.0); }, 0.0, true};
}

Nonlinearity linear_reaction(double c, std::size_t dim) {
    return Nonlinearity{[c, dim](double, const State& x) {
                            State y(dim);
                            for (std::size_t i = 0; i < dim; ++i) y[i] = c * x[i];
                            return y;
                        },
                        std::abs(c), true};
}

Nonlinearity forcing_term(std::function<State(double)> g, std::size_t /*dim*/) {
    return Nonlinearity{[g = std::move(g)](double t, const State&) { return g(t); }, 0.0, false};
}

State one_step_mild(const EvolutionFamily& U, const Nonlinearity& f, double t_prev,
                    double t_next, const State& a) {
    const double h = t_next - t_prev;
    if (h <= 0.0) return a;
    // U is linear, so the propagated part of the trapezoid rule folds into
    // one application: U(t,s)[a + (h/2) f(s,a)] + (h/2) f(t,x).
    State carried = a;
    axpy(carried, 0.5 * h, f(t_prev, a));
    State x = U(t_next, t_prev, carried);

    if (f.lipschitz_L == 0.0) { // state-independent term: no iteration needed
        axpy(x, 0.5 * h, f(t_next, x));
        return x;
    }

    const State base = x;
    State next = base;
    for (int it = 0; it < 16; ++it) {
        next = base;
        axpy(next, 0.5 * h, f(t_next, x));
        const double delta = distance(next, x);
        std::swap(x, next);
        if (delta <= 1e-14 * (1.0 + norm(x))) break;
    }
    return x;
}

SampledSignal march_mild(const EvolutionFamily& U, const Nonlinearity& f, const State& x,
                         const Grid& grid) {
    SampledSignal path(grid, x.size());
    path.set_node(0, x);
    State cur = x;
    for (std::size_t k = 1; k < grid.n; ++k) {
        cur = one_step_mild(U, f, grid.time(k - 1), grid.time(k), cur);
        path.set_node(k, cur);
    }
    return path;
}

namespace {

/// Fixed-point solve on nodes [w0, w1] of the grid, anchored at x = a at
/// node w0. Writes the accepted iterate into `path` and returns its
/// certified defect.
double solve_chunk(const EvolutionFamily& U, const Nonlinearity& f, const Grid& grid,
                   std::size_t w0, std::size_t w1, const State& a,
                   const MildSolveConfig& cfg, SampledSignal& path,
                   std::size_t& iterations, std::vector<double>& history) {
    const std::size_t m = w1 - w0 + 1;
    const double dt = grid.dt;
    const double ts = grid.time(w0);

    // initial iterate: pure propagation
    std::vector<State> x(m);
    x[0] = a;
    for (std::size_t i = 1; i < m; ++i) x[i] = U(grid.time(w0 + i), ts, a);

    std::vector<State> fx(m), y(m);
    double prev_residual = std::numeric_limits<double>::infinity();
    int expansions = 0;

    for (std::size_t iter = 0; iter < cfg.max_picard_iters; ++iter) {
        for (std::size_t j = 0; j < m; ++j) fx[j] = f(grid.time(w0 + j), x[j]);

        y[0] = a;
        const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t ii = 1; ii < mm; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const double t = grid.time(w0 + i);
            // trapezoid memory integral; the anchor sample rides along with
            // the propagated initial state
            State carried = a;
            axpy(carried, 0.5 * dt, fx[0]);
            State acc = U(t, ts, carried);
            for (std::size_t j = 1; j < i; ++j)
                axpy(acc, dt, U(t, grid.time(w0 + j), fx[j]));
            axpy(acc, 0.5 * dt, fx[i]);
            y[i] = std::move(acc);
        }

        double residual = 0.0;
        for (std::size_t i = 0; i < m; ++i) residual = std::max(residual, distance(y[i], x[i]));
        ++iterations;
        history.push_back(residual);

        if (residual <= cfg.fixed_point_tol) {
            for (std::size_t i = 0; i < m; ++i) path.set_node(w0 + i, x[i]);
            return residual;
        }
        if (residual > prev_residual * (1.0 + 1e-12)) {
            if (++expansions >= 3)
                throw ConvergenceError(
                    "fixed-point iteration expanded three times in a row; "
                    "shrink chunk_length or dt",
                    residual);
        } else {
            expansions = 0;
        }
        prev_residual = residual;
        std::swap(x, y);
    }
    throw ConvergenceError("fixed-point iteration did not reach tolerance", prev_residual);
}

} // namespace

MildSolution solve_mild_on_grid(const EvolutionFamily& U, const Nonlinearity& f,
                                const State& x, const Grid& grid, const MildSolveConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.fixed_point_tol > 0.0) || cfg.max_picard_iters == 0 ||
        !(cfg.chunk_length > 0.0))
        throw std::invalid_argument("solver configuration fields must be positive");

    MildSolution sol{SampledSignal(grid, x.size()), 0, 0.0, {}};
    sol.path.set_node(0, x);
    if (grid.n == 1) return sol;

    const auto chunk_nodes =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.chunk_length / grid.dt)));
    State anchor = x;
    std::size_t w0 = 0;
    while (w0 < grid.n - 1) {
        const std::size_t w1 = std::min(w0 + chunk_nodes, grid.n - 1);
        const double defect = solve_chunk(U, f, grid, w0, w1, anchor, cfg, sol.path,
                                          sol.iterations, sol.residual_history);
        sol.residual = std::max(sol.residual, defect);
        anchor = sol.path.node_state(w1);
        w0 = w1;
    }
    return sol;
}

MildSolution solve_mild(const EvolutionFamily& U, const Nonlinearity& f, double s,
                        const State& x, double horizon, const MildSolveConfig& cfg) {
    if (horizon < 0.0) throw std::invalid_argument("horizon must be nonnegative");
    return solve_mild_on_grid(U, f, x, Grid::over(s, horizon, cfg.dt), cfg);
}

EvolutionFamily generate_family(const EvolutionFamily& U, const Nonlinearity& f,
                                const MildSolveConfig& cfg) {
    EvolutionFamily F;
    F.dim = U.dim;
    F.kind = FamilyKind::nonlinear;
    const double omega = std::max(U.growth.omega, 1e-6);
    F.growth = GrowthBound{U.growth.M, omega + U.growth.M * f.lipschitz_L};
    F.evaluate = [U, f, cfg](double t, double s, const State& x) -> State {
        if (t <= s + 1e-15 * std::max(1.0, std::abs(s))) return x;
        // local grid with the step adjusted so t lands on a node
        const auto steps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((t - s) / cfg.dt)));
        const Grid grid(s, (t - s) / static_cast<double>(steps), steps + 1);
        MildSolveConfig local = cfg;
        local.dt = grid.dt;
        return solve_mild_on_grid(U, f, x, grid, local).path.node_state(grid.n - 1);
    };
    return F;
}

GronwallCheck gronwall_bound_check(const EvolutionFamily& U, const Nonlinearity& f,
                                   const EvolutionFamily& generated, double t, double s,
                                   const State& x, const State& y, double allowance) {
    const double K = U.growth.M;
    const double omega = std::max(U.growth.omega, 1e-6); // positive by convention
    GronwallCheck chk;
    chk.lhs = distance(generated(t, s, x), generated(t, s, y));
    chk.rhs = K * std::exp((omega + K * f.lipschitz_L) * (t - s)) * distance(x, y) + allowance;
    chk.holds = chk.lhs <= chk.rhs;
    return chk;
}

} // namespace evostab
