#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "evostab/evolution.hpp"
#include "evostab/exponent.hpp"
#include "evostab/mild.hpp"
#include "evostab/signal.hpp"

namespace evostab {

/// Scalar speed field h : R -> [1/2, 1] together with the tabulated
/// antiderivative H(t) = int_0^t ds/h(s) and its inverse. H is cumulative
/// trapezoid on a uniform table (extended on demand, thread-safe); the
/// inverse bisects the strictly increasing table (slope in [1, 2]) and
/// finishes with an exact within-segment solve.
class ScalarField {
public:
    explicit ScalarField(std::function<double(double)> h, double table_step = 1.0 / 64,
                         double initial_span = 16.0, double inversion_tol = 1e-12);

    double h(double u) const { return h_(u); }
    double H(double u) const;
    double H_inverse(double y) const;
    double inversion_tol() const { return inversion_tol_; }

private:
    struct Table {
        long lo = 0; // table covers indices lo..hi, abscissa = index * step
        std::vector<double> values;
        double at(long idx) const { return values[static_cast<std::size_t>(idx - lo)]; }
        long hi() const { return lo + static_cast<long>(values.size()) - 1; }
    };

    std::shared_ptr<const Table> snapshot() const;
    void extend_to(double lo_x, double hi_x) const;

    std::function<double(double)> h_;
    double step_;
    double inversion_tol_;
    mutable std::shared_ptr<const Table> table_;
    mutable std::mutex extend_mutex_;
};

/// Named speed fields, all nonincreasing so the flow never expands:
///   constant:    h = value (clamped to [1/2, 1], default 1)
///   affine_clip: h = clamp(3/4 - slope * u, 1/2, 1), default slope 1/8
///   sin_clip:    h = 3/4 - sin(clamp(u, -pi/2, pi/2)) / 4
std::shared_ptr<const ScalarField> scalar_field_preset(const std::string& name,
                                                       double param = 0.0);

/// Flow of u' = h(u): X(t,s)x = H^{-1}(t - s + H(x)). Nonexpanding, so the
/// declared growth is (1, epsilon).
EvolutionFamily scalar_flow_family(std::shared_ptr<const ScalarField> field);

/// Scalar reaction term g(t, y) for the diffusion model.
struct ScalarReaction {
    std::function<double(double t, double y)> evaluate;
    double lipschitz_L = 0.0;
    bool vanishes_at_zero = true;
};

/// Named reactions: "none", "decay" (g = -lambda y), "saturating"
/// (g = -y - y/(1+y^2), Lipschitz 2), "exp_forcing" (g = e^{-t}, state-free).
ScalarReaction reaction_preset(const std::string& name, double param = 1.0);

/// Diffusion with zero-flux boundary on (0, pi) in a cosine spectral basis:
/// mode k has eigenvalue -k^2, so the heat propagator is exactly diagonal
/// and all discretization error sits in the reaction quadrature. States are
/// orthonormalized mode coordinates: the Euclidean norm equals the L^2(0,pi)
/// norm of the represented function, which makes the lifted reaction
/// inherit the scalar Lipschitz constant exactly.
class SpectralHeatModel {
public:
    SpectralHeatModel(std::size_t n_modes, ScalarReaction g);

    std::size_t n_modes() const { return m_; }
    double eigenvalue(std::size_t k) const { return -static_cast<double>(k * k); }
    double collocation_point(std::size_t j) const;
    const ScalarReaction& reaction() const { return g_; }

    State to_modal(const std::vector<double>& values) const;
    std::vector<double> to_values(const State& modal) const;

    /// Multiplies mode k by e^{-k^2 t}; t < 0 raises std::domain_error.
    State semigroup_apply(double t, const State& modal) const;

    EvolutionFamily linear_family() const;

    /// The reaction lifted to mode coordinates by inverse transform,
    /// pointwise application, forward transform.
    Nonlinearity nemytsky() const;

    /// Mild family of u' = Laplacian u + g(t, u) via the fixed-point solver.
    EvolutionFamily mild_family(const MildSolveConfig& cfg) const;

private:
    std::size_t m_;
    ScalarReaction g_;
    std::vector<double> cosmat_; // cos(k x_j), k-major
};

/// Function-space state on the half-line grid: the L^r index and the signal.
struct HalfLineState {
    Exponent r = Exponent::finite(2.0);
    SampledSignal f;
};

/// Shift by h and propagate through a linear family:
/// out(t) = U(t, t-h) f(t-h) for t >= h, zero before. h snaps to the grid.
HalfLineState shifted_propagation_linear(const HalfLineState& state, double h,
                                         const EvolutionFamily& U);

/// Same shift through a (possibly nonlinear) family, zero-padded on [0, h).
HalfLineState shifted_propagation(const HalfLineState& state, double h,
                                  const EvolutionFamily& F);

/// One shift-by-dt sweep of the whole signal through one-step mild solves:
/// out[i] solves the integral equation over [t_{i-1}, t_i] from in[i-1];
/// out[0] = in[0]. Parallel over nodes; serial path for in-place reference.
void mild_shift_sweep(const EvolutionFamily& U, const Nonlinearity& g,
                      const Grid& grid, const std::vector<State>& in,
                      std::vector<State>& out, std::size_t first_node, bool parallel);

struct FixedPointResult {
    SampledSignal phi;
    std::size_t outer_iterations = 0;
    double last_distance = 0.0;       ///< L^r distance between final iterates
    double residual = 0.0;            ///< defect in the discrete integral equation
    std::vector<double> distances;
};

/// Fixed point of the shift-by-n0 propagation semigroup on [0, T], iterated
/// from the zero signal (or `start`) until successive iterates are within
/// tol in L^r. The shift is realized by composed one-step solves, which
/// completes the boundary with the trajectory from the start's value at
/// t = 0; with the default zero start the fixed point is the mild solution
/// started from zero, phi(t) = X(t,0)0, on the whole grid. A custom start
/// should carry the half-line boundary value 0 at its first node (the grid
/// pins the t = 0 trace that an L^r class leaves free). Throws
/// ConvergenceError if successive distances stop contracting.
FixedPointResult find_fixed_point(const EvolutionFamily& U, const Nonlinearity& g, double n0,
                                  const Grid& grid, Exponent r, double tol,
                                  std::size_t max_iters,
                                  const SampledSignal* start = nullptr);

/// Smallest integer window with N e^{-alpha n0} <= 1/2.
double choose_contraction_window(double N, double alpha);

/// Boundedness of all mild solutions under a uniform seminorm bound N.
/// Requires the zero solution to be preserved (g(t,0) = 0); families that
/// move the origin are refused via hypothesis_ok = false.
struct BoundednessReport {
    bool hypothesis_ok = false;
    double zero_defect = 0.0;     ///< max ||F(t,s,0)|| over sampled (t,s) pairs
    double zero_witness_gap = 0.0;
    bool bound_holds = false;
    double max_excess = 0.0;      ///< max of ||F(t,s,x)|| - N ||x||
};

BoundednessReport check_mild_solution_boundedness(const EvolutionFamily& F,
                                                  const StateSampler& sampler, const Grid& grid,
                                                  double N, double tol, std::size_t n_samples,
                                                  std::uint64_t seed);

} // namespace evostab
