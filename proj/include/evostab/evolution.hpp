#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "evostab/rng.hpp"
#include "evostab/signal.hpp"

namespace evostab {

/// Declared growth bound: ||X(t,s)||_lip <= M e^{omega (t-s)}.
struct GrowthBound {
    double M = 1.0;
    double omega = 1.0;
};

enum class FamilyKind { linear, nonlinear };

/// Two-parameter family of state maps X(t,s), t >= s >= 0, with X(t,t) = id
/// and the composition law X(t,s) = X(t,r) o X(r,s). Evaluators must be
/// pure (no internal mutation) so sampling loops may run concurrently.
struct EvolutionFamily {
    std::function<State(double t, double s, const State&)> evaluate;
    GrowthBound growth{};
    FamilyKind kind = FamilyKind::linear;
    std::size_t dim = 1;

    State operator()(double t, double s, const State& x) const { return evaluate(t, s, x); }
};

/// Scalar family X(t,s)x = e^{-rate (t-s)} x. For rate >= 0 the declared
/// growth is (1, epsilon); for rate < 0 it is (1, -rate).
EvolutionFamily scalar_exponential_family(double rate);

EvolutionFamily identity_family(std::size_t dim);

/// Path t -> X(t, t0) x0 on the grid, extended by zero before t0.
struct Trajectory {
    double t0 = 0.0;
    State x0;
    SampledSignal path;
};

Trajectory trajectory(const EvolutionFamily& F, double t0, const State& x0, const Grid& grid);

/// Draws states with components uniform in [-radius, radius]^dim.
struct StateSampler {
    std::size_t dim = 1;
    double radius = 1.0;

    State draw(Rng& rng) const { return rng.uniform_vector(dim, -radius, radius); }

    /// A pair x != y (rejects nearly coincident draws).
    std::pair<State, State> draw_pair(Rng& rng, double min_separation = 1e-8) const;
};

/// Max over sampled pairs of ||F(t,s,x) - F(t,s,y)|| / ||x - y||; a lower
/// bound on the Lipschitz seminorm of X(t,s). Deterministic given the seed.
struct LipschitzEstimate {
    double t = 0.0;
    double s = 0.0;
    double value = 0.0;
    std::size_t n_pairs = 0;
    std::uint64_t seed = 0;
    std::vector<double> ratios;
};

LipschitzEstimate estimate_lip_norm(const EvolutionFamily& F, double t, double s,
                                    const StateSampler& sampler, std::size_t n_pairs,
                                    std::uint64_t seed);

/// Violations of the identity, composition, and growth axioms over sampled
/// (t, r, s, x, y); violations are data, not errors.
struct AxiomReport {
    double max_identity_defect = 0.0;
    double max_cocycle_defect = 0.0;
    double max_growth_excess = 0.0;   ///< max over samples of ratio - M e^{omega (t-s)}
    double worst_cocycle_gap = 0.0;   ///< t - s at the worst composition defect
    bool identity_ok = false;
    bool cocycle_ok = false;
    bool growth_ok = false;
    bool passed = false;
};

AxiomReport check_axioms(const EvolutionFamily& F, const Grid& grid, const StateSampler& sampler,
                         std::size_t n_samples, std::uint64_t seed, double tol_identity,
                         double tol_cocycle, double tol_growth = 1e-9);

/// M = sup phi on [0,1], omega = max(1, ln phi(1)). Requires phi(1) > 0.
GrowthBound growth_from_phi(const std::function<double(double)>& phi,
                            std::size_t grid_points = 2048);

struct GapSample {
    double gap = 0.0;
    double value = 0.0;
};

/// Stability classification from sampled Lipschitz estimates over
/// geometrically spaced gaps plus trajectory tails.
struct StabilityClassification {
    bool uniformly_exponentially_stable = false;
    bool uniformly_stable = false;
    bool asymptotically_stable = false;
    double fitted_N = 0.0;   ///< from the log-linear fit (valid when u.e.s.)
    double fitted_nu = 0.0;
    double fit_slope = 0.0;  ///< slope of log(value) against gap
    double fit_max_residual = 0.0;
    double max_estimate = 0.0;
    std::vector<GapSample> samples;
};

StabilityClassification classify_stability(const EvolutionFamily& F, const Grid& grid,
                                           const StateSampler& sampler, double tol,
                                           std::uint64_t seed);

/// Least-squares line y = a + b x; returns (a, b, max |residual|).
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double max_residual = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace evostab
