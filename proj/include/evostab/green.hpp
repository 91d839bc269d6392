#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evostab/evolution.hpp"
#include "evostab/exponent.hpp"
#include "evostab/signal.hpp"

namespace evostab {

/// Causal Green transform (G f)(t) = int_0^t X(t,s) f(s) ds, computed by
/// trapezoid quadrature on the signal's grid. Nonlinear whenever the
/// family is. The node loop is OpenMP-parallel; pass parallel = false for
/// the serial reference path.
SampledSignal green_apply(const EvolutionFamily& F, const SampledSignal& f,
                          bool parallel = true);

/// Serial reference implementation (identical arithmetic, no threading).
SampledSignal green_apply_serial(const EvolutionFamily& F, const SampledSignal& f);

/// One truncated-trajectory test signal: the path of x started at t0,
/// cut to the window [a, b] and zero elsewhere.
struct TruncatedTrajectorySpec {
    State x;
    double t0 = 0.0;
    double a = 0.0;
    double b = 0.0;
};

std::vector<SampledSignal> truncated_trajectory_signals(
    const EvolutionFamily& F, const Grid& grid,
    const std::vector<TruncatedTrajectorySpec>& specs);

std::vector<TruncatedTrajectorySpec> random_truncated_specs(const Grid& grid, std::size_t dim,
                                                            std::size_t count,
                                                            std::uint64_t seed,
                                                            double radius = 1.0);

/// Smooth random signal built from a handful of low-frequency cosines.
SampledSignal band_limited_signal(const Grid& grid, std::size_t dim, std::uint64_t seed,
                                  double radius = 1.0);

/// Sampled lower-bound estimate of the Lipschitz constant K of
/// G : L^p -> L^q, together with the maximizing test pair.
struct AdmissibilityReport {
    Exponent p = Exponent::finite(1.0);
    Exponent q = Exponent::finite(1.0);
    double K_estimate = 0.0;
    std::size_t n_test_pairs = 0;
    SampledSignal witness_f;
    SampledSignal witness_g;
    std::optional<SampledSignal> psi_witness;
    std::uint64_t seed = 0;
    double horizon = 0.0;   ///< half-line norms truncated to [0, horizon]
    std::vector<double> ratios;
    std::string estimate_note;
};

/// Test set mixes truncated trajectories (even indices) with band-limited
/// noise (odd indices); pairs are enumerated in a prefix-stable order so a
/// larger pair budget extends the sample rather than reshuffling it.
/// Throws EstimationError when every sampled pair coincides in L^p.
AdmissibilityReport estimate_admissibility(const EvolutionFamily& F, Exponent p, Exponent q,
                                           const Grid& grid, std::size_t n_test_pairs,
                                           std::uint64_t seed);

/// Desk-scale check of the L^1 -> L^inf characterization: (i) some psi in
/// L^1 has a bounded Green transform, and (ii) the family's Lipschitz
/// seminorm is uniformly bounded; together they pin
/// ||G f - G g||_inf <= N ||f - g||_1 on sampled pairs.
struct L1LinfCharacterization {
    AdmissibilityReport admissibility;   ///< sampled (L^1, L^inf) estimate
    double psi_green_sup = 0.0;
    bool input_witness_ok = false;       ///< (i): G psi stays bounded over the horizon
    bool lip_bounded = false;            ///< (ii): no growth trend in the seminorm
    double lip_bound_N = 0.0;
    double growth_slope = 0.0;
    double witness_gap = 0.0;            ///< gap realizing the worst seminorm sample
    double pair_bound_violation = 0.0;   ///< max of ||Gf-Gg||_inf - N ||f-g||_1
    bool pair_bound_ok = false;
    bool passed = false;
};

L1LinfCharacterization check_l1_linf_admissibility(const EvolutionFamily& F, const Grid& grid,
                                                   const StateSampler& sampler,
                                                   std::uint64_t seed);

} // namespace evostab
