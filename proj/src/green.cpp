#include "evostab/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evostab/errors.hpp"
#include "evostab/lp.hpp"

namespace evostab {

SampledSignal green_apply(const EvolutionFamily& F, const SampledSignal& f, bool parallel) {
    const Grid& g = f.grid();
    SampledSignal out(g, f.dim());
    const double dt = g.dt;
    const auto n = static_cast<std::ptrdiff_t>(g.n);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t ii = 1; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double t = g.time(i);
        State acc(f.dim(), 0.0);
        for (std::size_t j = 0; j <= i; ++j) {
            const double w = (j == 0 || j == i) ? 0.5 * dt : dt;
            const State v = F(t, g.time(j), f.node_state(j));
            for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += w * v[c];
        }
        out.set_node(i, acc);
    }
    return out; // node 0 is the empty integral: zero
}

SampledSignal green_apply_serial(const EvolutionFamily& F, const SampledSignal& f) {
    return green_apply(F, f, false);
}

std::vector<SampledSignal> truncated_trajectory_signals(
    const EvolutionFamily& F, const Grid& grid,
    const std::vector<TruncatedTrajectorySpec>& specs) {
    std::vector<SampledSignal> out;
    out.reserve(specs.size());
    for (const auto& sp : specs) {
        if (sp.a < 0.0 || sp.a > sp.b)
            throw std::invalid_argument("invalid interval: require 0 <= a <= b");
        SampledSignal s(grid, sp.x.size());
        const double eps = 0.25 * grid.dt;
        for (std::size_t k = 0; k < grid.n; ++k) {
            const double t = grid.time(k);
            if (t >= sp.a - eps && t <= sp.b + eps && t >= sp.t0 - eps)
                s.set_node(k, F(std::max(t, sp.t0), sp.t0, sp.x));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<TruncatedTrajectorySpec> random_truncated_specs(const Grid& grid, std::size_t dim,
                                                            std::size_t count,
                                                            std::uint64_t seed, double radius) {
    const double T = grid.span();
    std::vector<TruncatedTrajectorySpec> specs(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, i));
        TruncatedTrajectorySpec sp;
        sp.x = rng.uniform_vector(dim, -radius, radius);
        sp.t0 = rng.uniform(0.0, 0.5 * T);
        sp.a = rng.uniform(0.0, 0.6 * T);
        sp.b = std::min(sp.a + rng.uniform(0.05 * T, 0.4 * T), T);
        specs[i] = std::move(sp);
    }
    return specs;
}

SampledSignal band_limited_signal(const Grid& grid, std::size_t dim, std::uint64_t seed,
                                  double radius) {
    Rng rng(seed);
    const double T = std::max(grid.span(), grid.dt);
    SampledSignal s(grid, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        double amp[4], phase[4];
        for (int m = 0; m < 4; ++m) {
            amp[m] = rng.uniform(-radius, radius);
            phase[m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        for (std::size_t k = 0; k < grid.n; ++k) {
            const double t = grid.time(k);
            double v = 0.0;
            for (int m = 0; m < 4; ++m)
                v += amp[m] * std::cos(static_cast<double>(m) * std::numbers::pi * t / T + phase[m]);
            s.at(k, c) = 0.5 * v;
        }
    }
    return s;
}

namespace {

std::vector<SampledSignal> admissibility_test_set(const EvolutionFamily& F, const Grid& grid,
                                                  std::size_t m, std::uint64_t seed) {
    std::vector<SampledSignal> signals;
    signals.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (i % 2 == 0) {
            auto specs = random_truncated_specs(grid, F.dim, 1, derive_seed(seed, 2 * i + 1));
            signals.push_back(truncated_trajectory_signals(F, grid, specs).front());
        } else {
            signals.push_back(band_limited_signal(grid, F.dim, derive_seed(seed, 2 * i)));
        }
    }
    return signals;
}

} // namespace

AdmissibilityReport estimate_admissibility(const EvolutionFamily& F, Exponent p, Exponent q,
                                           const Grid& grid, std::size_t n_test_pairs,
                                           std::uint64_t seed) {
    if (n_test_pairs == 0) throw std::invalid_argument("need at least one test pair");

    // smallest m with m(m-1)/2 >= n_test_pairs
    std::size_t m = 2;
    while (m * (m - 1) / 2 < n_test_pairs) ++m;

    const auto signals = admissibility_test_set(F, grid, m, seed);
    std::vector<SampledSignal> transforms;
    transforms.reserve(m);
    for (const auto& s : signals) transforms.push_back(green_apply(F, s));

    AdmissibilityReport rep;
    rep.p = p;
    rep.q = q;
    rep.seed = seed;
    rep.horizon = grid.span();
    rep.n_test_pairs = n_test_pairs;
    rep.psi_witness = SampledSignal(grid, F.dim);
    rep.estimate_note =
        "lower-bound estimate: max ratio over sampled pairs (truncated trajectories "
        "+ band-limited noise), half-line norms truncated to the grid horizon";

    std::size_t emitted = 0;
    std::size_t best_i = 0, best_j = 0;
    bool have_ratio = false;
    for (std::size_t j = 1; j < m && emitted < n_test_pairs; ++j) {
        for (std::size_t i = 0; i < j && emitted < n_test_pairs; ++i) {
            ++emitted;
            const double denom = lp_norm(difference(signals[i], signals[j]), p);
            if (denom <= 0.0) continue; // coincident inputs carry no ratio
            const double ratio = lp_norm(difference(transforms[i], transforms[j]), q) / denom;
            rep.ratios.push_back(ratio);
            if (!have_ratio || ratio > rep.K_estimate) {
                rep.K_estimate = ratio;
                best_i = i;
                best_j = j;
                have_ratio = true;
            }
        }
    }
    if (!have_ratio)
        throw EstimationError("all sampled test pairs coincide; no admissibility ratio exists");
    rep.witness_f = signals[best_i];
    rep.witness_g = signals[best_j];
    return rep;
}

L1LinfCharacterization check_l1_linf_admissibility(const EvolutionFamily& F, const Grid& grid,
                                                   const StateSampler& sampler,
                                                   std::uint64_t seed) {
    L1LinfCharacterization rep;
    rep.admissibility =
        estimate_admissibility(F, Exponent::finite(1.0), Exponent::inf(), grid, 21, seed);

    // (i) zero input: its Green transform must stay bounded over the horizon
    // (for nonlinear families G0 need not vanish).
    const SampledSignal psi(grid, F.dim);
    const SampledSignal gpsi = green_apply(F, psi);
    rep.psi_green_sup = gpsi.max_node_norm();
    double head = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k)
        (k < grid.n / 2 ? head : tail) = std::max(k < grid.n / 2 ? head : tail,
                                                  gpsi.node_norm(k));
    rep.input_witness_ok = tail <= head * 1.1 + 1e-9;

    // (ii) uniform seminorm bound: no growth trend over geometric gaps.
    // The zero gap is included: the identity axiom pins the seminorm there.
    std::vector<double> xs, ys;
    const double T = grid.span();
    double worst_value = 0.0;
    for (std::size_t i = 0; i < 13; ++i) {
        const auto gap_nodes =
            i == 0 ? std::size_t{0}
                   : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                                  T * std::pow(0.5, 12.0 - static_cast<double>(i)) /
                                                  grid.dt)));
        if (gap_nodes >= grid.n) continue;
        const double t = grid.time(gap_nodes);
        const double value = estimate_lip_norm(F, t, 0.0, sampler, 16, derive_seed(seed, 40 + i)).value;
        if (value >= worst_value) {
            worst_value = value;
            rep.witness_gap = static_cast<double>(gap_nodes) * grid.dt;
        }
        if (value > 0.0) {
            xs.push_back(static_cast<double>(gap_nodes) * grid.dt);
            ys.push_back(std::log(value));
        }
    }
    rep.lip_bound_N = worst_value;
    if (xs.size() >= 2) {
        rep.growth_slope = fit_line(xs, ys).slope;
        rep.lip_bounded = rep.growth_slope <= 1e-3;
    }

    // the two halves together force the L^1 -> L^inf pair bound
    const auto specs = random_truncated_specs(grid, F.dim, 6, derive_seed(seed, 77));
    auto pool = truncated_trajectory_signals(F, grid, specs);
    pool.push_back(band_limited_signal(grid, F.dim, derive_seed(seed, 78)));
    std::vector<SampledSignal> gpool;
    gpool.reserve(pool.size());
    for (const auto& s : pool) gpool.push_back(green_apply(F, s));
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const double d1 = lp_norm(difference(pool[i], pool[j]), Exponent::finite(1.0));
            if (d1 <= 0.0) continue;
            const double dq = lp_norm(difference(gpool[i], gpool[j]), Exponent::inf());
            rep.pair_bound_violation =
                std::max(rep.pair_bound_violation, dq - rep.lip_bound_N * d1);
        }
    }
    rep.pair_bound_ok = rep.pair_bound_violation <= 1e-6 * (1.0 + rep.lip_bound_N);
    rep.passed = rep.input_witness_ok && rep.lip_bounded && rep.pair_bound_ok;
    return rep;
}

} // namespace evostab
