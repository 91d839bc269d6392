#include "evostab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evostab/errors.hpp"

namespace evostab {

EvolutionFamily scalar_exponential_family(double rate) {
    EvolutionFamily F;
    F.dim = 1;
    F.kind = FamilyKind::linear;
    F.growth = GrowthBound{1.0, rate >= 0.0 ? 1e-6 : -rate};
    F.evaluate = [rate](double t, double s, const State& x) {
        return State{std::exp(-rate * (t - s)) * x[0]};
    };
    return F;
}

EvolutionFamily identity_family(std::size_t dim) {
    EvolutionFamily F;
    F.dim = dim;
    F.kind = FamilyKind::linear;
    F.growth = GrowthBound{1.0, 1e-6};
    F.evaluate = [](double, double, const State& x) { return x; };
    return F;
}

Trajectory trajectory(const EvolutionFamily& F, double t0, const State& x0, const Grid& grid) {
    if (t0 < grid.t0 - 0.25 * grid.dt || t0 > grid.t_end() + 0.25 * grid.dt)
        throw std::invalid_argument("trajectory start lies outside the grid span");
    Trajectory traj{t0, x0, SampledSignal(grid, x0.size())};
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.time(k);
        if (t >= t0 - 0.25 * grid.dt) traj.path.set_node(k, F(std::max(t, t0), t0, x0));
    }
    return traj;
}

std::pair<State, State> StateSampler::draw_pair(Rng& rng, double min_separation) const {
    for (int attempts = 0; attempts < 64; ++attempts) {
        State x = draw(rng);
        State y = draw(rng);
        if (distance(x, y) >= min_separation) return {std::move(x), std::move(y)};
    }
    throw EstimationError("sampler produced only coincident pairs");
}

LipschitzEstimate estimate_lip_norm(const EvolutionFamily& F, double t, double s,
                                    const StateSampler& sampler, std::size_t n_pairs,
                                    std::uint64_t seed) {
    if (t < s) throw std::invalid_argument("require t >= s");
    if (n_pairs == 0) throw std::invalid_argument("need at least one pair");
    LipschitzEstimate est{t, s, 0.0, n_pairs, seed, {}};
    est.ratios.resize(n_pairs);

    // Pair draws are serial (seed-stable); ratio evaluation is the
    // data-parallel part.
    std::vector<std::pair<State, State>> pairs(n_pairs);
    Rng rng(seed);
    for (auto& pr : pairs) pr = sampler.draw_pair(rng);

    const auto np = static_cast<std::ptrdiff_t>(n_pairs);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < np; ++i) {
        const auto& [x, y] = pairs[static_cast<std::size_t>(i)];
        est.ratios[static_cast<std::size_t>(i)] =
            distance(F(t, s, x), F(t, s, y)) / distance(x, y);
    }
    est.value = *std::max_element(est.ratios.begin(), est.ratios.end());
    return est;
}

AxiomReport check_axioms(const EvolutionFamily& F, const Grid& grid, const StateSampler& sampler,
                         std::size_t n_samples, std::uint64_t seed, double tol_identity,
                         double tol_cocycle, double tol_growth) {
    AxiomReport rep;
    Rng rng(seed);
    for (std::size_t i = 0; i < n_samples; ++i) {
        // three grid times s <= r <= t
        double a = grid.time(rng.index(grid.n));
        double b = grid.time(rng.index(grid.n));
        double c = grid.time(rng.index(grid.n));
        double s = std::min({a, b, c});
        double t = std::max({a, b, c});
        double r = a + b + c - s - t;
        auto [x, y] = sampler.draw_pair(rng);

        rep.max_identity_defect =
            std::max(rep.max_identity_defect, distance(F(t, t, x), x));

        const State direct = F(t, s, x);
        const State through = F(t, r, F(r, s, x));
        const double defect = distance(direct, through);
        if (defect > rep.max_cocycle_defect) {
            rep.max_cocycle_defect = defect;
            rep.worst_cocycle_gap = t - s;
        }

        const double ratio = distance(direct, F(t, s, y)) / distance(x, y);
        const double bound = F.growth.M * std::exp(F.growth.omega * (t - s));
        rep.max_growth_excess = std::max(rep.max_growth_excess, ratio - bound);
    }
    rep.identity_ok = rep.max_identity_defect <= tol_identity;
    rep.cocycle_ok = rep.max_cocycle_defect <= tol_cocycle;
    rep.growth_ok = rep.max_growth_excess <= tol_growth;
    rep.passed = rep.identity_ok && rep.cocycle_ok && rep.growth_ok;
    return rep;
}

GrowthBound growth_from_phi(const std::function<double(double)>& phi, std::size_t grid_points) {
    const double at_one = phi(1.0);
    if (!(at_one > 0.0)) throw std::domain_error("growth envelope must be positive at 1");
    double sup = 0.0;
    for (std::size_t k = 0; k <= grid_points; ++k) {
        sup = std::max(sup, phi(static_cast<double>(k) / static_cast<double>(grid_points)));
    }
    return GrowthBound{sup, std::max(1.0, std::log(at_one))};
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2 || x.size() != y.size())
        throw std::invalid_argument("line fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw std::invalid_argument("degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(y[i] - fit.intercept - fit.slope * x[i]));
    return fit;
}

StabilityClassification classify_stability(const EvolutionFamily& F, const Grid& grid,
                                           const StateSampler& sampler, double tol,
                                           std::uint64_t seed) {
    StabilityClassification cls;

    // Geometrically spaced gaps balance short and long horizons.
    const double max_gap = grid.span();
    const double min_gap = std::max(grid.dt, max_gap / 512.0);
    std::vector<double> gaps;
    for (double g = min_gap; g < max_gap * 0.999; g *= 1.7) gaps.push_back(g);
    gaps.push_back(max_gap);

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        // snap the gap and a couple of base points to the grid
        const auto gap_nodes = std::max<std::size_t>(1,
            static_cast<std::size_t>(std::llround(gaps[i] / grid.dt)));
        if (gap_nodes >= grid.n) continue;
        double value = 0.0;
        for (std::size_t base : {std::size_t{0}, (grid.n - 1 - gap_nodes) / 2, grid.n - 1 - gap_nodes}) {
            const double s = grid.time(base);
            const double t = grid.time(base + gap_nodes);
            value = std::max(value, estimate_lip_norm(F, t, s, sampler, 16,
                                                      derive_seed(seed, i)).value);
        }
        const double gap = static_cast<double>(gap_nodes) * grid.dt;
        cls.samples.push_back({gap, value});
        cls.max_estimate = std::max(cls.max_estimate, value);
        if (value > 0.0) {
            xs.push_back(gap);
            ys.push_back(std::log(value));
        }
    }

    if (xs.size() >= 2) {
        const LineFit fit = fit_line(xs, ys);
        cls.fit_slope = fit.slope;
        cls.fit_max_residual = fit.max_residual;
        cls.fitted_nu = -fit.slope;
        cls.fitted_N = std::exp(fit.intercept);

        cls.uniformly_stable = fit.slope <= tol;
        cls.uniformly_exponentially_stable =
            cls.fitted_nu > tol && fit.max_residual <= std::max(tol, 1e-2);
        if (cls.uniformly_exponentially_stable) {
            // sanity: the fitted envelope must dominate every sample (small slack)
            for (const auto& smp : cls.samples) {
                if (smp.value > (cls.fitted_N + tol) * std::exp(-cls.fitted_nu * smp.gap) + tol) {
                    cls.fitted_N = smp.value * std::exp(cls.fitted_nu * smp.gap);
                }
            }
        }
    }

    // Asymptotic stability: every sampled trajectory tail sits below tol.
    cls.asymptotically_stable = true;
    Rng rng(derive_seed(seed, 9001));
    const std::size_t tail_start = grid.n - std::max<std::size_t>(1, grid.n / 4);
    for (std::size_t i = 0; i < 8; ++i) {
        const double t0 = grid.time(rng.index(std::max<std::size_t>(1, grid.n / 4)));
        const State x0 = sampler.draw(rng);
        const Trajectory traj = trajectory(F, t0, x0, grid);
        for (std::size_t k = tail_start; k < grid.n; ++k) {
            if (traj.path.node_norm(k) > tol) {
                cls.asymptotically_stable = false;
                break;
            }
        }
        if (!cls.asymptotically_stable) break;
    }
    return cls;
}

} // namespace evostab
