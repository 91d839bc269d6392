#include "evostab/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "evostab/errors.hpp"
#include "evostab/green.hpp"
#include "evostab/lp.hpp"

namespace evostab {

// ---------------------------------------------------------------------------
// ScalarField

namespace {

double speed_check(double v) {
    if (v < 0.5 - 1e-12 || v > 1.0 + 1e-12)
        throw std::domain_error("speed field must map into [1/2, 1]");
    return v;
}

} // namespace

ScalarField::ScalarField(std::function<double(double)> h, double table_step,
                         double initial_span, double inversion_tol)
    : h_(std::move(h)), step_(table_step), inversion_tol_(inversion_tol) {
    if (!(step_ > 0.0) || !(initial_span > 0.0) || !(inversion_tol_ > 0.0))
        throw std::invalid_argument("table step, span and tolerance must be positive");
    const long half = static_cast<long>(std::ceil(initial_span / step_));
    auto tab = std::make_shared<Table>();
    tab->lo = -half;
    tab->values.resize(static_cast<std::size_t>(2 * half + 1));
    // cumulative trapezoid of 1/h outward from H(0) = 0
    tab->values[static_cast<std::size_t>(half)] = 0.0;
    for (long i = 0; i < half; ++i) {
        const double a = 1.0 / speed_check(h_(static_cast<double>(i) * step_));
        const double b = 1.0 / speed_check(h_(static_cast<double>(i + 1) * step_));
        tab->values[static_cast<std::size_t>(half + i + 1)] =
            tab->values[static_cast<std::size_t>(half + i)] + 0.5 * step_ * (a + b);
        const double c = 1.0 / speed_check(h_(-static_cast<double>(i) * step_));
        const double d = 1.0 / speed_check(h_(-static_cast<double>(i + 1) * step_));
        tab->values[static_cast<std::size_t>(half - i - 1)] =
            tab->values[static_cast<std::size_t>(half - i)] - 0.5 * step_ * (c + d);
    }
    std::atomic_store(&table_, std::shared_ptr<const Table>(std::move(tab)));
}

std::shared_ptr<const ScalarField::Table> ScalarField::snapshot() const {
    return std::atomic_load(&table_);
}

void ScalarField::extend_to(double lo_x, double hi_x) const {
    std::lock_guard<std::mutex> guard(extend_mutex_);
    auto cur = std::atomic_load(&table_);
    long new_lo = cur->lo;
    long new_hi = cur->hi();
    while (static_cast<double>(new_lo) * step_ > lo_x) new_lo *= 2;
    while (static_cast<double>(new_hi) * step_ < hi_x) new_hi *= 2;
    if (new_lo == cur->lo && new_hi == cur->hi()) return;

    auto tab = std::make_shared<Table>();
    tab->lo = new_lo;
    tab->values.resize(static_cast<std::size_t>(new_hi - new_lo + 1));
    for (long i = cur->lo; i <= cur->hi(); ++i)
        tab->values[static_cast<std::size_t>(i - new_lo)] = cur->at(i);
    for (long i = cur->hi(); i < new_hi; ++i) {
        const double a = 1.0 / speed_check(h_(static_cast<double>(i) * step_));
        const double b = 1.0 / speed_check(h_(static_cast<double>(i + 1) * step_));
        tab->values[static_cast<std::size_t>(i + 1 - new_lo)] =
            tab->values[static_cast<std::size_t>(i - new_lo)] + 0.5 * step_ * (a + b);
    }
    for (long i = cur->lo; i > new_lo; --i) {
        const double a = 1.0 / speed_check(h_(static_cast<double>(i) * step_));
        const double b = 1.0 / speed_check(h_(static_cast<double>(i - 1) * step_));
        tab->values[static_cast<std::size_t>(i - 1 - new_lo)] =
            tab->values[static_cast<std::size_t>(i - new_lo)] - 0.5 * step_ * (a + b);
    }
    std::atomic_store(&table_, std::shared_ptr<const Table>(std::move(tab)));
}

double ScalarField::H(double u) const {
    auto tab = snapshot();
    if (u < static_cast<double>(tab->lo) * step_ || u > static_cast<double>(tab->hi()) * step_) {
        extend_to(std::min(u, 0.0) - step_, std::max(u, 0.0) + step_);
        tab = snapshot();
    }
    const double pos = u / step_;
    long idx = static_cast<long>(std::floor(pos));
    idx = std::clamp(idx, tab->lo, tab->hi() - 1);
    const double frac = pos - static_cast<double>(idx);
    return tab->at(idx) + frac * (tab->at(idx + 1) - tab->at(idx));
}

double ScalarField::H_inverse(double y) const {
    auto tab = snapshot();
    // slope >= 1, so the preimage of y is within |y| of the origin
    while (y < tab->at(tab->lo) || y > tab->at(tab->hi())) {
        extend_to(-std::abs(y) - 1.0, std::abs(y) + 1.0);
        tab = snapshot();
    }
    long lo = tab->lo, hi = tab->hi();
    while (hi - lo > 1) { // bisection on the monotone table
        const long mid = lo + (hi - lo) / 2;
        (tab->at(mid) <= y ? lo : hi) = mid;
    }
    const double span = tab->at(hi) - tab->at(lo);
    const double frac = span > 0.0 ? (y - tab->at(lo)) / span : 0.0;
    return (static_cast<double>(lo) + frac) * step_;
}

std::shared_ptr<const ScalarField> scalar_field_preset(const std::string& name, double param) {
    if (name == "constant") {
        const double v = std::clamp(param == 0.0 ? 1.0 : param, 0.5, 1.0);
        return std::make_shared<ScalarField>([v](double) { return v; });
    }
    if (name == "affine_clip") {
        const double slope = param == 0.0 ? 0.125 : std::abs(param);
        return std::make_shared<ScalarField>(
            [slope](double u) { return std::clamp(0.75 - slope * u, 0.5, 1.0); });
    }
    if (name == "sin_clip") {
        return std::make_shared<ScalarField>([](double u) {
            const double c = std::clamp(u, -std::numbers::pi / 2, std::numbers::pi / 2);
            return 0.75 - 0.25 * std::sin(c);
        });
    }
    throw ConfigError("unknown speed-field preset: " + name);
}

EvolutionFamily scalar_flow_family(std::shared_ptr<const ScalarField> field) {
    EvolutionFamily F;
    F.dim = 1;
    F.kind = FamilyKind::nonlinear;
    F.growth = GrowthBound{1.0, 1e-6}; // the flow never expands
    F.evaluate = [field](double t, double s, const State& x) {
        return State{field->H_inverse(t - s + field->H(x[0]))};
    };
    return F;
}

// ---------------------------------------------------------------------------
// Reactions

ScalarReaction reaction_preset(const std::string& name, double param) {
    if (name == "none") return ScalarReaction{[](double, double) { return 0.0; }, 0.0, true};
    if (name == "decay") {
        const double lam = param;
        return ScalarReaction{[lam](double, double y) { return -lam * y; }, std::abs(lam), true};
    }
    if (name == "saturating") {
        // g' ranges over [-2, -7/8]
        return ScalarReaction{[](double, double y) { return -y - y / (1.0 + y * y); }, 2.0, true};
    }
    if (name == "exp_forcing") {
        const double rate = param <= 0.0 ? 1.0 : param;
        return ScalarReaction{[rate](double t, double) { return std::exp(-rate * t); }, 0.0,
                              false};
    }
    throw ConfigError("unknown reaction preset: " + name);
}

// ---------------------------------------------------------------------------
// SpectralHeatModel

SpectralHeatModel::SpectralHeatModel(std::size_t n_modes, ScalarReaction g)
    : m_(n_modes), g_(std::move(g)) {
    if (m_ == 0) throw std::invalid_argument("need at least one mode");
    cosmat_.resize(m_ * m_);
    for (std::size_t k = 0; k < m_; ++k)
        for (std::size_t j = 0; j < m_; ++j)
            cosmat_[k * m_ + j] = std::cos(static_cast<double>(k) * collocation_point(j));
}

double SpectralHeatModel::collocation_point(std::size_t j) const {
    return std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m_);
}

State SpectralHeatModel::to_modal(const std::vector<double>& values) const {
    if (values.size() != m_) throw std::invalid_argument("collocation size mismatch");
    State u(m_);
    const double md = static_cast<double>(m_);
    for (std::size_t k = 0; k < m_; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m_; ++j) acc += values[j] * cosmat_[k * m_ + j];
        const double scale = k == 0 ? std::sqrt(std::numbers::pi) / md
                                    : std::sqrt(2.0 * std::numbers::pi) / md;
        u[k] = scale * acc;
    }
    return u;
}

std::vector<double> SpectralHeatModel::to_values(const State& modal) const {
    if (modal.size() != m_) throw std::invalid_argument("mode count mismatch");
    std::vector<double> v(m_);
    const double c0 = 1.0 / std::sqrt(std::numbers::pi);
    const double ck = std::sqrt(2.0 / std::numbers::pi);
    for (std::size_t j = 0; j < m_; ++j) {
        double acc = modal[0] * c0;
        for (std::size_t k = 1; k < m_; ++k) acc += modal[k] * ck * cosmat_[k * m_ + j];
        v[j] = acc;
    }
    return v;
}

State SpectralHeatModel::semigroup_apply(double t, const State& modal) const {
    if (t < 0.0) throw std::domain_error("heat propagator is defined for t >= 0 only");
    if (modal.size() != m_) throw std::invalid_argument("mode count mismatch");
    State out(m_);
    for (std::size_t k = 0; k < m_; ++k) out[k] = modal[k] * std::exp(eigenvalue(k) * t);
    return out;
}

EvolutionFamily SpectralHeatModel::linear_family() const {
    EvolutionFamily U;
    U.dim = m_;
    U.kind = FamilyKind::linear;
    U.growth = GrowthBound{1.0, 1e-6}; // mode 0 neither grows nor decays
    auto self = *this;
    U.evaluate = [self](double t, double s, const State& x) {
        return self.semigroup_apply(t - s, x);
    };
    return U;
}

Nonlinearity SpectralHeatModel::nemytsky() const {
    auto self = *this;
    Nonlinearity f;
    f.lipschitz_L = g_.lipschitz_L;
    f.vanishes_at_zero = g_.vanishes_at_zero;
    f.evaluate = [self](double t, const State& u) {
        auto v = self.to_values(u);
        for (auto& y : v) y = self.g_.evaluate(t, y);
        return self.to_modal(v);
    };
    return f;
}

EvolutionFamily SpectralHeatModel::mild_family(const MildSolveConfig& cfg) const {
    return generate_family(linear_family(), nemytsky(), cfg);
}

// ---------------------------------------------------------------------------
// Half-line semigroups

namespace {

HalfLineState shifted_impl(const HalfLineState& state, double h, const EvolutionFamily& F) {
    if (h < 0.0) throw std::invalid_argument("shift must be nonnegative");
    const Grid& g = state.f.grid();
    const auto k = static_cast<std::size_t>(std::llround(h / g.dt)); // shift snaps to the grid
    HalfLineState out{state.r, SampledSignal(g, state.f.dim())};
    for (std::size_t i = k; i < g.n; ++i)
        out.f.set_node(i, F(g.time(i), g.time(i - k), state.f.node_state(i - k)));
    return out;
}

} // namespace

HalfLineState shifted_propagation_linear(const HalfLineState& state, double h,
                                         const EvolutionFamily& U) {
    return shifted_impl(state, h, U);
}

HalfLineState shifted_propagation(const HalfLineState& state, double h,
                                  const EvolutionFamily& F) {
    return shifted_impl(state, h, F);
}

void mild_shift_sweep(const EvolutionFamily& U, const Nonlinearity& g, const Grid& grid,
                      const std::vector<State>& in, std::vector<State>& out,
                      std::size_t first_node, bool parallel) {
    out.resize(in.size());
    for (std::size_t i = 0; i < std::min(first_node, in.size()); ++i) out[i] = in[i];
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    const auto start = static_cast<std::ptrdiff_t>(std::max<std::size_t>(first_node, 1));
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = start; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = one_step_mild(U, g, grid.time(k - 1), grid.time(k), in[k - 1]);
    }
    if (first_node == 0) out[0] = in[0];
}

double choose_contraction_window(double N, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("need a positive decay rate");
    const double raw = std::log(2.0 * N) / alpha;
    return std::max(1.0, std::ceil(raw));
}

FixedPointResult find_fixed_point(const EvolutionFamily& U, const Nonlinearity& g, double n0,
                                  const Grid& grid, Exponent r, double tol,
                                  std::size_t max_iters, const SampledSignal* start) {
    if (!(n0 > 0.0)) throw std::invalid_argument("window must be positive");
    if (r.is_inf()) throw std::invalid_argument("function-space index must be finite");
    if (std::abs(grid.t0) > 0.25 * grid.dt)
        throw std::invalid_argument("fixed-point iteration lives on the half-line grid t0 = 0");

    const auto micro =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n0 / grid.dt)));

    FixedPointResult res{SampledSignal(grid, U.dim), 0, 0.0, 0.0, {}};
    std::vector<State> cur(grid.n, State(U.dim, 0.0)), nxt;
    if (start) {
        if (start->nodes() != grid.n || start->dim() != U.dim)
            throw std::invalid_argument("start signal does not match the grid");
        for (std::size_t i = 0; i < grid.n; ++i) cur[i] = start->node_state(i);
    }
    // After s sweeps the first s+1 nodes coincide with the fixed point
    // (the settled front advances one node per sweep), so later sweeps
    // skip them.
    std::size_t settled = 0;

    auto to_signal = [&](const std::vector<State>& v) {
        SampledSignal s(grid, U.dim);
        for (std::size_t i = 0; i < grid.n; ++i) s.set_node(i, v[i]);
        return s;
    };

    double prev_distance = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (std::size_t outer = 0; outer < max_iters && !converged; ++outer) {
        const SampledSignal before = to_signal(cur);
        for (std::size_t step = 0; step < micro; ++step) {
            mild_shift_sweep(U, g, grid, cur, nxt, settled + 1, true);
            std::swap(cur, nxt);
            if (settled < grid.n - 1) ++settled;
        }
        const double dist = lp_norm(difference(to_signal(cur), before), r);
        res.distances.push_back(dist);
        res.outer_iterations = outer + 1;
        res.last_distance = dist;
        if (dist <= tol) {
            converged = true;
        } else if (dist > prev_distance * (1.0 + 1e-12)) {
            throw ConvergenceError("shift iteration is not contracting; enlarge the window",
                                   dist);
        }
        prev_distance = dist;
    }
    if (!converged)
        throw ConvergenceError("fixed-point iteration did not reach tolerance",
                               res.last_distance);

    res.phi = to_signal(cur);

    // certify the integral-equation defect: phi(t) = int_0^t U(t,xi) g(xi, phi(xi)) dxi
    SampledSignal reaction(grid, U.dim);
    for (std::size_t i = 0; i < grid.n; ++i) reaction.set_node(i, g(grid.time(i), cur[i]));
    res.residual = max_node_distance(green_apply(U, reaction), res.phi);
    return res;
}

// ---------------------------------------------------------------------------
// Boundedness of mild solutions

BoundednessReport check_mild_solution_boundedness(const EvolutionFamily& F,
                                                  const StateSampler& sampler, const Grid& grid,
                                                  double N, double tol, std::size_t n_samples,
                                                  std::uint64_t seed) {
    BoundednessReport rep;
    Rng rng(seed);
    const State zero(F.dim, 0.0);
    for (std::size_t i = 0; i < std::max<std::size_t>(8, n_samples / 4); ++i) {
        const double s = grid.time(rng.index(grid.n));
        const double t = grid.time(rng.index(grid.n));
        if (t < s) continue;
        const double defect = norm(F(t, s, zero));
        if (defect > rep.zero_defect) {
            rep.zero_defect = defect;
            rep.zero_witness_gap = t - s;
        }
    }
    rep.hypothesis_ok = rep.zero_defect <= tol;
    if (!rep.hypothesis_ok) return rep; // refused: the zero solution is not preserved

    rep.bound_holds = true;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double s = grid.time(rng.index(grid.n));
        const double t = grid.time(rng.index(grid.n));
        if (t < s) continue;
        const State x = sampler.draw(rng);
        const double excess = norm(F(t, s, x)) - N * norm(x);
        rep.max_excess = std::max(rep.max_excess, excess);
        if (excess > tol) rep.bound_holds = false;
    }
    return rep;
}

} // namespace evostab
