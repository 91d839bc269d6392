#include "evostab/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace evostab {

Exponent Exponent::parse(const std::string& text) {
    std::string low;
    for (char c : text) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low == "inf" || low == "infinity" || low == "oo") return inf();
    try {
        return finite(std::stod(text));
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse exponent: " + text);
    }
}

std::string Exponent::str() const {
    if (is_inf()) return "inf";
    if (p_ == static_cast<double>(static_cast<long long>(p_)))
        return std::to_string(static_cast<long long>(p_));
    return std::to_string(p_);
}

double lp_norm(const SampledSignal& f, Exponent p) {
    if (p.is_inf()) return f.max_node_norm();
    const double pv = p.value();
    const std::size_t n = f.nodes();
    if (n < 2) return 0.0; // single node carries no measure
    double acc = 0.0;
    double prev = std::pow(f.node_norm(0), pv);
    for (std::size_t k = 1; k < n; ++k) {
        const double cur = std::pow(f.node_norm(k), pv);
        acc += 0.5 * (prev + cur);
        prev = cur;
    }
    return std::pow(acc * f.dt(), 1.0 / pv);
}

double gauge_a(double t, Exponent p) {
    if (t < 0.0) throw std::invalid_argument("gauge argument must be nonnegative");
    if (p.is_inf()) return t;
    return std::pow(t, 1.0 - p.reciprocal());
}

double gauge_b(double t, Exponent p) {
    if (t < 0.0) throw std::invalid_argument("gauge argument must be nonnegative");
    if (p.is_inf()) return 1.0;
    return std::pow(t, p.reciprocal());
}

SampledSignal indicator_signal(const Grid& grid, double a, double b, const State& amplitude) {
    if (a < 0.0 || a > b)
        throw std::invalid_argument("invalid interval: require 0 <= a <= b");
    SampledSignal s(grid, amplitude.size());
    const double eps = 0.25 * grid.dt;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.time(k);
        if (t >= a - eps && t <= b + eps) s.set_node(k, amplitude);
    }
    return s;
}

namespace {

// piecewise-linear interpolant of the node norms; keeps the windowed
// quadrature weights dominated by the full-grid trapezoid weights, so the
// gauge inequality holds exactly for grid functions
double norm_interp(const SampledSignal& f, double t) {
    const Grid& g = f.grid();
    const double pos = (t - g.t0) / g.dt;
    const auto idx = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(pos))), g.n - 2);
    const double frac = std::clamp(pos - static_cast<double>(idx), 0.0, 1.0);
    return (1.0 - frac) * f.node_norm(idx) + frac * f.node_norm(idx + 1);
}

} // namespace

double integral_of_norm(const SampledSignal& f, double from, double to) {
    if (to <= from) return 0.0;
    const Grid& g = f.grid();
    // Clip to the grid domain; the signal is zero outside it.
    const double lo = std::max(from, g.t0);
    const double hi = std::min(to, g.t_end());
    if (hi <= lo) return 0.0;
    const auto i0 = static_cast<std::size_t>(std::ceil((lo - g.t0) / g.dt - 1e-12));
    const auto i1 = static_cast<std::size_t>(std::floor((hi - g.t0) / g.dt + 1e-12));
    if (i1 < i0) // window strictly inside one cell
        return 0.5 * (norm_interp(f, lo) + norm_interp(f, hi)) * (hi - lo);
    double acc = 0.0;
    double prev = f.node_norm(i0);
    for (std::size_t k = i0 + 1; k <= i1; ++k) {
        const double cur = f.node_norm(k);
        acc += 0.5 * (prev + cur) * g.dt;
        prev = cur;
    }
    // partial cells at the window ends, trapezoid on the interpolant
    if (lo < g.time(i0))
        acc += 0.5 * (norm_interp(f, lo) + f.node_norm(i0)) * (g.time(i0) - lo);
    if (hi > g.time(i1))
        acc += 0.5 * (f.node_norm(i1) + norm_interp(f, hi)) * (hi - g.time(i1));
    return acc;
}

TruncationCheck truncation_bound_check(const SampledSignal& f, Exponent p, double t0,
                                       double t, double tol) {
    if (t < 0.0) throw std::invalid_argument("window length must be nonnegative");
    TruncationCheck c;
    c.lhs = integral_of_norm(f, t0, t0 + t);
    c.rhs = gauge_a(t, p) * lp_norm(f, p);
    c.holds = c.lhs <= c.rhs + tol;
    return c;
}

} // namespace evostab
