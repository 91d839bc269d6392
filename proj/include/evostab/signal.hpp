#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evostab {

/// Finite-dimensional state vector; scalars are dimension 1.
using State = std::vector<double>;

inline double norm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

inline double norm(const State& x) { return norm(std::span<const double>(x)); }

inline double distance(const State& x, const State& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Uniform time grid t0 + k*dt, k = 0..n-1, on the half-line (t0 >= 0).
struct Grid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 0;

    Grid() = default;
    Grid(double start, double step, std::size_t nodes) : t0(start), dt(step), n(nodes) {
        if (!(dt > 0.0)) throw std::invalid_argument("grid step must be positive");
        if (t0 < 0.0) throw std::invalid_argument("grid must lie on the half-line t >= 0");
        if (n == 0) throw std::invalid_argument("grid must contain at least one node");
    }

    /// Grid covering [t0, t0 + span] with the node count rounded to the step.
    static Grid over(double t0, double span, double dt) {
        if (!(span >= 0.0)) throw std::invalid_argument("grid span must be nonnegative");
        const auto nodes = static_cast<std::size_t>(std::llround(span / dt)) + 1;
        return Grid(t0, dt, nodes);
    }

    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double t_end() const { return time(n - 1); }
    double span() const { return static_cast<double>(n - 1) * dt; }

    /// Index of the node nearest to t; throws if t is off the grid by more
    /// than a quarter step.
    std::size_t index_of(double t) const {
        const double k = (t - t0) / dt;
        const auto i = static_cast<long long>(std::llround(k));
        if (i < 0 || static_cast<std::size_t>(i) >= n || std::abs(k - static_cast<double>(i)) > 0.25)
            throw std::invalid_argument("time not on grid: " + std::to_string(t));
        return static_cast<std::size_t>(i);
    }
};

/// A function sampled on a uniform grid, with vector (or scalar) values.
/// Node-major storage; immutable once built except through node spans.
class SampledSignal {
public:
    SampledSignal() = default;

    SampledSignal(const Grid& grid, std::size_t dim)
        : grid_(grid), dim_(dim), data_(grid.n * dim, 0.0) {
        if (dim_ == 0) throw std::invalid_argument("signal dimension must be positive");
    }

    static SampledSignal scalar(const Grid& grid) { return SampledSignal(grid, 1); }

    const Grid& grid() const { return grid_; }
    std::size_t nodes() const { return grid_.n; }
    std::size_t dim() const { return dim_; }
    double t0() const { return grid_.t0; }
    double dt() const { return grid_.dt; }
    double time(std::size_t k) const { return grid_.time(k); }

    std::span<double> node(std::size_t k) {
        return std::span<double>(data_.data() + k * dim_, dim_);
    }
    std::span<const double> node(std::size_t k) const {
        return std::span<const double>(data_.data() + k * dim_, dim_);
    }

    State node_state(std::size_t k) const {
        auto v = node(k);
        return State(v.begin(), v.end());
    }

    void set_node(std::size_t k, std::span<const double> value) {
        if (value.size() != dim_) throw std::invalid_argument("state dimension mismatch");
        std::copy(value.begin(), value.end(), data_.begin() + k * dim_);
    }

    double& at(std::size_t k, std::size_t c = 0) { return data_[k * dim_ + c]; }
    double at(std::size_t k, std::size_t c = 0) const { return data_[k * dim_ + c]; }

    double node_norm(std::size_t k) const { return evostab::norm(node(k)); }

    /// Value at an on-grid time (nearest-node lookup).
    State value_at(double t) const { return node_state(grid_.index_of(t)); }

    double max_node_norm() const {
        double m = 0.0;
        for (std::size_t k = 0; k < nodes(); ++k) m = std::max(m, node_norm(k));
        return m;
    }

    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw() { return data_; }

private:
    Grid grid_{};
    std::size_t dim_ = 1;
    std::vector<double> data_;
};

SampledSignal difference(const SampledSignal& a, const SampledSignal& b);
SampledSignal sum(const SampledSignal& a, const SampledSignal& b);
SampledSignal scaled(const SampledSignal& a, double c);

/// Largest node-wise distance between two signals on the same grid.
double max_node_distance(const SampledSignal& a, const SampledSignal& b);

/// CSV with header "t,v0,...,v{d-1}" and one row per node.
void write_csv(std::ostream& out, const SampledSignal& s);
SampledSignal read_csv(std::istream& in);

} // namespace evostab
