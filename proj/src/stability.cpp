#include "evostab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evostab/errors.hpp"
#include "evostab/lp.hpp"

namespace evostab {

WindowSupBound window_sup_bound(const SampledSignal& h, double m, Exponent q, double tol) {
    if (h.dim() != 1) throw std::invalid_argument("window bound expects a scalar signal");
    if (m < 1.0) throw std::invalid_argument("domination factor must satisfy m >= 1");
    const Grid& g = h.grid();
    for (std::size_t k = 0; k < g.n; ++k)
        if (h.at(k) < -tol) throw std::domain_error("window bound expects nonnegative samples");

    WindowSupBound out;
    out.premise_holds = true;
    const auto window = static_cast<std::size_t>(std::floor(1.0 / g.dt + 0.5));
    for (std::size_t k = 0; k < g.n && out.premise_holds; ++k) {
        const std::size_t last = std::min(g.n - 1, k + window);
        for (std::size_t r = k; r <= last; ++r) {
            if (h.at(r) > m * h.at(k) + tol) {
                out.premise_holds = false;
                break;
            }
        }
    }
    out.sup_h = h.max_node_norm();
    out.bound = m * h.at(0) + m * lp_norm(h, q);
    out.sup_within_bound = !out.premise_holds || out.sup_h <= out.bound + tol;
    return out;
}

RatePair decay_rate_from_contraction(double M, double d, double c) {
    if (!(c > 0.0 && c < 1.0))
        throw std::domain_error("no decay extractable: contraction factor must lie in (0,1)");
    if (!(d > 0.0)) throw std::domain_error("window length must be positive");
    if (!(M > 0.0)) throw std::domain_error("window bound must be positive");
    RatePair rp;
    rp.nu = -std::log(c) / d;
    rp.N = M / c; // equals M e^{nu d}
    return rp;
}

bool verify_certificate(std::span<const GapDecaySample> samples,
                        const StabilityCertificate& cert, double tol) {
    for (const auto& s : samples) {
        if (s.value > cert.N * std::exp(-cert.nu * (s.t - s.t0)) + tol) return false;
    }
    return true;
}

double gauge_exponent(Exponent p, Exponent q) {
    const double from_p = p.is_inf() ? 1.0 : 1.0 - p.reciprocal();
    const double from_q = q.is_inf() ? 0.0 : q.reciprocal();
    return from_p + from_q;
}

StabilityCertificate certify_exponential_stability(double K, double M, double omega,
                                                   Exponent p, Exponent q) {
    if (!(K > 0.0) || !(M > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("certificate inputs K, M, omega must be positive");
    const double e = gauge_exponent(p, q);
    if (e <= 1e-12)
        throw HypothesisError("exponent pair (" + p.str() + ", " + q.str() +
                              ") is excluded: its gauge product never grows, so no decay "
                              "window exists");

    const double C = (K + 1.0) * M * M * std::exp(2.0 * omega) + M * std::exp(omega);
    const double d = std::pow(4.0 * K * C * C, 1.0 / e);
    const RatePair rp = decay_rate_from_contraction(C, d, 0.5);

    StabilityCertificate cert;
    cert.N = rp.N; // = 2C
    cert.nu = rp.nu;
    cert.provenance = StabilityCertificate::Provenance::theoretical;
    cert.audit = StabilityCertificate::Audit{M, omega, K, C, d, 0.5, p, q, e};
    return cert;
}

SampledSignal exp_convolve(const SampledSignal& h, double nu) {
    if (h.dim() != 1) throw std::invalid_argument("convolution expects a scalar signal");
    const Grid& g = h.grid();
    SampledSignal H = SampledSignal::scalar(g);
    const double decay = std::exp(-nu * g.dt);
    const double half = 0.5 * g.dt;
    double acc = 0.0;
    for (std::size_t k = 1; k < g.n; ++k) {
        // scan form of the trapezoid sum: every existing sample picks up one
        // more kernel factor, the previous endpoint becomes interior
        acc = decay * (acc + half * h.at(k - 1)) + half * h.at(k);
        H.at(k) = acc;
    }
    return H;
}

SampledSignal exp_convolve_direct(const SampledSignal& h, double nu, bool parallel) {
    if (h.dim() != 1) throw std::invalid_argument("convolution expects a scalar signal");
    const Grid& g = h.grid();
    SampledSignal H = SampledSignal::scalar(g);
    const auto n = static_cast<std::ptrdiff_t>(g.n);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t ii = 1; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double t = g.time(i);
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const double w = (j == 0 || j == i) ? 0.5 * g.dt : g.dt;
            acc += w * std::exp(-nu * (t - g.time(j))) * h.at(j);
        }
        H.at(i) = acc;
    }
    return H;
}

ConvolutionBound convolution_bound(const ConvolutionCase& cs, const SampledSignal& h,
                                   double allowance) {
    if (!(cs.p <= cs.q)) throw std::domain_error("convolution bound requires p <= q");
    if (!(cs.nu > 0.0)) throw std::invalid_argument("decay rate must be positive");
    if (std::abs(cs.alpha + cs.beta - 1.0) > 1e-12 || cs.alpha <= 0.0 || cs.beta <= 0.0)
        throw std::invalid_argument("kernel split must satisfy alpha + beta = 1, both in (0,1)");

    ConvolutionBound out;
    out.h_norm_p = lp_norm(h, cs.p);
    out.H_norm_q = lp_norm(exp_convolve(h, cs.nu), cs.q);

    if (cs.p.is_inf()) {
        out.regime = "p=inf";
        out.bound_constant = 1.0 / cs.nu;
    } else if (cs.p.value() == 1.0) {
        out.regime = "p=1";
        out.bound_constant = std::max(1.0, 1.0 / cs.nu);
    } else {
        out.regime = "1<p<inf";
        const double p = cs.p.value();
        const double pc = p / (p - 1.0); // conjugate exponent
        const double c_inf = std::pow(cs.nu * pc, -1.0 / pc);
        const double C = std::pow(cs.nu * cs.alpha * pc, 1.0 - p);
        const double c_p = std::pow(C, 1.0 / p) * std::pow(cs.nu * cs.beta * p, -1.0 / p);
        out.bound_constant = std::max(c_inf, c_p);
    }
    out.bound = out.bound_constant * out.h_norm_p;
    out.holds = out.H_norm_q <= out.bound + allowance;
    return out;
}

bool check_asymptotic_stability(const EvolutionFamily& F, const Grid& grid,
                                const StateSampler& sampler, double tail_fraction, double tol,
                                std::size_t n_samples, std::uint64_t seed) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("tail fraction must lie in (0,1)");
    const auto tail_nodes =
        std::max<std::size_t>(1, static_cast<std::size_t>(tail_fraction * static_cast<double>(grid.n)));
    const std::size_t tail_start = grid.n - tail_nodes;
    // starts drawn from the early half of the pre-tail region
    const std::size_t start_limit = std::max<std::size_t>(1, tail_start / 2);

    Rng rng(seed);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t0 = grid.time(rng.index(start_limit));
        const State x0 = sampler.draw(rng);
        const Trajectory traj = trajectory(F, t0, x0, grid);
        for (std::size_t k = tail_start; k < grid.n; ++k)
            if (traj.path.node_norm(k) > tol) return false;
    }
    return true;
}

} // namespace evostab
