#pragma once

#include <optional>
#include <span>
#include <string>

#include "evostab/evolution.hpp"
#include "evostab/exponent.hpp"
#include "evostab/signal.hpp"

namespace evostab {

/// Exponential-decay certificate ||X(t,s)||_lip <= N e^{-nu (t-s)}.
/// Theoretical certificates carry the full constant chain that produced
/// them; empirical ones come from fitted samples.
struct StabilityCertificate {
    double N = 0.0;
    double nu = 0.0;
    enum class Provenance { empirical, theoretical } provenance = Provenance::empirical;

    struct Audit {
        double M = 0.0;
        double omega = 0.0;
        double K = 0.0;
        double C = 0.0;      ///< uniform bound produced by the admissibility chain
        double d = 0.0;      ///< decay window: the seminorm halves over d
        double c = 0.0;      ///< contraction factor at the window (1/2)
        Exponent p = Exponent::finite(1.0);
        Exponent q = Exponent::finite(1.0);
        double gauge_exponent = 0.0;
    };
    std::optional<Audit> audit;
};

/// Sup bound for a nonnegative h whose values over any unit window are
/// dominated by m times the value at the window's left edge:
/// sup h <= m h(0) + m ||h||_q. Negative samples raise std::domain_error.
struct WindowSupBound {
    bool premise_holds = false;
    double bound = 0.0;
    double sup_h = 0.0;
    bool sup_within_bound = false;
};

WindowSupBound window_sup_bound(const SampledSignal& h, double m, Exponent q,
                                double tol = 1e-9);

/// Turns "bounded by M on windows of length d, contracts by c in (0,1)
/// across each window" into an explicit rate: nu = -ln(c)/d, N = M/c.
/// Throws std::domain_error unless c in (0,1), d > 0, M > 0.
struct RatePair {
    double N = 0.0;
    double nu = 0.0;
};

RatePair decay_rate_from_contraction(double M, double d, double c);

struct GapDecaySample {
    double t = 0.0;
    double t0 = 0.0;
    double value = 0.0;
};

/// True iff every sample satisfies value <= N e^{-nu (t - t0)} + tol.
bool verify_certificate(std::span<const GapDecaySample> samples,
                        const StabilityCertificate& cert, double tol);

/// Exponent e(p, q) with a_p(d) b_q(d) = d^{e(p,q)}; zero exactly for the
/// non-certifiable pair (1, inf).
double gauge_exponent(Exponent p, Exponent q);

/// Builds the theoretical certificate from an admissibility constant K and
/// the growth bound (M, omega): uniform bound
/// C = (K+1) M^2 e^{2 omega} + M e^{omega}, decay window d solving
/// a_p(d) b_q(d) = 4 K C^2, then N = 2C and nu = ln 2 / d. Conservative by
/// construction; soundness, not tightness, is the contract.
/// Throws HypothesisError for the excluded pair (1, inf).
StabilityCertificate certify_exponential_stability(double K, double M, double omega,
                                                   Exponent p, Exponent q);

/// H(t) = int_0^t e^{-nu (t-s)} h(s) ds for scalar h >= 0, evaluated at
/// every node. The default path is the O(n) scan equivalent to the
/// trapezoid sum; exp_convolve_direct is the O(n^2) quadrature evaluated
/// independently at each node (OpenMP) and is kept as the cross-check and
/// benchmark reference.
SampledSignal exp_convolve(const SampledSignal& h, double nu);
SampledSignal exp_convolve_direct(const SampledSignal& h, double nu, bool parallel = true);

/// Exponent regime for the convolution decay estimate. alpha and beta
/// split the kernel inside the Hoelder step of the intermediate regime;
/// they must satisfy alpha + beta = 1.
struct ConvolutionCase {
    Exponent p = Exponent::finite(2.0);
    Exponent q = Exponent::finite(2.0);
    double nu = 1.0;
    double alpha = 0.5;
    double beta = 0.5;
};

struct ConvolutionBound {
    double h_norm_p = 0.0;
    double H_norm_q = 0.0;
    double bound_constant = 0.0;   ///< theoretical constant for the regime
    double bound = 0.0;            ///< bound_constant * ||h||_p
    bool holds = false;
    std::string regime;            ///< "p=inf", "p=1", or "1<p<inf"
};

/// Checks ||H||_q <= const(p, q, nu) ||h||_p for the exponential
/// convolution, with the regime constants
///   p = inf:        1/nu
///   p = 1:          max(1, 1/nu)
///   p in (1, inf):  max((nu p')^{-1/p'}, C^{1/p} (nu beta p)^{-1/p}),
///                   C = (nu alpha p')^{1-p}
/// (q between p and inf is covered by ||.||_q <= max(||.||_p, ||.||_inf)).
/// Requires p <= q; throws std::domain_error otherwise.
ConvolutionBound convolution_bound(const ConvolutionCase& cs, const SampledSignal& h,
                                   double allowance = 1e-9);

/// True iff every sampled trajectory ends below tol on the final
/// tail_fraction of the grid. Start times are drawn from the early part of
/// the grid so the tail genuinely probes long-time behavior.
bool check_asymptotic_stability(const EvolutionFamily& F, const Grid& grid,
                                const StateSampler& sampler, double tail_fraction, double tol,
                                std::size_t n_samples, std::uint64_t seed);

} // namespace evostab
