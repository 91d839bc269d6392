#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "evostab/errors.hpp"
#include "evostab/green.hpp"
#include "evostab/lp.hpp"
#include "evostab/stability.hpp"
#include "oracles.hpp"

using namespace evostab;

namespace {
const Exponent one = Exponent::finite(1.0);
const Exponent two = Exponent::finite(2.0);
const Exponent inf = Exponent::inf();

SampledSignal sampled(const Grid& g, const std::function<double(double)>& fn) {
    SampledSignal s = SampledSignal::scalar(g);
    for (std::size_t k = 0; k < g.n; ++k) s.at(k) = fn(g.time(k));
    return s;
}
} // namespace

TEST_CASE("window-domination sup bound") {
    const Grid g = Grid::over(0.0, 10.0, 0.01);
    SUBCASE("decaying exponential") {
        const auto out = window_sup_bound(sampled(g, [](double t) { return std::exp(-t); }), 1.0,
                                          one);
        CHECK(out.premise_holds);
        CHECK(out.bound == doctest::Approx(2.0).epsilon(1e-3)); // 1 * (1 + ||h||_1)
        CHECK(out.sup_h == 1.0);
        CHECK(out.sup_within_bound);
    }
    SUBCASE("zero signal") {
        const auto out = window_sup_bound(SampledSignal::scalar(g), 1.0, one);
        CHECK(out.premise_holds);
        CHECK(out.bound == 0.0);
        CHECK(out.sup_h == 0.0);
        CHECK(out.sup_within_bound);
    }
    SUBCASE("nonincreasing box") {
        const auto out =
            window_sup_bound(indicator_signal(g, 0.0, 2.0, {1.0}), 1.0, one, 1e-9);
        CHECK(out.premise_holds);
        CHECK(out.bound == doctest::Approx(3.0).epsilon(5e-3)); // 1 + 2, box edge half-cell
        CHECK(out.sup_within_bound);
    }
    SUBCASE("growing samples violate the premise") {
        const auto out = window_sup_bound(sampled(g, [](double t) { return t; }), 1.0, one);
        CHECK_FALSE(out.premise_holds);
    }
    SUBCASE("negative samples are rejected") {
        CHECK_THROWS_AS(window_sup_bound(sampled(g, [](double t) { return -t; }), 1.0, one),
                        std::domain_error);
    }
}

TEST_CASE("rate extraction formulas") {
    {
        const RatePair rp = decay_rate_from_contraction(1.0, 1.0, std::exp(-1.0));
        CHECK(rp.N == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
        CHECK(rp.nu == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const RatePair rp = decay_rate_from_contraction(2.0, 2.0, 0.5);
        CHECK(rp.nu == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
        CHECK(rp.N == 4.0);
    }
    CHECK_THROWS_AS(decay_rate_from_contraction(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(decay_rate_from_contraction(1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(decay_rate_from_contraction(1.0, -1.0, 0.5), std::domain_error);
}

TEST_CASE("certificate verification") {
    StabilityCertificate cert;
    cert.N = std::exp(1.0);
    cert.nu = 1.0;
    std::vector<GapDecaySample> samples;
    for (int k = 0; k <= 50; ++k) {
        const double gap = 0.3 * k;
        samples.push_back({gap + 1.0, 1.0, std::exp(-gap)});
    }
    CHECK(verify_certificate(samples, cert, 1e-12));

    StabilityCertificate weak;
    weak.N = 1.0;
    weak.nu = 0.1;
    std::vector<GapDecaySample> flat = {{10.0, 0.0, 1.0}};
    CHECK_FALSE(verify_certificate(flat, weak, 1e-12));

    CHECK(verify_certificate(std::span<const GapDecaySample>{}, weak, 0.0));
}

TEST_CASE("staircase envelopes satisfy the extracted certificate") {
    Rng rng(1001);
    for (int trial = 0; trial < 100; ++trial) {
        const double M = rng.uniform(0.5, 4.0);
        const double d = rng.uniform(0.1, 3.0);
        const double c = rng.uniform(0.05, 0.95);
        const RatePair rp = decay_rate_from_contraction(M, d, c);
        StabilityCertificate cert;
        cert.N = rp.N;
        cert.nu = rp.nu;
        std::vector<GapDecaySample> samples;
        for (int k = 0; k <= 100; ++k) {
            const double gap = k * d / 7.0;
            samples.push_back({gap, 0.0, oracles::staircase(gap, M, d, c)});
        }
        CHECK(verify_certificate(samples, cert, 1e-12));
    }
}

TEST_CASE("gauge exponent of the certifying equation") {
    CHECK(gauge_exponent(two, two) == doctest::Approx(1.0));
    CHECK(gauge_exponent(one, one) == doctest::Approx(1.0));
    CHECK(gauge_exponent(one, inf) == 0.0);
    CHECK(gauge_exponent(inf, inf) == doctest::Approx(1.0));
    CHECK(gauge_exponent(two, inf) == doctest::Approx(0.5));
    CHECK(gauge_exponent(inf, two) == doctest::Approx(1.5));
}

TEST_CASE("certificate construction from an admissibility constant") {
    const StabilityCertificate cert =
        certify_exponential_stability(1.0, 1.0, 1e-6, two, two);
    REQUIRE(cert.audit.has_value());
    CHECK(cert.audit->C == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(cert.audit->d == doctest::Approx(4.0 * cert.audit->C * cert.audit->C).epsilon(1e-12));
    CHECK(cert.nu == doctest::Approx(std::log(2.0) / cert.audit->d).epsilon(1e-12));
    CHECK(cert.N == doctest::Approx(2.0 * cert.audit->C).epsilon(1e-12));
    CHECK(cert.provenance == StabilityCertificate::Provenance::theoretical);

    CHECK_THROWS_AS(certify_exponential_stability(1.0, 1.0, 1e-6, one, inf), HypothesisError);
    CHECK_THROWS_AS(certify_exponential_stability(-1.0, 1.0, 1e-6, two, two),
                    std::invalid_argument);

    // same gauge shape for the (1,1) pair
    const StabilityCertificate c11 = certify_exponential_stability(1.0, 1.0, 1e-6, one, one);
    CHECK(c11.audit->d == doctest::Approx(cert.audit->d).epsilon(1e-12));
}

TEST_CASE("exponential convolution against closed forms") {
    const Grid g = Grid::over(0.0, 6.0, 1e-3);
    SUBCASE("unit box") {
        const SampledSignal H = exp_convolve(indicator_signal(g, 0.0, 1.0, {1.0}), 1.0);
        double err = 0.0;
        for (std::size_t k = 0; k < g.n; ++k)
            err = std::max(err, std::abs(H.at(k) - oracles::box_convolution(g.time(k), 1.0)));
        CHECK(err <= g.dt);
    }
    SUBCASE("zero input") {
        CHECK(exp_convolve(SampledSignal::scalar(g), 3.0).max_node_norm() == 0.0);
    }
    SUBCASE("constant input") {
        SampledSignal ones = SampledSignal::scalar(g);
        for (auto& v : ones.raw()) v = 1.0;
        const SampledSignal H = exp_convolve(ones, 2.0);
        double err = 0.0;
        for (std::size_t k = 0; k < g.n; ++k)
            err = std::max(err, std::abs(H.at(k) - oracles::ones_convolution(g.time(k), 2.0)));
        CHECK(err <= 1e-6);
        CHECK(lp_norm(H, inf) <= 0.5);
    }
}

TEST_CASE("scan and direct quadrature convolutions agree") {
    const Grid g = Grid::over(0.0, 8.0, 0.01);
    for (int i = 0; i < 5; ++i) {
        SampledSignal h = band_limited_signal(g, 1, derive_seed(31, i));
        for (auto& v : h.raw()) v = std::abs(v);
        const double nu = 0.4 + 0.6 * i;
        CHECK(max_node_distance(exp_convolve(h, nu), exp_convolve_direct(h, nu)) <= 1e-10);
    }
}

TEST_CASE("convolution output shrinks as the decay rate grows") {
    const Grid g = Grid::over(0.0, 8.0, 0.01);
    SampledSignal h = band_limited_signal(g, 1, 41);
    for (auto& v : h.raw()) v = std::abs(v);
    const SampledSignal slow = exp_convolve(h, 0.5);
    const SampledSignal fast = exp_convolve(h, 1.5);
    for (std::size_t k = 0; k < g.n; ++k) CHECK(fast.at(k) <= slow.at(k) + 1e-15);
}

TEST_CASE("convolution decay bounds: worked examples per regime") {
    SUBCASE("sup-to-sup regime") {
        // h = 1 makes the bound an equality in the long-horizon limit, so
        // the trapezoid overshoot (convex kernel) needs its allowance
        const Grid g = Grid::over(0.0, 20.0, 0.01);
        SampledSignal ones = SampledSignal::scalar(g);
        for (auto& v : ones.raw()) v = 1.0;
        const auto out = convolution_bound({inf, inf, 2.0, 0.5, 0.5}, ones, 1e-4);
        CHECK(out.regime == "p=inf");
        CHECK(out.bound_constant == doctest::Approx(0.5));
        CHECK(out.H_norm_q == doctest::Approx(0.5).epsilon(1e-4));
        CHECK(out.holds);
    }
    SUBCASE("integrable-input regime") {
        const Grid g = Grid::over(0.0, 10.0, 1e-3);
        const auto out =
            convolution_bound({one, inf, 1.0, 0.5, 0.5}, indicator_signal(g, 0.0, 1.0, {1.0}));
        CHECK(out.regime == "p=1");
        CHECK(out.bound_constant == doctest::Approx(1.0));
        CHECK(out.H_norm_q == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-4));
        CHECK(out.holds);
    }
    SUBCASE("intermediate regime with the square-integrable pair") {
        const Grid g = Grid::over(0.0, 20.0, 1e-3);
        const auto out =
            convolution_bound({two, two, 1.0, 0.5, 0.5}, indicator_signal(g, 0.0, 1.0, {1.0}));
        CHECK(out.regime == "1<p<inf");
        CHECK(out.bound_constant == doctest::Approx(1.0).epsilon(1e-12));
        // closed form: ||H||_2^2 = e^{-1} for this input
        CHECK(out.H_norm_q == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
        CHECK(out.holds);
    }
    SUBCASE("exponent order is enforced") {
        const Grid g = Grid::over(0.0, 5.0, 0.01);
        CHECK_THROWS_AS(convolution_bound({two, one, 1.0, 0.5, 0.5}, SampledSignal::scalar(g)),
                        std::domain_error);
    }
}

TEST_CASE("every kernel split yields a valid intermediate-regime bound") {
    const Grid g = Grid::over(0.0, 15.0, 0.01);
    std::vector<double> constants;
    for (const double alpha : {0.25, 0.5, 0.75}) {
        int violations = 0;
        for (int i = 0; i < 50; ++i) {
            SampledSignal h = band_limited_signal(g, 1, derive_seed(61, i));
            for (auto& v : h.raw()) v = v * v;
            const auto out = convolution_bound({two, two, 1.0, alpha, 1.0 - alpha}, h,
                                               1e-6 * (1.0 + lp_norm(h, two)));
            if (!out.holds) ++violations;
            if (i == 0) constants.push_back(out.bound_constant);
        }
        CHECK(violations == 0);
    }
    // the splits produce genuinely different constants; none is canonical
    CHECK(std::abs(constants[0] - constants[1]) > 1e-6);
    CHECK(std::abs(constants[1] - constants[2]) > 1e-6);
}

TEST_CASE("tail criterion for asymptotic stability") {
    const Grid g = Grid::over(0.0, 20.0, 0.05);
    const StateSampler sampler{1, 1.0};
    CHECK(check_asymptotic_stability(scalar_exponential_family(1.0), g, sampler, 0.25, 1e-3, 12,
                                     5));
    CHECK_FALSE(
        check_asymptotic_stability(identity_family(1), g, sampler, 0.25, 1e-3, 12, 5));
}

TEST_CASE("measured decay certifies the scalar family end to end") {
    const Grid g = Grid::over(0.0, 30.0, 0.05);
    const double nu = 1.0;
    const EvolutionFamily F = scalar_exponential_family(nu);
    const AdmissibilityReport rep = estimate_admissibility(F, two, two, g, 21, 71);
    const StabilityCertificate cert =
        certify_exponential_stability(rep.K_estimate, 1.0, 1e-6, two, two);
    CHECK(cert.nu <= nu);
    std::vector<GapDecaySample> samples;
    for (int k = 0; k <= 40; ++k)
        samples.push_back({k * 0.5, 0.0, std::exp(-nu * k * 0.5)});
    CHECK(verify_certificate(samples, cert, 1e-9));
}
