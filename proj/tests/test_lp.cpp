#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "evostab/green.hpp"
#include "evostab/lp.hpp"
#include "evostab/rng.hpp"
#include "oracles.hpp"

using namespace evostab;

namespace {
const Exponent one = Exponent::finite(1.0);
const Exponent two = Exponent::finite(2.0);
const Exponent inf = Exponent::inf();
} // namespace

TEST_CASE("norm of indicator boxes") {
    const Grid g1 = Grid::over(0.0, 2.0, 1e-3);
    CHECK(lp_norm(indicator_signal(g1, 0.0, 1.0, {1.0}), one) == doctest::Approx(1.0).epsilon(2e-3));

    const Grid g2 = Grid::over(0.0, 5.0, 1e-3);
    CHECK(lp_norm(indicator_signal(g2, 0.0, 4.0, {1.0}), two) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("zero signal has zero norm for every exponent") {
    const SampledSignal z(Grid::over(0.0, 3.0, 0.01), 2);
    for (const Exponent& p : {one, two, Exponent::finite(3.5), inf})
        CHECK(lp_norm(z, p) == 0.0);
}

TEST_CASE("sup norm picks the largest node") {
    const Grid g = Grid::over(0.0, 10.0, 0.01);
    SampledSignal f = SampledSignal::scalar(g);
    for (std::size_t k = 0; k < g.n; ++k) f.at(k) = std::exp(-g.time(k));
    CHECK(lp_norm(f, inf) == 1.0);
}

TEST_CASE("gauge functions") {
    CHECK(gauge_a(4.0, two) == doctest::Approx(2.0));
    CHECK(gauge_a(5.0, one) == 1.0);
    CHECK(gauge_b(5.0, one) == 5.0);
    CHECK(gauge_a(3.0, inf) == 3.0);
    CHECK(gauge_b(3.0, inf) == 1.0);
    CHECK_THROWS_AS(gauge_a(-1.0, two), std::invalid_argument);
}

TEST_CASE("indicator construction and errors") {
    const Grid g = Grid::over(0.0, 4.0, 1e-3);
    // measure-zero support: one node contributes only its half-cells
    CHECK(lp_norm(indicator_signal(g, 2.0, 2.0, {1.0}), one) <= 2.0 * g.dt);

    const State c{1.2, 1.6}; // ||c|| = 2
    const double n2 = lp_norm(indicator_signal(g, 1.0, 3.0, c), two);
    CHECK(n2 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-3));

    CHECK_THROWS_AS(indicator_signal(g, 3.0, 1.0, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(indicator_signal(g, -0.5, 1.0, {1.0}), std::invalid_argument);
}

TEST_CASE("window truncation inequality: worked examples") {
    const Grid g = Grid::over(0.0, 6.0, 1e-3);
    {
        const auto f = indicator_signal(g, 0.0, 1.0, {1.0});
        const auto chk = truncation_bound_check(f, two, 0.0, 1.0, 2e-3);
        CHECK(chk.holds);
        CHECK(chk.lhs == doctest::Approx(1.0).epsilon(2e-3));
        CHECK(chk.rhs == doctest::Approx(1.0).epsilon(2e-3)); // equality case
    }
    {
        const SampledSignal z(g, 1);
        const auto chk = truncation_bound_check(z, one, 0.0, 2.0);
        CHECK(chk.holds);
        CHECK(chk.lhs == 0.0);
        CHECK(chk.rhs == 0.0);
    }
    {
        SampledSignal f = SampledSignal::scalar(g);
        for (std::size_t k = 0; k < g.n; ++k) f.at(k) = std::exp(-g.time(k));
        const auto chk = truncation_bound_check(f, inf, 0.0, 2.0);
        CHECK(chk.holds);
        CHECK(chk.lhs == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-4));
        CHECK(chk.rhs == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("window truncation inequality holds for random draws") {
    const Grid g = Grid::over(0.0, 8.0, 0.01);
    const Exponent ps[] = {one, Exponent::finite(1.5), two, Exponent::finite(4.0), inf};
    Rng rng(321);
    for (int i = 0; i < 200; ++i) {
        const SampledSignal f = band_limited_signal(g, 2, derive_seed(11, i));
        const Exponent p = ps[i % 5];
        const double t0 = rng.uniform(0.0, 6.0);
        const double t = rng.uniform(0.0, 4.0);
        const auto chk = truncation_bound_check(f, p, t0, t, 1e-9);
        CHECK(chk.holds);
    }
}

TEST_CASE("window truncation inequality survives spikes and misaligned windows") {
    const Grid g = Grid::over(0.0, 2.0, 0.01);
    const Exponent ps[] = {one, Exponent::finite(1.5), two, inf};
    Rng rng(654);
    for (int i = 0; i < 200; ++i) {
        SampledSignal f(g, 1);
        for (int s = 0; s < 3; ++s) f.at(rng.index(g.n)) = rng.uniform(0.5, 10.0);
        const std::size_t node = rng.index(g.n - 1);
        const double t0 = g.time(node) + rng.uniform(0.0, g.dt); // off-grid start
        const double t = rng.uniform(0.0, 3.0 * g.dt);           // window near cell scale
        const auto chk = truncation_bound_check(f, ps[i % 4], t0, t, 1e-12);
        CHECK(chk.holds);
    }
}

TEST_CASE("homogeneity to 1e-12 relative") {
    const Grid g = Grid::over(0.0, 5.0, 0.01);
    const SampledSignal f = band_limited_signal(g, 3, 77);
    for (const Exponent& p : {one, two, Exponent::finite(3.0), inf}) {
        const double base = lp_norm(f, p);
        for (const double c : {-3.5, 0.25, 7.0}) {
            const double scaled_norm = lp_norm(scaled(f, c), p);
            CHECK(scaled_norm == doctest::Approx(std::abs(c) * base).epsilon(1e-12));
        }
    }
}

TEST_CASE("norm vanishes only with the signal") {
    const Grid g = Grid::over(0.0, 2.0, 0.01);
    SampledSignal f(g, 1);
    f.at(g.n / 2) = 1e-6;
    CHECK(lp_norm(f, two) > 0.0);
    CHECK(lp_norm(f, inf) > 0.0);
}

TEST_CASE("intermediate exponents interpolate between the endpoints") {
    const Grid g = Grid::over(0.0, 7.0, 0.01);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const SampledSignal f = band_limited_signal(g, 1, derive_seed(6, i));
        const double pv = rng.uniform(1.0, 3.0);
        const double qv = rng.uniform(pv, 8.0);
        const double rv = rng.uniform(pv, qv);
        const Exponent p = Exponent::finite(pv);
        const Exponent q = i % 7 == 0 ? inf : Exponent::finite(qv);
        const Exponent r = i % 7 == 0 ? Exponent::finite(rv + 2.0) : Exponent::finite(rv);
        const double bound = std::max(lp_norm(f, p), lp_norm(f, q));
        CHECK(lp_norm(f, r) <= bound + 1e-9);
    }
}

TEST_CASE("indicator norm reproduces the gauge") {
    const Grid g = Grid::over(0.0, 10.0, 1e-3);
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
        const double t = 0.5 + 0.25 * static_cast<double>(rng.index(38)); // grid-aligned
        const Exponent p = i % 4 == 3 ? inf : Exponent::finite(rng.uniform(1.0, 4.0));
        const double measured = lp_norm(indicator_signal(g, 0.0, t, {1.0}), p);
        CHECK(measured == doctest::Approx(gauge_b(t, p)).epsilon(2e-3));
    }
}

TEST_CASE("library norm agrees with an independent quadrature route") {
    const Grid g = Grid::over(0.0, 4.0, 1e-3);
    SampledSignal f = SampledSignal::scalar(g);
    auto fn = [](double t) { return std::exp(-t) * (1.0 + 0.5 * std::sin(3.0 * t)); };
    for (std::size_t k = 0; k < g.n; ++k) f.at(k) = fn(g.time(k));
    for (const double pv : {1.0, 2.0, 3.0}) {
        const double mine = lp_norm(f, Exponent::finite(pv));
        const double ref = oracles::midpoint_lp_norm(fn, 0.0, 4.0, pv);
        CHECK(mine == doctest::Approx(ref).epsilon(1e-5));
    }
}

TEST_CASE("exponent type") {
    CHECK_THROWS_AS(Exponent::finite(0.5), std::invalid_argument);
    CHECK(Exponent::parse("inf").is_inf());
    CHECK(Exponent::parse("2").value() == 2.0);
    CHECK(Exponent::finite(2.0).conjugate().value() == 2.0);
    CHECK(Exponent::finite(1.0).conjugate().is_inf());
    CHECK(Exponent::finite(4.0).conjugate().value() == doctest::Approx(4.0 / 3.0));
}
