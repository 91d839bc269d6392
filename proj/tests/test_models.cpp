#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "evostab/errors.hpp"
#include "evostab/green.hpp"
#include "evostab/lp.hpp"
#include "evostab/models.hpp"
#include "evostab/stability.hpp"
#include "oracles.hpp"

using namespace evostab;

TEST_CASE("scalar field with unit speed is the pure drift") {
    const auto field = scalar_field_preset("constant", 1.0);
    const EvolutionFamily F = scalar_flow_family(field);
    CHECK(F(3.0, 1.0, {0.5})[0] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(F(2.0, 2.0, {0.7})[0] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("scalar field with half speed halves the drift") {
    const auto field = scalar_field_preset("constant", 0.5);
    const EvolutionFamily F = scalar_flow_family(field);
    for (const double t : {0.5, 2.0, 7.0})
        CHECK(F(t, 0.0, {0.25})[0] == doctest::Approx(0.25 + 0.5 * t).epsilon(1e-12));
}

TEST_CASE("flow ratios stay inside the two-sided speed band") {
    Rng rng(2024);
    for (const char* preset : {"constant", "affine_clip", "sin_clip"}) {
        const EvolutionFamily F = scalar_flow_family(scalar_field_preset(preset, 0.75));
        for (int i = 0; i < 500; ++i) {
            const double s = rng.uniform(0.0, 8.0);
            const double t = s + rng.uniform(0.0, 12.0);
            const double x = rng.uniform(-4.0, 4.0);
            double y = rng.uniform(-4.0, 4.0);
            if (std::abs(x - y) < 1e-6) y += 1e-2;
            const double ratio = std::abs(F(t, s, {x})[0] - F(t, s, {y})[0]) / std::abs(x - y);
            CHECK(ratio >= 0.5 - 1e-6);
            CHECK(ratio <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("flow satisfies the family axioms within the inversion tolerance") {
    const auto field = scalar_field_preset("sin_clip");
    const EvolutionFamily F = scalar_flow_family(field);
    const Grid g = Grid::over(0.0, 8.0, 0.1);
    const auto rep = check_axioms(F, g, StateSampler{1, 3.0}, 300, 5,
                                  10.0 * field->inversion_tol(), 10.0 * field->inversion_tol());
    CHECK(rep.passed);
}

TEST_CASE("table extension covers far-away arguments") {
    const auto field = scalar_field_preset("affine_clip");
    // far outside the initial span on both sides
    CHECK(field->H(200.0) >= 200.0);
    CHECK(field->H(-200.0) <= -200.0);
    const EvolutionFamily F = scalar_flow_family(field);
    const double far = F(150.0, 0.0, {-120.0})[0];
    CHECK(std::isfinite(far));
    // composition still exact after extension
    CHECK(F(150.0, 0.0, {-120.0})[0] ==
          doctest::Approx(F(150.0, 60.0, F(60.0, 0.0, {-120.0}))[0]).epsilon(1e-11));
}

TEST_CASE("unknown presets are rejected") {
    CHECK_THROWS_AS(scalar_field_preset("quadratic"), ConfigError);
    CHECK_THROWS_AS(reaction_preset("cubic"), ConfigError);
}

TEST_CASE("mode transform round trip and isometry") {
    const SpectralHeatModel model(16, reaction_preset("none"));
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const State u = rng.uniform_vector(16, -2.0, 2.0);
        const State back = model.to_modal(model.to_values(u));
        CHECK(distance(u, back) <= 1e-10);
        // Euclidean mode norm equals the collocation L^2 norm
        const auto vals = model.to_values(u);
        double quad = 0.0;
        for (double v : vals) quad += v * v;
        quad = std::sqrt(quad * std::numbers::pi / 16.0);
        CHECK(norm(u) == doctest::Approx(quad).epsilon(1e-12));
    }
}

TEST_CASE("heat propagator decays each mode at its eigenvalue") {
    const SpectralHeatModel model(8, reaction_preset("none"));
    State u(8, 0.0);
    u[1] = 1.0;
    CHECK(model.semigroup_apply(1.0, u)[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    State flat(8, 0.0);
    flat[0] = 2.5;
    CHECK(model.semigroup_apply(5.0, flat)[0] == 2.5); // zero eigenvalue
    const State id = model.semigroup_apply(0.0, u);
    CHECK(distance(id, u) == 0.0);
    CHECK_THROWS_AS(model.semigroup_apply(-0.1, u), std::domain_error);
}

TEST_CASE("lifted reaction keeps the scalar Lipschitz constant") {
    const SpectralHeatModel model(12, reaction_preset("saturating"));
    const Nonlinearity f = model.nemytsky();
    CHECK(f.lipschitz_L == 2.0);
    CHECK(f.vanishes_at_zero);
    Rng rng(8);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const State x = rng.uniform_vector(12, -2.0, 2.0);
        const State y = rng.uniform_vector(12, -2.0, 2.0);
        const double d = distance(x, y);
        if (d < 1e-9) continue;
        worst = std::max(worst, distance(f(0.0, x), f(0.0, y)) / d);
    }
    CHECK(worst <= f.lipschitz_L + 1e-9);
    CHECK(norm(f(1.0, State(12, 0.0))) <= 1e-14);
}

TEST_CASE("diffusion with no reaction is the bare propagator") {
    MildSolveConfig cfg;
    cfg.dt = 0.01;
    const SpectralHeatModel model(6, reaction_preset("none"));
    const EvolutionFamily F = model.mild_family(cfg);
    State u(6, 0.0);
    u[1] = 1.0;
    const State out = F(1.5, 0.5, u);
    CHECK(out[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("linear reaction shifts every modal rate by one") {
    MildSolveConfig cfg;
    cfg.dt = 0.002;
    const SpectralHeatModel model(6, reaction_preset("decay", 1.0));
    const EvolutionFamily F = model.mild_family(cfg);
    for (const std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{3}}) {
        State u(6, 0.0);
        u[k] = 1.0;
        const double lambda = static_cast<double>(k * k) + 1.0;
        const double gap = 0.5 / lambda;
        const State out = F(gap, 0.0, u);
        CHECK(out[k] == doctest::Approx(std::exp(-lambda * gap)).epsilon(1e-5));
    }
}

TEST_CASE("saturating diffusion passes the family axioms") {
    MildSolveConfig cfg;
    cfg.dt = 0.02;
    const SpectralHeatModel model(8, reaction_preset("saturating"));
    const EvolutionFamily F = model.mild_family(cfg);
    const Grid g = Grid::over(0.0, 1.5, 0.25);
    const auto rep =
        check_axioms(F, g, StateSampler{8, 1.0}, 40, 15, 1e-12, 50.0 * cfg.dt * cfg.dt);
    CHECK(rep.passed);
}

TEST_CASE("shift-and-propagate through a linear family") {
    const Grid g = Grid::over(0.0, 4.0, 0.01);
    const EvolutionFamily U = scalar_exponential_family(1.0);
    const HalfLineState st{Exponent::finite(2.0), indicator_signal(g, 0.0, 1.0, {1.0})};
    SUBCASE("zero shift is the identity") {
        const auto out = shifted_propagation_linear(st, 0.0, U);
        CHECK(max_node_distance(out.f, st.f) == 0.0);
    }
    SUBCASE("unit shift decays and translates the box") {
        const auto out = shifted_propagation_linear(st, 1.0, U);
        for (std::size_t k = 0; k < g.n; ++k) {
            const double t = g.time(k);
            const double want =
                (t >= 1.0 - 1e-9 && t <= 2.0 + 1e-9) ? std::exp(-1.0) : 0.0;
            CHECK(out.f.at(k) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    SUBCASE("shift beyond the horizon clears the signal") {
        const auto out = shifted_propagation_linear(st, 5.0, U);
        CHECK(out.f.max_node_norm() == 0.0);
    }
    SUBCASE("the linear shift is additive") {
        const HalfLineState st2{st.r, band_limited_signal(g, 1, 7)};
        const auto lhs = shifted_propagation_linear(
            {st.r, sum(st.f, st2.f)}, 1.0, U);
        const auto rhs = sum(shifted_propagation_linear(st, 1.0, U).f,
                             shifted_propagation_linear(st2, 1.0, U).f);
        CHECK(max_node_distance(lhs.f, rhs) <= 1e-14);
    }
}

TEST_CASE("nonlinear shift agrees with the linear one on linear families") {
    const Grid g = Grid::over(0.0, 4.0, 0.01);
    const EvolutionFamily U = scalar_exponential_family(0.7);
    const HalfLineState st{Exponent::finite(2.0), band_limited_signal(g, 1, 11)};
    const auto a = shifted_propagation_linear(st, 0.5, U);
    const auto b = shifted_propagation(st, 0.5, U);
    CHECK(max_node_distance(a.f, b.f) == 0.0);
}

TEST_CASE("semigroup law for the shift through the drift flow") {
    const Grid g = Grid::over(0.0, 6.0, 0.05);
    const EvolutionFamily F = scalar_flow_family(scalar_field_preset("constant", 1.0));
    const HalfLineState st{Exponent::finite(2.0), band_limited_signal(g, 1, 13)};
    const auto once = shifted_propagation(shifted_propagation(st, 0.5, F), 1.0, F);
    const auto direct = shifted_propagation(st, 1.5, F);
    // beyond the combined shift the composition law holds node for node...
    for (std::size_t k = g.index_of(1.5); k < g.n; ++k)
        CHECK(once.f.at(k) == doctest::Approx(direct.f.at(k)).epsilon(1e-11));
    // ...but the zero padding breaks it below when the flow moves the origin
    bool padding_differs = false;
    for (std::size_t k = g.index_of(1.0); k < g.index_of(1.5); ++k)
        padding_differs = padding_differs || std::abs(once.f.at(k) - direct.f.at(k)) > 1e-3;
    CHECK(padding_differs);
    // witness that the shift is not additive: it moves the zero signal
    const auto from_zero = shifted_propagation({st.r, SampledSignal(g, 1)}, 1.0, F);
    CHECK(from_zero.f.max_node_norm() > 0.1);
}

TEST_CASE("semigroup law holds everywhere for an origin-preserving family") {
    MildSolveConfig cfg;
    cfg.dt = 0.02;
    const Grid g = Grid::over(0.0, 3.0, 0.1);
    const EvolutionFamily F =
        generate_family(scalar_exponential_family(1.0), linear_reaction(0.5, 1), cfg);
    const HalfLineState st{Exponent::finite(2.0), band_limited_signal(g, 1, 17)};
    const auto once = shifted_propagation(shifted_propagation(st, 0.4, F), 0.6, F);
    const auto direct = shifted_propagation(st, 1.0, F);
    CHECK(max_node_distance(once.f, direct.f) <= 50.0 * cfg.dt * cfg.dt);
}

TEST_CASE("fixed point of the shift semigroup: zero reaction keeps the zero function") {
    const Grid g = Grid::over(0.0, 4.0, 0.01);
    const EvolutionFamily U = scalar_exponential_family(1.0);
    const auto res =
        find_fixed_point(U, linear_reaction(-0.5, 1), 2.0, g, Exponent::finite(1.0), 1e-10, 20);
    CHECK(res.phi.max_node_norm() == 0.0);
    CHECK(res.residual <= 1e-12);
}

TEST_CASE("fixed point of the forced scalar model") {
    const Grid g = Grid::over(0.0, 4.0, 1e-3);
    const EvolutionFamily U = scalar_exponential_family(1.0);
    const Nonlinearity forcing =
        forcing_term([](double t) { return State{std::exp(-t)}; }, 1);
    const auto res = find_fixed_point(U, forcing, 1.0, g, Exponent::finite(2.0), 1e-6, 30);
    double err = 0.0;
    for (std::size_t k = 0; k < g.n; ++k)
        err = std::max(err, std::abs(res.phi.at(k) - oracles::forced_fixed_point(g.time(k))));
    CHECK(err <= 1e-3);
    CHECK(res.residual <= 1e-6);

    SUBCASE("a second start converges to the same fixed point") {
        SampledSignal start = band_limited_signal(g, 1, 23);
        start.at(0) = 0.0; // the half-line boundary trace is pinned at zero
        const auto res2 =
            find_fixed_point(U, forcing, 1.0, g, Exponent::finite(2.0), 1e-6, 30, &start);
        const double d = lp_norm(difference(res2.phi, res.phi), Exponent::finite(2.0));
        CHECK(d <= 10.0 * 1e-6);
    }
}

TEST_CASE("contraction window selection") {
    CHECK(choose_contraction_window(1.0, 1.0) == 1.0);
    CHECK(choose_contraction_window(4.0, 0.5) == 5.0); // ceil(ln 8 / 0.5)
    CHECK_THROWS_AS(choose_contraction_window(1.0, 0.0), std::domain_error);
}

TEST_CASE("expanding propagators make the shift iteration non-contractive") {
    const Grid g = Grid::over(0.0, 8.0, 0.01);
    const EvolutionFamily U = scalar_exponential_family(-0.5); // e^{+0.5 (t-s)}
    const Nonlinearity forcing = forcing_term([](double) { return State{1.0}; }, 1);
    CHECK_THROWS_AS(find_fixed_point(U, forcing, 0.5, g, Exponent::finite(2.0), 1e-8, 6),
                    ConvergenceError);
}

TEST_CASE("boundedness of mild solutions under a uniform seminorm bound") {
    const Grid g = Grid::over(0.0, 10.0, 0.1);
    const StateSampler sampler{1, 1.0};
    SUBCASE("decaying family is bounded by its amplitude") {
        const auto rep = check_mild_solution_boundedness(scalar_exponential_family(1.0), sampler,
                                                         g, 1.0, 1e-9, 100, 3);
        CHECK(rep.hypothesis_ok);
        CHECK(rep.bound_holds);
    }
    SUBCASE("families that move the origin are refused") {
        const EvolutionFamily F = scalar_flow_family(scalar_field_preset("constant", 1.0));
        const auto rep = check_mild_solution_boundedness(F, sampler, g, 1.0, 1e-9, 100, 4);
        CHECK_FALSE(rep.hypothesis_ok);
        CHECK(rep.zero_defect > 0.1);
        CHECK_FALSE(rep.bound_holds);
    }
}

TEST_CASE("asymptotic tails: the drift flow never settles") {
    const Grid g = Grid::over(0.0, 20.0, 0.05);
    const EvolutionFamily F = scalar_flow_family(scalar_field_preset("constant", 1.0));
    CHECK_FALSE(check_asymptotic_stability(F, g, StateSampler{1, 1.0}, 0.25, 1e-3, 8, 6));
}
