#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracfp/resolvent.hpp"
#include "fracfp/spectral.hpp"
#include "test_helpers.hpp"

using namespace fracfp;
namespace sp = fracfp::spectral;
using testutil::l1_distance;
using testutil::random_density;
using testutil::random_smooth_field;

namespace {

CoefficientSet linear_cs() {
    CoefficientSet cs;
    cs.beta = make_beta("linear");
    cs.b = make_b("zero");
    cs.D = zero_drift(1);
    cs.s = 0.75;
    return cs;
}

// acceptance-style fixture: truncated porous medium with bounded drift
CoefficientSet drifted_pm_cs() {
    CoefficientSet cs;
    cs.beta = truncate(make_beta("porous_medium", {{2.0}}), 2.0);
    cs.b = make_b("logistic_b");
    cs.D = make_drift("sine_D", 1, {{0.25, 1.0}});
    cs.s = 0.75;
    return cs;
}

}  // namespace

TEST_CASE("constant forcing with the bessel zero mode matches the scalar Newton oracle") {
    Grid g(1, 64, M_PI);
    const double c = 0.8, lambda = 0.3, eps = 1e-2;
    CoefficientSet cs = drifted_pm_cs();
    cs.D = zero_drift(1);  // constant solution requires no drift

    // oracle: y_c + lambda eps^s beta_eps(y_c) = c by scalar Newton
    const double es = std::pow(eps, cs.s);
    auto beta_eps = regularize_beta(cs.beta, eps);
    double yc = c;
    for (int it = 0; it < 100; ++it) {
        const double F = yc + lambda * es * beta_eps.evaluate(yc) - c;
        const double dF = 1.0 + lambda * es * beta_eps.derivative(yc);
        yc -= F / dF;
    }

    ResolventProblem p{Field(g, c), lambda, eps, cs, {}};
    p.controls.mean_mode = MeanMode::bessel;
    ResolventSolution sol = solve_preconditioned(p);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(sol.y[i] == doctest::Approx(yc).epsilon(1e-9));
}

TEST_CASE("linear beta solves by exact spectral division") {
    Grid g(1, 128, M_PI);
    Field f = random_smooth_field(g, 31);
    const double lambda = 0.4, eps = 1e-3;
    CoefficientSet cs = linear_cs();

    ResolventProblem p{f, lambda, eps, cs, {}};
    p.controls.mean_mode = MeanMode::bessel;
    ResolventSolution sol = solve_preconditioned(p);
    CHECK(sol.iterations <= 3);

    Spectrum F = sp::forward_transform(f);
    for (std::size_t i = 0; i < g.size(); ++i)
        F[i] /= 1.0 + lambda * std::pow(eps + g.xi_norm2(i), cs.s) * (1.0 + eps);
    Field exact = sp::inverse_transform(F);
    CHECK(l1_distance(sol.y, exact) < 1e-10);
}

TEST_CASE("nonnegative forcing gives nonnegative resolvent output") {
    Grid g(1, 256, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    Field f = random_density(g, 5);
    ResolventSolution sol = resolvent_J(f, 0.25, cs);
    double mn = 0.0;
    for (double v : sol.y.values()) mn = std::min(mn, v);
    CHECK(mn >= -1e-8);
}

TEST_CASE("resolvent conserves mass and contracts l1 distances") {
    Grid g(1, 256, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    ResolventEngine engine(g, cs);
    const double lambda = 0.3;

    SUBCASE("mass identity") {
        Field f = random_smooth_field(g, 77);
        ResolventSolution sol = engine.apply(f, lambda);
        CHECK(std::abs(sp::integral(sol.y) - sp::integral(f)) <=
              1e-9 * std::max(1.0, sp::norm_l1(f)));
    }
    SUBCASE("l1 contraction over random pairs") {
        for (unsigned seed = 0; seed < 5; ++seed) {
            Field f1 = random_smooth_field(g, 100 + seed);
            Field f2 = random_smooth_field(g, 200 + seed);
            ResolventSolution y1 = engine.apply(f1, lambda);
            ResolventSolution y2 = engine.apply(f2, lambda);
            CHECK(l1_distance(y1.y, y2.y) <= l1_distance(f1, f2) + 1e-9);
        }
    }
    SUBCASE("sup bound with the (2.5a) constant") {
        const double M = 0.25 * std::sqrt(2.0);  // |(div D)^- + |D||_inf for sine_D
        Field f = random_smooth_field(g, 303);
        ResolventSolution sol = engine.apply(f, lambda);
        CHECK(sp::norm_linf(sol.y) <=
              (1.0 + std::sqrt(M)) * sp::norm_linf(f) + 1e-8);
    }
}

TEST_CASE("order preservation under a nonnegative bump") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    ResolventEngine engine(g, cs);
    Field f = random_smooth_field(g, 9);
    Field fb = f;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        const double x = g.coord(idx[0]);
        fb[i] += 0.3 * std::exp(-2.0 * x * x);
    }
    ResolventSolution y1 = engine.apply(f, 0.2);
    ResolventSolution y2 = engine.apply(fb, 0.2);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::min(worst, y2.y[i] - y1.y[i]);
    CHECK(worst >= -1e-8);
}

TEST_CASE("accepted preconditioned residuals decrease monotonically") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    Field f = random_smooth_field(g, 404);
    ResolventSolution sol = solve_chained(f, 0.1, 1e-2, cs);
    REQUIRE(sol.residual_history.size() >= 2);
    for (std::size_t i = 1; i < sol.residual_history.size(); ++i)
        CHECK(sol.residual_history[i] <= sol.residual_history[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("chained solve matches the direct stage below the bound") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    ResolventEngine engine(g, cs, {}, {1e-2});
    const double ls = engine.lambda_stage(1e-2);
    REQUIRE(std::isfinite(ls));
    const double lambda = 0.5 * ls;
    Field f = random_smooth_field(g, 55);
    ResolventSolution direct = engine.solve_stage(f, lambda, 1e-2);
    ResolventSolution chained = solve_chained(f, lambda, 1e-2, cs);
    CHECK(l1_distance(direct.y, chained.y) < 1e-8);
}

TEST_CASE("chaining reaches lambda = 2 lambda_stage with a small residual") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    ResolventEngine engine(g, cs, {}, {1e-2});
    const double ls = engine.lambda_stage(1e-2);
    const double lambda = 2.0 * ls;
    Field f = random_smooth_field(g, 56);
    ResolventSolution sol = engine.solve_stage(f, lambda, 1e-2);
    CHECK(sol.chain.back().outer_iterations > 0);
    CHECK(sol.residual_l1 <= 50.0 * engine.controls().tol_l1 * std::max(1.0, sp::norm_l1(f)));

    SUBCASE("disabled chaining throws StageBoundExceeded") {
        SolverControls ctl;
        ctl.allow_chaining = false;
        ResolventProblem p{f, lambda, 1e-2, cs, ctl};
        CHECK_THROWS_AS(solve_preconditioned(p), StageBoundExceeded);
    }
}

TEST_CASE("the T map contracts with factor (1 - lambda1/lambda)") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    ResolventEngine engine(g, cs, {}, {1e-2});
    const double ls = engine.lambda_stage(1e-2);
    const double lambda = 2.0 * ls, l1 = 0.8 * ls;
    const double theta = l1 / lambda;
    for (unsigned seed = 0; seed < 3; ++seed) {
        Field y = random_smooth_field(g, 600 + seed);
        Field yp = random_smooth_field(g, 700 + seed);
        Field f = random_smooth_field(g, 800 + seed);
        auto T = [&](const Field& v) {
            Field rhs(g);
            for (std::size_t i = 0; i < g.size(); ++i)
                rhs[i] = (1.0 - theta) * v[i] + theta * f[i];
            return engine.solve_stage(rhs, l1, 1e-2).y;
        };
        CHECK(l1_distance(T(y), T(yp)) <=
              (1.0 - theta) * l1_distance(y, yp) + 1e-8);
    }
}

TEST_CASE("resolvent identity (2.3) defects") {
    Grid g(1, 128, M_PI);
    SUBCASE("lambda1 == lambda2 is trivially exact") {
        CoefficientSet cs = drifted_pm_cs();
        Field f = random_smooth_field(g, 21);
        CHECK(check_resolvent_identity(f, 0.2, 0.2, cs) < 1e-7);
    }
    SUBCASE("linear closed form") {
        CoefficientSet cs = linear_cs();
        Field f = random_smooth_field(g, 22);
        CHECK(check_resolvent_identity(f, 0.15, 0.45, cs) < 1e-9);
    }
    SUBCASE("porous medium at lambda2 = 2 lambda1") {
        CoefficientSet cs = drifted_pm_cs();
        cs.D = zero_drift(1);
        Field f = random_density(g, 23);
        SolverControls ctl;
        CHECK(check_resolvent_identity(f, 0.15, 0.3, cs, ctl) <= 10.0 * ctl.tol_l1);
    }
}

TEST_CASE("eps-stage increments decrease along the schedule") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    Field f = random_density(g, 31);
    ResolventSolution sol = resolvent_J(f, 0.2, cs, {3e-2, 3e-3});
    REQUIRE(sol.chain.size() == 2);
    CHECK(sol.chain[1].increment_l1 > 0.0);
    CHECK(sol.chain[1].increment_l1 < 1.0);
}

TEST_CASE("hs regularity proxy stays under the (2.27'') constant") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    Field f = random_density(g, 61);
    const double lambda = 0.2;
    ResolventSolution sol = resolvent_J(f, lambda, cs);
    Field beta_y(g);
    for (std::size_t i = 0; i < g.size(); ++i) beta_y[i] = cs.beta.evaluate(sol.y[i]);
    const double hs = sp::hs_seminorm(beta_y, cs.s);
    const double M = 0.25 * std::sqrt(2.0);
    const double lip = cs.beta.lipschitz_bound.value_or(4.0);
    const double b_sup = 1.0;
    const double C = lambda * (b_sup + 1.0) * std::pow(M + 2.0, 2.0) *
                     std::pow(lip + 1.0, 2.0) * sp::norm_linf(f) * sp::norm_l1(f);
    CHECK(hs * hs <= C);
}

TEST_CASE("lambda above lambda0 only warns") {
    Grid g(1, 64, M_PI);
    CoefficientSet cs = drifted_pm_cs();
    ResolventEngine engine(g, cs);
    Field f = random_density(g, 71);
    const double above = engine.lambda0_bound() * 1.5;
    ResolventSolution sol = engine.apply(f, above);
    CHECK(!sol.warnings.empty());
}
