#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>

#include "fracfp/sde.hpp"
#include "fracfp/spectral.hpp"
#include "fracfp/stable.hpp"
#include "test_helpers.hpp"

using namespace fracfp;
namespace sp = fracfp::spectral;
using testutil::random_density;

TEST_CASE("philox streams are deterministic and decorrelated") {
    const auto a = philox4x32({1, 2, 3, 4}, {5, 6});
    const auto b = philox4x32({1, 2, 3, 4}, {5, 6});
    CHECK(a == b);
    const auto c = philox4x32({1, 2, 3, 5}, {5, 6});
    CHECK(a != c);

    CounterRng r1(42, 7, 3), r2(42, 7, 3), r3(42, 8, 3);
    CHECK(r1.uniform() == r2.uniform());
    CHECK(r1.normal() == r2.normal());
    CHECK(r1.uniform() != r3.uniform());
}

TEST_CASE("uniforms live in (0,1) and normals have the right moments") {
    CounterRng rng(123, 0, 0);
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        const double z = rng.normal();
        mean += z;
        var += z * z;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("subordinator increments have the Laplace transform e^{-dt lambda^s}") {
    const double s = 0.75, dt = 0.4;
    const int n = 200000;
    for (double lambda : {0.5, 1.0, 2.0}) {
        double mean = 0.0, m2 = 0.0;
        CounterRng rng(7, 0, 0);
        for (int i = 0; i < n; ++i) {
            const double v = std::exp(-lambda * sde::sample_subordinator(s, dt, rng));
            mean += v;
            m2 += v * v;
        }
        mean /= n;
        m2 /= n;
        const double se = std::sqrt((m2 - mean * mean) / n);
        const double target = std::exp(-dt * std::pow(lambda, s));
        CHECK(std::abs(mean - target) <= 3.0 * se);
    }
}

TEST_CASE("s=1/2 subordinator matches the closed-form density (chi-square)") {
    const double s = 0.5;
    const int n = 100000;
    const int bins = 16;
    // bin edges on [0.1, 8] plus the two tails
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i)
        edges[i] = 0.1 * std::pow(8.0 / 0.1, static_cast<double>(i) / bins);
    std::vector<double> count(bins + 2, 0.0);
    CounterRng rng(11, 0, 0);
    for (int i = 0; i < n; ++i) {
        const double v = sde::sample_subordinator(s, 1.0, rng);
        int b = 0;
        if (v < edges.front()) {
            b = 0;
        } else if (v >= edges.back()) {
            b = bins + 1;
        } else {
            b = 1 + static_cast<int>(std::log(v / edges.front()) /
                                     std::log(edges.back() / edges.front()) * bins);
            b = std::min(b, bins);
        }
        count[b] += 1.0;
    }
    auto cdf_closed = [](double x) {  // P(eta_{1/2} <= x) = erfc(1/(2 sqrt x))
        return std::erfc(0.5 / std::sqrt(x));
    };
    double chi2 = 0.0;
    double prev_cdf = 0.0;
    for (int b = 0; b <= bins + 1; ++b) {
        const double hi_cdf = b <= bins ? cdf_closed(edges[std::min(b, bins)]) : 1.0;
        const double p = hi_cdf - prev_cdf;
        prev_cdf = hi_cdf;
        if (p * n < 5.0) continue;
        const double expected = p * n;
        chi2 += (count[b] - expected) * (count[b] - expected) / expected;
    }
    // 17 effective cells -> chi2_{0.95,16} ~ 26.3
    CHECK(chi2 < 26.3);
}

TEST_CASE("dt scaling: samples at dt equal dt^{1/s}-scaled unit samples (KS)") {
    const double s = 0.7, dt = 0.2;
    const int n = 20000;
    std::vector<double> a(n), b(n);
    CounterRng r1(300, 0, 0), r2(400, 0, 0);
    for (int i = 0; i < n; ++i) {
        a[i] = sde::sample_subordinator(s, dt, r1);
        b[i] = std::pow(dt, 1.0 / s) * sde::sample_subordinator(s, 1.0, r2);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (j < b.size() && b[j] <= a[i]) ++j;
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n -
                                   static_cast<double>(j) / n));
    }
    CHECK(ks < 1.36 * std::sqrt(2.0 / n));  // 5% two-sample level
}

TEST_CASE("isotropic stable increments: characteristic function and isotropy") {
    const double s = 0.75, dt = 0.3;
    const int d = 2, n = 200000;
    CounterRng rng(5, 0, 0);
    std::vector<Vec3> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sde::sample_isotropic_stable(s, dt, d, rng);
    SUBCASE("empirical characteristic function") {
        for (double xi : {0.5, 1.0, 2.0, 3.0}) {
            double re = 0.0, m2 = 0.0;
            for (const auto& z : draws) {
                const double c = std::cos(xi * z[0]);
                re += c;
                m2 += c * c;
            }
            re /= n;
            m2 /= n;
            const double se = std::sqrt(std::max(m2 - re * re, 0.0) / n);
            const double target = std::exp(-dt * std::pow(xi, 2.0 * s));
            CHECK(std::abs(re - target) <= 3.5 * se);
        }
    }
    SUBCASE("components are exchangeable (two-sample KS)") {
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = draws[i][0];
            y[i] = draws[i][1];
        }
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        double ks = 0.0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            while (j < y.size() && y[j] <= x[i]) ++j;
            ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n -
                                       static_cast<double>(j) / n));
        }
        CHECK(ks < 1.36 * std::sqrt(2.0 / n));
    }
}

TEST_CASE("periodic multilinear interpolation") {
    Grid g(2, 32, M_PI);
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        f[i] = 2.0 + std::sin(g.coord(idx[0])) * 0.5;
    }
    // interior point: compare against the smooth function loosely
    CHECK(sde::interpolate(f, {0.37, -1.2, 0.0}) ==
          doctest::Approx(2.0 + 0.5 * std::sin(0.37)).epsilon(1e-3));
    // grid point: exact
    CHECK(sde::interpolate(f, {g.coord(5), g.coord(9), 0.0}) ==
          doctest::Approx(f[g.ravel({5, 9, 0})]).epsilon(1e-13));
    // periodic wrap
    CHECK(sde::interpolate(f, {g.coord(5) + 2.0 * M_PI, g.coord(9), 0.0}) ==
          doctest::Approx(f[g.ravel({5, 9, 0})]).epsilon(1e-12));
}

TEST_CASE("initial sampling matches the target CDF (KS bound)") {
    Grid g(1, 128, M_PI);
    Field u0 = random_density(g, 9);
    sde::LevyConfig cfg;
    cfg.N = 40000;
    cfg.seed = 17;
    sde::ParticleEnsemble ens = sde::sample_initial(u0, cfg);
    // empirical CDF against the cell-wise target CDF
    std::vector<double> xs(ens.positions.begin(), ens.positions.end());
    std::sort(xs.begin(), xs.end());
    std::vector<double> cum(g.size() + 1, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        cum[i + 1] = cum[i] + std::max(u0[i], 0.0) * g.dx();
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double rel = (xs[i] + g.half_width()) / g.dx();
        const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(rel),
                                                       g.size() - 1);
        const double target =
            cum[cell] + (rel - cell) * (cum[cell + 1] - cum[cell]);
        ks = std::max(ks, std::abs((i + 1.0) / xs.size() - target / cum.back()));
    }
    CHECK(ks <= 2.0 / std::sqrt(static_cast<double>(cfg.N)) + g.dx());
}

TEST_CASE("euler step: drift-only and zero-density conventions") {
    Grid g(1, 64, M_PI);
    CoefficientSet cs;
    cs.beta = make_beta("porous_medium", {{2.0}});
    cs.b = make_b("constant", {{1.0}});
    cs.D = make_drift("constant_D", 1, {{1.0}});
    cs.s = 0.75;
    sde::LevyConfig cfg;
    cfg.N = 64;
    cfg.dt = 0.01;
    cfg.seed = 3;

    // u == 0 everywhere: jump coefficient beta(0)/0 := 0, pure drift motion
    Field zero(g, 0.0);
    sde::ParticleEnsemble ens{g, std::vector<double>(cfg.N, 0.0), 0.0, cfg.seed, 0};
    for (std::size_t p = 0; p < cfg.N; ++p) ens.positions[p] = g.coord(p % 64);
    std::vector<double> before = ens.positions;
    sde::euler_step(ens, zero, cfg.dt, cs, cfg);
    for (std::size_t p = 0; p < cfg.N; ++p) {
        double expect = before[p] + 1.0 * cfg.dt;  // D b(0) dt with b constant 1
        if (expect >= M_PI) expect -= 2.0 * M_PI;
        CHECK(ens.positions[p] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("drift-dominated mean displacement") {
    Grid g(1, 64, M_PI);
    CoefficientSet cs;
    cs.beta = make_beta("linear", {{1e-4}});  // tiny jump coefficient
    cs.b = make_b("constant", {{1.0}});
    cs.D = make_drift("constant_D", 1, {{1.0}});
    cs.s = 0.75;
    sde::LevyConfig cfg;
    cfg.N = 50000;
    cfg.dt = 0.05;
    cfg.seed = 21;
    Field u(g, 0.3);  // constant density
    sde::ParticleEnsemble ens{g, std::vector<double>(cfg.N, 0.0), 0.0, cfg.seed, 0};
    sde::euler_step(ens, u, cfg.dt, cs, cfg);
    double mean = 0.0;
    for (double x : ens.positions) mean += x;
    mean /= cfg.N;
    CHECK(mean == doctest::Approx(cfg.dt).epsilon(0.05));
}

TEST_CASE("pure stable motion reproduces the fractional heat flow on box modes") {
    Grid g(1, 128, M_PI);
    CoefficientSet cs;
    cs.beta = make_beta("linear");
    cs.b = make_b("zero");
    cs.D = zero_drift(1);
    cs.s = 0.75;
    sde::LevyConfig cfg;
    cfg.s = 0.75;
    cfg.N = 100000;
    cfg.dt = 0.02;
    cfg.seed = 31;
    const double T = 0.2;
    Field u0 = random_density(g, 41);
    EvolutionConfig ecfg;
    ecfg.T = T;
    ecfg.h = cfg.dt;
    ecfg.cs = cs;
    ecfg.eps_schedule = {1e-6};
    SolutionPath pde = evolve(u0, ecfg);
    sde::SimResult sim =
        sde::simulate(u0, cfg, cs, sde::SimMode::decoupled, &pde, T, {T});
    // wrapped empirical characteristic function at the lowest modes
    Spectrum S0 = sp::forward_transform(u0);
    for (int m = 1; m <= 3; ++m) {
        const std::complex<double> phi0 = S0[m] / S0[0];
        const std::complex<double> target =
            phi0 * std::exp(-T * std::pow(m * g.dxi(), 2.0 * cs.s));
        const double err = std::abs(sim.charfn.back()[m - 1] - target);
        CHECK(err <= 3.5 / std::sqrt(static_cast<double>(cfg.N)) + 0.003);
    }
}

TEST_CASE("KDE: single particle, unit mass, uniform limit") {
    Grid g(1, 64, M_PI);
    SUBCASE("single particle at a grid point is a periodized gaussian") {
        sde::ParticleEnsemble ens{g, {g.coord(10)}, 0.0, 0, 0};
        sde::DensityEstimate est = sde::estimate_density(ens, g, 0.4);
        CHECK(std::abs(sp::integral(est.values) - 1.0) < 1e-10);
        // peak at the particle, symmetric decay
        std::size_t argmax = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (est.values[i] > est.values[argmax]) argmax = i;
        CHECK(argmax == 10);
    }
    SUBCASE("many uniform particles flatten out") {
        const std::size_t N = 20000;
        sde::ParticleEnsemble ens{g, std::vector<double>(N), 0.0, 0, 0};
        CounterRng rng(9, 0, 0);
        for (std::size_t p = 0; p < N; ++p)
            ens.positions[p] = (2.0 * rng.uniform() - 1.0) * M_PI;
        sde::DensityEstimate est = sde::estimate_density(ens, g);
        const double target = 1.0 / (2.0 * M_PI);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(est.values[i] - target) < 0.2 * target);
        CHECK(std::abs(sp::integral(est.values) - 1.0) < 1e-10);
    }
}

TEST_CASE("simulation is reproducible bitwise across worker counts") {
    Grid g(1, 64, M_PI);
    CoefficientSet cs;
    cs.beta = make_beta("linear");
    cs.b = make_b("zero");
    cs.D = zero_drift(1);
    cs.s = 0.75;
    Field u0 = random_density(g, 51);
    sde::LevyConfig cfg;
    cfg.N = 5000;
    cfg.dt = 0.05;
    cfg.seed = 99;
    EvolutionConfig ecfg;
    ecfg.T = 0.1;
    ecfg.h = 0.05;
    ecfg.cs = cs;
    ecfg.eps_schedule = {1e-6};
    SolutionPath pde = evolve(u0, ecfg);

    setenv("FRACFP_THREADS", "1", 1);
    sde::SimResult one =
        sde::simulate(u0, cfg, cs, sde::SimMode::decoupled, &pde, 0.1, {0.1});
    setenv("FRACFP_THREADS", "7", 1);
    sde::SimResult many =
        sde::simulate(u0, cfg, cs, sde::SimMode::decoupled, &pde, 0.1, {0.1});
    unsetenv("FRACFP_THREADS");
    REQUIRE(one.final_ensemble.positions.size() ==
            many.final_ensemble.positions.size());
    for (std::size_t i = 0; i < one.final_ensemble.positions.size(); ++i)
        CHECK(one.final_ensemble.positions[i] == many.final_ensemble.positions[i]);
}

TEST_CASE("decoupled superposition at unit-test scale") {
    Grid g(1, 64, M_PI);
    CoefficientSet cs;
    cs.beta = make_beta("linear");
    cs.b = make_b("zero");
    cs.D = zero_drift(1);
    cs.s = 0.75;
    Field u0 = random_density(g, 61);
    const double T = 0.2;
    sde::LevyConfig cfg;
    cfg.N = 30000;
    cfg.dt = 0.02;
    cfg.seed = 7;
    EvolutionConfig ecfg;
    ecfg.T = T;
    ecfg.h = cfg.dt;
    ecfg.cs = cs;
    ecfg.eps_schedule = {1e-6};
    SolutionPath pde = evolve(u0, ecfg);
    sde::SimResult sim =
        sde::simulate(u0, cfg, cs, sde::SimMode::decoupled, &pde, T, {0.0, T});
    sde::SuperpositionReport rep = sde::superposition_check(sim, pde, 0.0, ecfg.h);
    CHECK(rep.l1_distance.back() < 0.1);
    CHECK(rep.mc_error.back() > 0.0);
    CHECK(rep.pass);
}
