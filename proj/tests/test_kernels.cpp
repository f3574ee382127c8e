#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracfp/kernels.hpp"
#include "fracfp/quadrature.hpp"
#include "fracfp/spectral.hpp"
#include "test_helpers.hpp"

using namespace fracfp;
namespace kn = fracfp::kernels;

TEST_CASE("one-sided stable density: s=1/2 closed form to 1e-8 relative") {
    for (double r : {0.05, 0.1, 0.3, 1.0, 2.5, 5.0, 12.0, 20.0}) {
        const double ref =
            std::pow(4.0 * M_PI, -0.5) * std::pow(r, -1.5) * std::exp(-1.0 / (4.0 * r));
        CHECK(stable::eta_density(0.5, r) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("integral and series routes agree in the overlap region") {
    for (double s : {0.6, 0.75, 0.9}) {
        for (double r : {2.0, 3.0, 4.5}) {
            const double a = stable::eta_density(s, r, stable::EtaMethod::integral);
            const double b = stable::eta_density(s, r, stable::EtaMethod::series);
            CHECK(a == doctest::Approx(b).epsilon(1e-9));
        }
    }
}

TEST_CASE("Laplace transform of eta^s_1 is e^{-lambda^s}") {
    for (double s : {0.6, 0.75, 0.9}) {
        stable::StableDensityTable table(s);
        for (double lambda : {0.5, 1.0, 2.0}) {
            quad::Options opt;
            opt.abs_tol = 1e-10;
            auto lt = quad::integrate_log_axis(
                [&](double r) { return std::exp(-lambda * r) * table(r); }, 1e-3, 60.0,
                opt);
            CHECK(lt.value ==
                  doctest::Approx(std::exp(-std::pow(lambda, s))).epsilon(1e-6));
        }
    }
}

TEST_CASE("eta^s_1 is a probability density") {
    for (double s : {0.6, 0.75}) {
        stable::StableDensityTable table(s);
        quad::Options opt;
        opt.abs_tol = 1e-10;
        const double R = 40.0;
        auto body = quad::integrate(
            [&](double v) {
                const double r = std::exp(v);
                return table(r) * r;
            },
            std::log(1e-3), std::log(R), opt);
        const double mass = body.value + stable::eta_tail_mass(s, R);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("density table tracks the direct evaluation") {
    stable::StableDensityTable table(0.7);
    for (double r : {0.2, 0.9, 2.7, 8.0, 60.0})
        CHECK(table(r) == doctest::Approx(stable::eta_density(0.7, r)).epsilon(1e-8));
}

TEST_CASE("sampler throws on bad input") {
    CHECK_THROWS_AS(stable::eta_density(0.75, 0.0), DomainError);
    CHECK_THROWS_AS(stable::eta_density(0.75, -1.0), DomainError);
}

TEST_CASE("heat kernel: peak value, symmetry, Chapman-Kolmogorov") {
    CHECK(kn::heat_kernel(0.7, 0.0, 2) ==
          doctest::Approx(std::pow(4.0 * M_PI * 0.7, -1.0)).epsilon(1e-14));
    CHECK(kn::heat_kernel(0.3, 1.2, 1) == kn::heat_kernel(0.3, -1.2, 1));
    // p_a * p_b (0) = p_{a+b}(0) in 1d by quadrature
    const double a = 0.4, b = 0.9;
    quad::Options opt;
    opt.abs_tol = 1e-12;
    auto conv = quad::integrate(
        [a, b](double y) { return kn::heat_kernel(a, y, 1) * kn::heat_kernel(b, y, 1); },
        -30.0, 30.0, opt);
    CHECK(conv.value == doctest::Approx(kn::heat_kernel(a + b, 0.0, 1)).epsilon(1e-8));
}

TEST_CASE("fractional heat kernel: Cauchy closed form at s=1/2, d=1") {
    for (double t : {0.5, 1.0}) {
        for (double x : {0.0, 0.5, 2.0, 6.0, 10.0}) {
            const double ref = (1.0 / M_PI) * t / (t * t + x * x);
            CHECK(kn::fractional_heat_kernel(0.5, t, x, 1) ==
                  doctest::Approx(ref).epsilon(1e-6));
        }
    }
}

TEST_CASE("fractional heat kernel: Fourier transform and unit mass") {
    const double s = 0.75, t = 0.8;
    stable::StableDensityTable table(s);
    SUBCASE("Fourier check against e^{-t |xi|^{2s}}") {
        for (double xi : {0.5, 2.0}) {
            auto integrand = [&](double x) {
                return std::cos(xi * x) * kn::fractional_heat_kernel(s, t, x, 1, &table);
            };
            quad::Options opt;
            opt.abs_tol = 1e-6;
            // split so the heavy stable tail is integrated far enough out
            const double ft = 2.0 * (quad::integrate(integrand, 0.0, 40.0, opt).value +
                                     quad::integrate(integrand, 40.0, 300.0, opt).value);
            CHECK(ft ==
                  doctest::Approx(std::exp(-t * std::pow(xi, 2.0 * s))).epsilon(1e-5));
        }
    }
    SUBCASE("mass") {
        quad::Options opt;
        opt.abs_tol = 1e-10;
        auto mass = quad::integrate(
            [&](double x) { return kn::fractional_heat_kernel(s, t, x, 1, &table); },
            -60.0, 60.0, opt);
        // |x| <= 60 tail of the 1.5-stable law is below 1e-3; compare loosely
        CHECK(mass.value == doctest::Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("resolvent kernel mass identity (A.4)") {
    kn::KernelTable table(0.75, 1.0, 1);
    CHECK(table.mass() * 1.0 == doctest::Approx(1.0).epsilon(1e-6));
    kn::KernelTable table2(0.6, 0.5, 2);
    CHECK(table2.mass() * 0.5 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("route equivalence (A.3) vs (A.9)") {
    stable::StableDensityTable t06(0.6), t075(0.75);
    for (double s : {0.6, 0.75}) {
        const stable::StableDensityTable& tab = s == 0.6 ? t06 : t075;
        for (double eps : {0.5, 1.0}) {
            for (int d : {1, 2}) {
                for (double r : {0.5, 1.0, 2.0}) {
                    kn::KernelQuery q{s, eps, d, r};
                    const double a = kn::resolvent_kernel_subordination(q, &tab);
                    const double b = kn::resolvent_kernel_fourier(q);
                    CHECK(std::abs(a - b) / b <= 1e-4);
                }
            }
        }
    }
}

TEST_CASE("scaling law (A.10)") {
    stable::StableDensityTable tab(0.7);
    const double s = 0.7;
    for (double eps : {0.5, 2.0}) {
        for (double r : {0.5, 1.0, 2.0}) {
            kn::KernelQuery q_eps{s, eps, 1, r};
            kn::KernelQuery q_one{s, 1.0, 1, std::pow(eps, 1.0 / (2.0 * s)) * r};
            const double lhs = kn::resolvent_kernel_subordination(q_eps, &tab);
            const double rhs = std::pow(eps, (1.0 - 2.0 * s) / (2.0 * s)) *
                               kn::resolvent_kernel_subordination(q_one, &tab);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
        }
    }
}

TEST_CASE("small-r growth: g r^{d-2s} levels off when 2s < d") {
    stable::StableDensityTable tab(0.75);
    const double s = 0.75;
    const int d = 2;
    double prev = 0.0;
    std::vector<double> vals;
    for (double r : {0.1, 0.05, 0.025}) {
        kn::KernelQuery q{s, 1.0, d, r};
        vals.push_back(kn::resolvent_kernel_subordination(q, &tab) *
                       std::pow(r, d - 2.0 * s));
    }
    CHECK(vals[0] > 0.0);
    // the rescaled values approach a positive constant monotonically
    CHECK(std::abs(vals[2] - vals[1]) < std::abs(vals[1] - vals[0]));
    (void)prev;
}

TEST_CASE("boundedness away from the origin") {
    stable::StableDensityTable tab(0.75);
    for (double r : {0.5, 1.0, 4.0, 16.0}) {
        kn::KernelQuery q{0.75, 1.0, 1, r};
        const double v = kn::resolvent_kernel_subordination(q, &tab);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
}

TEST_CASE("s -> 1 limit approaches the Yukawa kernel in d=3") {
    const double eps = 1.0, r = 1.0;
    kn::KernelQuery q{0.95, eps, 3, r};
    const double got = kn::resolvent_kernel_subordination(q);
    const double yukawa = std::exp(-std::sqrt(eps) * r) / (4.0 * M_PI * r);
    CHECK(std::abs(got - yukawa) / yukawa < 0.05);
}

TEST_CASE("kernels are radial, positive and decreasing beyond the origin region") {
    kn::KernelTable table(0.75, 1.0, 1);
    double prev = table(0.01);
    for (double r = 0.02; r < 100.0; r *= 1.6) {
        const double v = table(r);
        CHECK(v > 0.0);
        CHECK(v <= prev * (1.0 + 1e-9));
        prev = v;
    }
}

TEST_CASE("off-grid Phi_eps convolution") {
    Grid g(1, 64, M_PI);
    const double eps = 1.0, s = 0.75;
    SUBCASE("constant field maps to c/eps via (A.4)") {
        Field c(g, 0.8);
        Field out = kernels::phi_epsilon_offgrid(c, eps, s);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(out[i] == doctest::Approx(0.8 / eps).epsilon(1e-5));
    }
    SUBCASE("linearity and spectral cross-check on a smooth bump") {
        Field bump(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.coord(g.unravel(i)[0]);
            bump[i] = std::exp(-2.0 * x * x);
        }
        Field out = kernels::phi_epsilon_offgrid(bump, eps, s);
        Field ref = spectral::bessel_resolvent_phi(bump, eps, s);
        // periodization gap reported, not asserted below 1e-3
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(out[i] - ref[i]));
        MESSAGE("off-grid vs spectral Phi_eps sup gap: ", worst);
        CHECK(worst < 2e-2);

        Field two(g);
        for (std::size_t i = 0; i < g.size(); ++i) two[i] = 2.0 * bump[i];
        Field out2 = kernels::phi_epsilon_offgrid(two, eps, s);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(out2[i] == doctest::Approx(2.0 * out[i]).epsilon(1e-10));
    }
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(kn::validate_query({1.2, 1.0, 1, 1.0}), DomainError);
    CHECK_THROWS_AS(kn::validate_query({0.7, 0.0, 1, 1.0}), DomainError);
    CHECK_THROWS_AS(kn::validate_query({0.7, 1.0, 4, 1.0}), DomainError);
    CHECK_THROWS_AS(kn::validate_query({0.7, 1.0, 1, -0.1}), DomainError);
    CHECK_THROWS_AS(kn::resolvent_kernel_fourier({0.6, 1.0, 2, 0.0}), DomainError);
}
