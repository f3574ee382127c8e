#include "fracfp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <ostream>
#include <random>
#include <sstream>

#include "fracfp/gauge.hpp"
#include "fracfp/kernels.hpp"
#include "fracfp/resolvent.hpp"
#include "fracfp/sde.hpp"
#include "fracfp/spectral.hpp"

namespace fracfp::acceptance {

namespace sp = fracfp::spectral;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Field random_smooth(const Grid& g, unsigned seed, int kmax = 6, double amp = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field f(g);
    for (int k = 1; k <= kmax; ++k) {
        const double a = amp * dist(rng) / (1.0 + k * k);
        const double b = amp * dist(rng) / (1.0 + k * k);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.coord(g.unravel(i)[0]);
            f[i] += a * std::cos(k * g.dxi() * x) + b * std::sin(k * g.dxi() * x);
        }
    }
    return f;
}

Field random_density(const Grid& g, unsigned seed) {
    Field f = random_smooth(g, seed, 4, 0.4);
    double mn = f[0];
    for (double v : f.values()) mn = std::min(mn, v);
    for (auto& v : f.values()) v += 0.05 - mn;
    const double mass = sp::integral(f);
    for (auto& v : f.values()) v /= mass;
    return f;
}

double l1_dist(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * a.grid().cell_volume();
}

CoefficientSet drifted_fixture() {
    CoefficientSet cs;
    cs.beta = truncate(make_beta("porous_medium", {{2.0}}), 2.0);
    cs.b = make_b("logistic_b");
    cs.D = make_drift("sine_D", 1, {{0.25, 1.0}});
    cs.s = 0.75;
    return cs;
}

CoefficientSet linear_fixture() {
    CoefficientSet cs;
    cs.beta = make_beta("linear");
    cs.b = make_b("zero");
    cs.D = zero_drift(1);
    cs.s = 0.75;
    return cs;
}

// |(div D)^- + |D||_inf for the sine drift by dense probing
double drift_M(const CoefficientSet& cs) {
    double M = 0.0;
    for (int i = 0; i < 4096; ++i) {
        const double x = -8.0 + 16.0 * (i + 0.5) / 4096;
        const Vec3 xx{x, 0.0, 0.0};
        const double neg = std::max(0.0, -cs.D.divergence(xx));
        M = std::max(M, neg + std::abs(cs.D.evaluate(xx)[0]));
    }
    return M;
}

Field exact_linear_flow(const Field& u0, double t, double s) {
    Spectrum S = sp::forward_transform(u0);
    const Grid& g = u0.grid();
    for (std::size_t i = 0; i < g.size(); ++i)
        S[i] *= std::exp(-t * std::pow(g.xi_norm2(i), s));
    return sp::inverse_transform_unchecked(S);
}

struct Context {
    std::vector<const SolutionPath*> nonneg_paths;  // for criterion 4
    std::vector<SolutionPath> owned;
    void keep(SolutionPath&& p) {
        owned.push_back(std::move(p));
        nonneg_paths.push_back(&owned.back());
    }
};

using CriterionFn = void (*)(Context&, CriterionResult&);

void criterion1(Context& ctx, CriterionResult& out) {
    out.name = "resolvent contract (Lemma 2.1)";
    Grid g(1, 256, M_PI);
    CoefficientSet cs = drifted_fixture();
    ResolventEngine engine(g, cs);
    const double lambda = engine.lambda0_bound() / 2.0;
    const double M = drift_M(cs);

    double worst_mass = 0.0, worst_contract = 0.0, worst_min = 0.0, worst_sup = 0.0;
    bool pass = true;
    for (unsigned k = 0; k < 20; ++k) {
        Field f1 = random_smooth(g, 1000 + k);
        Field f2 = random_smooth(g, 2000 + k);
        ResolventSolution y1 = engine.apply(f1, lambda);
        ResolventSolution y2 = engine.apply(f2, lambda);
        // (a) mass identity (2.4)
        const double mass_defect = std::abs(sp::integral(y1.y) - sp::integral(f1));
        worst_mass = std::max(worst_mass, mass_defect / sp::norm_l1(f1));
        pass = pass && mass_defect <= 1e-9 * sp::norm_l1(f1);
        // (b) l1 contraction (2.2)
        const double excess = l1_dist(y1.y, y2.y) - l1_dist(f1, f2);
        worst_contract = std::max(worst_contract, excess);
        pass = pass && excess <= 1e-9;
        // (d) sup bound (2.5a)
        const double bound = (1.0 + std::sqrt(M)) * sp::norm_linf(f1);
        worst_sup = std::max(worst_sup, sp::norm_linf(y1.y) - bound);
        pass = pass && sp::norm_linf(y1.y) <= bound + 1e-9;
        // (c) positivity (2.5)
        Field d = random_density(g, 3000 + k);
        ResolventSolution yd = engine.apply(d, lambda);
        double mn = 0.0;
        for (double v : yd.y.values()) mn = std::min(mn, v);
        worst_min = std::min(worst_min, mn);
        pass = pass && mn >= -1e-8;
    }
    std::ostringstream ss;
    ss << "mass<=" << worst_mass << " contraction_excess<=" << worst_contract
       << " min>=" << worst_min << " sup_excess<=" << worst_sup;
    out.detail = ss.str();
    out.pass = pass;
}

void criterion2(Context&, CriterionResult& out) {
    out.name = "resolvent identity (2.3)";
    Grid g(1, 256, M_PI);
    CoefficientSet cs = drifted_fixture();
    SolverControls ctl;
    const double l0 = lambda0(cs);
    double worst = 0.0;
    for (unsigned k = 0; k < 3; ++k) {
        Field f = random_density(g, 40 + k);
        worst = std::max(worst,
                         check_resolvent_identity(f, l0 / 4.0, l0 / 2.0, cs, ctl));
    }
    out.pass = worst <= 10.0 * ctl.tol_l1;
    std::ostringstream ss;
    ss << "defect<=" << worst << " threshold=" << 10.0 * ctl.tol_l1;
    out.detail = ss.str();
}

SolutionPath run_linear(const Grid& g, const Field& u0, double T, double h) {
    EvolutionConfig cfg;
    cfg.T = T;
    cfg.h = h;
    cfg.cs = linear_fixture();
    cfg.eps_schedule = {1e-6};
    return evolve(u0, cfg);
}

void criterion3(Context& ctx, CriterionResult& out) {
    out.name = "linear benchmark vs exact flow";
    Grid g(1, 256, M_PI);
    Field u0 = random_density(g, 7);
    const double T = 0.5;
    SolutionPath ph = run_linear(g, u0, T, 1e-3);
    SolutionPath ph2 = run_linear(g, u0, T, 5e-4);
    Field exact = exact_linear_flow(u0, T, 0.75);
    const double e1 = l1_dist(ph.final_field(), exact);
    const double e2 = l1_dist(ph2.final_field(), exact);
    const double ratio = e1 / e2;
    out.pass = e1 <= 0.01 && ratio >= 1.0 / 0.6 && ratio <= 1.0 / 0.4;
    std::ostringstream ss;
    ss << "l1(h=1e-3)=" << e1 << " ratio=" << ratio;
    out.detail = ss.str();
    ctx.keep(std::move(ph));
    ctx.keep(std::move(ph2));
}

void criterion5(Context& ctx, CriterionResult& out) {
    out.name = "distributional residual (1.10)";
    // reuse the linear-benchmark paths stored by criterion 3
    const SolutionPath& ph = *ctx.nonneg_paths[0];
    const SolutionPath& ph2 = *ctx.nonneg_paths[1];
    const CoefficientSet cs = linear_fixture();
    auto catalog = test_function_catalog(ph.grid(), 0.5);
    bool pass = true;
    std::ostringstream ss;
    for (const auto& phi : catalog) {
        const double r1 = distributional_residual(ph, phi, cs);
        const double r2 = distributional_residual(ph2, phi, cs);
        pass = pass && r1 <= 1e-3;
        if (r1 > 1e-12) pass = pass && r1 / r2 >= 1.8;
        ss << phi.name << ":" << r1 << " ";
    }
    out.pass = pass;
    out.detail = ss.str();
}

void criterion6(Context&, CriterionResult& out) {
    out.name = "kernel identities (Appendix)";
    bool pass = true;
    std::ostringstream ss;
    // (A.4) mass identity on representative (s, eps, d) combinations
    struct MassCase {
        double s, eps;
        int d;
    };
    for (const MassCase& mc : {MassCase{0.75, 1.0, 1}, MassCase{0.6, 0.5, 1},
                               MassCase{0.75, 0.5, 2}, MassCase{0.6, 1.0, 2}}) {
        kernels::KernelTable table(mc.s, mc.eps, mc.d);
        const double m = table.mass() * mc.eps;
        pass = pass && std::abs(m - 1.0) <= 1e-6;
        ss << "mass(s=" << mc.s << ",eps=" << mc.eps << ",d=" << mc.d
           << ")err=" << std::abs(m - 1.0) << " ";
    }
    // (A.3) vs (A.9) route agreement
    stable::StableDensityTable t06(0.6), t075(0.75);
    double worst_route = 0.0;
    for (double s : {0.6, 0.75}) {
        const auto& tab = s == 0.6 ? t06 : t075;
        for (double eps : {0.5, 1.0})
            for (int d : {1, 2})
                for (double r : {0.5, 1.0, 2.0}) {
                    kernels::KernelQuery q{s, eps, d, r};
                    const double a = kernels::resolvent_kernel_subordination(q, &tab);
                    const double b = kernels::resolvent_kernel_fourier(q);
                    worst_route = std::max(worst_route, std::abs(a - b) / b);
                }
    }
    pass = pass && worst_route <= 1e-4;
    ss << "route<=" << worst_route << " ";
    // (A.10) scaling
    double worst_scaling = 0.0;
    for (double s : {0.6, 0.75}) {
        const auto& tab = s == 0.6 ? t06 : t075;
        for (double eps : {0.5, 2.0})
            for (int d : {1, 2})
                for (double r : {0.5, 1.0, 2.0}) {
                    kernels::KernelQuery q{s, eps, d, r};
                    kernels::KernelQuery q1{s, 1.0, d,
                                            std::pow(eps, 1.0 / (2.0 * s)) * r};
                    const double lhs = kernels::resolvent_kernel_subordination(q, &tab);
                    const double rhs =
                        std::pow(eps, (d - 2.0 * s) / (2.0 * s)) *
                        kernels::resolvent_kernel_subordination(q1, &tab);
                    worst_scaling = std::max(worst_scaling, std::abs(lhs - rhs) / rhs);
                }
    }
    pass = pass && worst_scaling <= 1e-6;
    ss << "scaling<=" << worst_scaling << " ";
    // s = 1/2 Cauchy closed form
    double worst_cauchy = 0.0;
    for (double x = 0.0; x <= 10.0; x += 1.25) {
        const double ref = (1.0 / M_PI) * 1.0 / (1.0 + x * x);
        const double got = kernels::fractional_heat_kernel(0.5, 1.0, x, 1);
        worst_cauchy = std::max(worst_cauchy, std::abs(got - ref) / ref);
    }
    pass = pass && worst_cauchy <= 1e-6;
    ss << "cauchy<=" << worst_cauchy;
    out.pass = pass;
    out.detail = ss.str();
}

void criterion7(Context& ctx, CriterionResult& out) {
    out.name = "gauge diagnostics (Section 3)";
    Grid g(1, 256, M_PI);
    CoefficientSet cs = drifted_fixture();
    bool pass = true;
    std::ostringstream ss;

    // two-route agreement and nonnegativity on random fields
    for (unsigned k = 0; k < 3; ++k) {
        std::mt19937 rng(500 + k);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Field z(g);
        for (auto& v : z.values()) v = dist(rng);
        auto [inner, spectral] = gauge::gauge_h_routes(z, 1e-2, cs.s);
        pass = pass && spectral >= -1e-12;
        pass = pass && std::abs(inner - spectral) <= 1e-10 * spectral;
    }

    EvolutionConfig cfg;
    cfg.T = 0.1;
    cfg.h = 4e-3;
    cfg.cs = cs;
    Field u0 = random_density(g, 77);
    SolutionPath run_a = evolve(u0, cfg);
    EvolutionConfig cfg2 = cfg;
    cfg2.h = 2e-3;
    cfg2.snapshot_stride = 2;
    SolutionPath run_b = evolve(u0, cfg2);

    // same-run pair: h identically zero
    gauge::GaugePair same{&run_a, &run_a, 2.0 * g.dx(), 1e-2, cs, 1e-10};
    gauge::GaugeReport same_rep = gauge::gronwall_audit(same);
    double same_max = 0.0;
    for (double h : same_rep.h_trace) {
        pass = pass && h >= -1e-12;
        same_max = std::max(same_max, h);
    }
    pass = pass && same_rep.same && same_max <= 1e-18;

    // refinement level
    gauge::GaugePair refine{&run_a, &run_b, 2.0 * g.dx(), 1e-2, cs, 1e-4};
    gauge::GaugeReport refine_rep = gauge::gronwall_audit(refine);
    double level = 0.0;
    for (double h : refine_rep.h_trace) {
        pass = pass && h >= -1e-12;
        level = std::max(level, h);
    }

    // distinct initial data at l1 separation 0.5
    Field shifted = random_density(g, 78);
    const double w = std::min(0.95, 0.5 / l1_dist(u0, shifted));
    Field u0b(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        u0b[i] = (1.0 - w) * u0[i] + w * shifted[i];
    const double sep = l1_dist(u0, u0b);
    SolutionPath run_c = evolve(u0b, cfg);
    gauge::GaugePair diff{&run_a, &run_c, 2.0 * g.dx(), 1e-2, cs,
                          std::max(10.0 * level, 1e-12)};
    gauge::GaugeReport diff_rep = gauge::gronwall_audit(diff);
    pass = pass && !diff_rep.same;
    pass = pass && diff_rep.h_trace.back() >= 10.0 * level;

    ss << "same_max=" << same_max << " refine_level=" << level
       << " distinct_hT=" << diff_rep.h_trace.back() << " u0_sep=" << sep;
    out.pass = pass;
    out.detail = ss.str();
    ctx.keep(std::move(run_a));
    ctx.keep(std::move(run_b));
    ctx.keep(std::move(run_c));
}

void criterion8(Context&, CriterionResult& out) {
    out.name = "stable sampling (A.2)";
    bool pass = true;
    std::ostringstream ss;
    const double s = 0.75, dt = 0.1;
    const int n = 1000000;
    // subordinator Laplace transform within 3 standard errors
    for (double lambda : {0.5, 1.0, 2.0}) {
        CounterRng rng(811, 0, 0);
        double mean = 0.0, m2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = std::exp(-lambda * sde::sample_subordinator(s, dt, rng));
            mean += v;
            m2 += v * v;
        }
        mean /= n;
        m2 /= n;
        const double se = std::sqrt((m2 - mean * mean) / n);
        const double target = std::exp(-dt * std::pow(lambda, s));
        pass = pass && std::abs(mean - target) <= 3.0 * se;
        ss << "lt(" << lambda << ")=" << std::abs(mean - target) / se << "se ";
    }
    // empirical characteristic function at 8 frequencies
    CounterRng rng(812, 0, 0);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = sde::sample_isotropic_stable(s, dt, 1, rng)[0];
    for (int k = 1; k <= 8; ++k) {
        const double xi = 0.5 * k;
        double re = 0.0, m2 = 0.0;
        for (double x : xs) {
            const double c = std::cos(xi * x);
            re += c;
            m2 += c * c;
        }
        re /= n;
        m2 /= n;
        const double sigma = std::sqrt(std::max(m2 - re * re, 0.0) / n);
        const double target = std::exp(-dt * std::pow(xi, 2.0 * s));
        pass = pass && std::abs(re - target) <= 3.0 * sigma;
        ss << "cf(" << xi << ")=" << std::abs(re - target) / sigma << "s ";
    }
    out.pass = pass;
    out.detail = ss.str();
}

struct SimOutcome {
    sde::SuperpositionReport report;
    SolutionPath pde;
};

SimOutcome superposition_run(const CoefficientSet& cs, const Field& u0,
                             std::uint64_t seed, const std::vector<double>& schedule,
                             const SolutionPath* external_pde = nullptr) {
    const Grid& g = u0.grid();
    const double T = 0.5;
    sde::LevyConfig lc;
    lc.s = cs.s;
    lc.dt = 2e-3;
    lc.seed = seed;
    lc.N = 100000;
    SimOutcome outcome;
    if (!external_pde) {
        EvolutionConfig cfg;
        cfg.T = T;
        cfg.h = 2e-3;
        cfg.cs = cs;
        cfg.eps_schedule = schedule;
        outcome.pde = evolve(u0, cfg);
    } else {
        outcome.pde = *external_pde;
    }
    sde::SimResult sim = sde::simulate(u0, lc, cs, sde::SimMode::decoupled,
                                       &outcome.pde, T, {0.0, 0.25, 0.5});
    outcome.report = sde::superposition_check(sim, outcome.pde, 0.0, 2e-3);
    return outcome;
}

void criterion9(Context& ctx, CriterionResult& out, SimOutcome& linear_keep) {
    out.name = "superposition (Thm 4.1) at desk scale";
    Grid g(1, 128, M_PI);
    Field u0 = random_density(g, 90);
    bool pass = true;
    std::ostringstream ss;

    CoefficientSet lin = linear_fixture();
    linear_keep = superposition_run(lin, u0, 1, {1e-6});
    const double l1_lin = linear_keep.report.l1_distance.back();
    pass = pass && l1_lin <= 0.05;
    ss << "linear_l1=" << l1_lin << " ";

    CoefficientSet pm;
    pm.beta = truncate(make_beta("porous_medium", {{2.0}}), 2.0);
    pm.b = make_b("zero");
    pm.D = zero_drift(1);
    pm.s = 0.75;
    SimOutcome nl = superposition_run(pm, u0, 1, {1e-2, 1e-3});
    const double l1_nl = nl.report.l1_distance.back();
    pass = pass && l1_nl <= 0.08;
    ss << "nonlinear_l1=" << l1_nl << " ";

    // negative control: mismatched PDE initial data at l1 separation 0.5
    Field shifted = random_density(g, 91);
    const double w = std::min(0.95, 0.5 / l1_dist(u0, shifted));
    Field u0b(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        u0b[i] = (1.0 - w) * u0[i] + w * shifted[i];
    const double sep = l1_dist(u0, u0b);
    EvolutionConfig cfg;
    cfg.T = 0.5;
    cfg.h = 2e-3;
    cfg.cs = lin;
    cfg.eps_schedule = {1e-6};
    SolutionPath pde_b = evolve(u0b, cfg);
    sde::LevyConfig lc;
    lc.s = lin.s;
    lc.dt = 2e-3;
    lc.seed = 1;
    lc.N = 100000;
    sde::SimResult sim_a = sde::simulate(u0, lc, lin, sde::SimMode::decoupled,
                                         &linear_keep.pde, 0.5, {0.5});
    sde::SuperpositionReport mismatch = sde::superposition_check(sim_a, pde_b, 0.25, 2e-3);
    pass = pass && mismatch.l1_distance.back() >= 0.2;
    ss << "mismatch_l1=" << mismatch.l1_distance.back() << " (u0 sep " << sep << ")";

    ctx.keep(std::move(nl.pde));
    out.pass = pass;
    out.detail = ss.str();
}

void criterion10(Context& ctx, CriterionResult& out, const SimOutcome& first) {
    out.name = "weak-uniqueness proxy (Thm 4.2)";
    Grid g(1, 128, M_PI);
    Field u0 = random_density(g, 90);
    CoefficientSet lin = linear_fixture();
    SimOutcome second = superposition_run(lin, u0, 2, {1e-6}, &first.pde);
    bool pass = true;
    std::ostringstream ss;
    for (std::size_t k = 0; k < first.report.times.size(); ++k) {
        const double diff =
            std::abs(first.report.l1_distance[k] - second.report.l1_distance[k]);
        const double pooled = std::sqrt(
            first.report.mc_error[k] * first.report.mc_error[k] +
            second.report.mc_error[k] * second.report.mc_error[k]);
        pass = pass && diff <= 2.0 * pooled;
        ss << "t=" << first.report.times[k] << ":" << diff << "/" << 2.0 * pooled
           << " ";
    }
    ctx.keep(std::move(second.pde));
    out.pass = pass;
    out.detail = ss.str();
}

void criterion4(Context& ctx, CriterionResult& out) {
    out.name = "conservation/positivity along evolutions (2.28)-(2.29)";
    bool pass = true;
    double worst_drift = 0.0, worst_min = 0.0;
    for (const SolutionPath* p : ctx.nonneg_paths) {
        const double mass0 = p->mass_trace.front();
        for (std::size_t j = 0; j < p->mass_trace.size(); ++j) {
            const double drift = std::abs(p->mass_trace[j] - mass0) / std::abs(mass0);
            worst_drift = std::max(worst_drift, drift);
            worst_min = std::min(worst_min, p->min_trace[j]);
        }
    }
    pass = worst_drift <= 1e-8 && worst_min >= -1e-8;
    std::ostringstream ss;
    ss << "paths=" << ctx.nonneg_paths.size() << " mass_drift<=" << worst_drift
       << " min>=" << worst_min;
    out.pass = pass;
    out.detail = ss.str();
}

void run_one(int number, Context& ctx, std::vector<CriterionResult>& results,
             void (*fn)(Context&, CriterionResult&), double budget_s) {
    CriterionResult r;
    r.number = number;
    const double t0 = now_seconds();
    try {
        fn(ctx, r);
    } catch (const Error& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = now_seconds() - t0;
    if (r.seconds > budget_s) {
        r.pass = false;
        r.detail += " [runtime budget exceeded]";
    }
    results.push_back(r);
}

}  // namespace

Report run(Level level, std::ostream& log) {
    Report report;
    Context ctx;
    ctx.owned.reserve(64);  // keep SolutionPath addresses stable for criterion 4

    run_one(1, ctx, report.results, criterion1, 60.0);
    run_one(2, ctx, report.results, criterion2, 60.0);
    run_one(3, ctx, report.results, criterion3, 120.0);
    run_one(5, ctx, report.results, criterion5, 60.0);
    run_one(6, ctx, report.results, criterion6, 300.0);
    run_one(7, ctx, report.results, criterion7, 120.0);
    run_one(8, ctx, report.results, criterion8, 180.0);

    SimOutcome linear_outcome;
    if (level == Level::full) {
        CriterionResult r9;
        r9.number = 9;
        const double t0 = now_seconds();
        try {
            criterion9(ctx, r9, linear_outcome);
        } catch (const Error& e) {
            r9.pass = false;
            r9.detail = std::string("error: ") + e.what();
        }
        r9.seconds = now_seconds() - t0;
        if (r9.seconds > 1800.0) {
            r9.pass = false;
            r9.detail += " [runtime budget exceeded]";
        }
        report.results.push_back(r9);

        CriterionResult r10;
        r10.number = 10;
        const double t1 = now_seconds();
        try {
            criterion10(ctx, r10, linear_outcome);
        } catch (const Error& e) {
            r10.pass = false;
            r10.detail = std::string("error: ") + e.what();
        }
        r10.seconds = now_seconds() - t1;
        report.results.push_back(r10);
    } else {
        for (int n : {9, 10}) {
            CriterionResult r;
            r.number = n;
            r.skipped = true;
            r.name = n == 9 ? "superposition (Thm 4.1) at desk scale"
                            : "weak-uniqueness proxy (Thm 4.2)";
            r.detail = "desk-scale particle run; run with --level full";
            report.results.push_back(r);
        }
    }

    // criterion 4 audits every path the other criteria produced
    run_one(4, ctx, report.results, criterion4, 30.0);

    std::sort(report.results.begin(), report.results.end(),
              [](const CriterionResult& a, const CriterionResult& b) {
                  return a.number < b.number;
              });
    for (const auto& r : report.results) {
        const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        log << "[" << tag << "] criterion " << r.number << ": " << r.name << " ("
            << r.seconds << " s) " << r.detail << "\n";
    }
    log << (report.all_pass() ? "acceptance: all criteria passed"
                              : "acceptance: FAILURES present")
        << "\n";
    return report;
}

}  // namespace fracfp::acceptance
