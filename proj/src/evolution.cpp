#include "fracfp/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "fracfp/spectral.hpp"

namespace fracfp {

Field step(const Field& u, double h, const ResolventEngine& engine) {
    return engine.apply(u, h).y;
}

namespace {

void record_trace(SolutionPath& path, double t, const Field& u) {
    path.trace_times.push_back(t);
    path.mass_trace.push_back(spectral::integral(u));
    double mn = u[0];
    for (double v : u.values()) mn = std::min(mn, v);
    path.min_trace.push_back(mn);
    path.linf_trace.push_back(spectral::norm_linf(u));
}

}  // namespace

SolutionPath evolve(const Field& u0, const EvolutionConfig& cfg) {
    if (!(cfg.h > 0.0) || !(cfg.T >= cfg.h))
        throw DomainError("evolution needs 0 < h <= T");
    if (!u0.all_finite()) throw DomainError("initial data must be finite");

    ResolventEngine engine(u0.grid(), cfg.cs, cfg.solver, cfg.eps_schedule);
    const int n_steps = static_cast<int>(std::floor(cfg.T / cfg.h + 1e-9));

    SolutionPath path;
    path.times.push_back(0.0);
    path.fields.push_back(u0);
    record_trace(path, 0.0, u0);
    if (cfg.h >= engine.lambda0_bound())
        path.warnings.push_back("step h exceeds lambda0; resolvent chaining in effect");

    Field u = u0;
    for (int j = 1; j <= n_steps; ++j) {
        ResolventSolution sol{Field(u0.grid()), 0, 0, 0, {}, {}, {}};
        try {
            sol = engine.apply(u, cfg.h, &u);
        } catch (const NoConvergence& e) {
            path.failed = true;
            path.failure = e.what();
            break;
        }
        u = std::move(sol.y);
        for (auto& w : sol.warnings)
            if (path.warnings.empty() || path.warnings.back() != w)
                path.warnings.push_back(w);
        const double t = j * cfg.h;
        record_trace(path, t, u);
        if (j % std::max(1, cfg.snapshot_stride) == 0 || j == n_steps) {
            path.times.push_back(t);
            path.fields.push_back(u);
        }
    }
    return path;
}

Field exponential_formula(const Field& u0, double t, int n, const EvolutionConfig& cfg) {
    if (n < 1) throw DomainError("exponential formula needs n >= 1");
    EvolutionConfig c = cfg;
    c.T = t;
    c.h = t / n;
    c.snapshot_stride = n;  // only the final field is needed
    SolutionPath path = evolve(u0, c);
    if (path.failed) throw NoConvergence(path.final_field(), 0.0, path.failure);
    return path.final_field();
}

std::vector<TestFunction> test_function_catalog(const Grid& grid, double T_end,
                                                int count) {
    const double Tw = 0.9 * T_end;
    auto chi = [Tw](double t) {
        if (t < 0.0 || t >= Tw) return 0.0;
        const double tau = t / Tw;
        return std::exp(1.0 - 1.0 / (1.0 - tau * tau));
    };
    std::vector<TestFunction> out;
    const double k1 = grid.dxi();
    auto add_mode = [&](const std::string& name,
                        const std::function<double(const std::array<double, 3>&)>& psi) {
        Field p(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto idx = grid.unravel(i);
            std::array<double, 3> x{0.0, 0.0, 0.0};
            for (int ax = 0; ax < grid.dim(); ++ax) x[ax] = grid.coord(idx[ax]);
            p[i] = psi(x);
        }
        out.push_back({chi, p, name});
    };
    add_mode("bump_x_const", [](const std::array<double, 3>&) { return 1.0; });
    add_mode("bump_x_cos1", [k1](const std::array<double, 3>& x) { return std::cos(k1 * x[0]); });
    add_mode("bump_x_sin1", [k1](const std::array<double, 3>& x) { return std::sin(k1 * x[0]); });
    add_mode("bump_x_cos2", [k1](const std::array<double, 3>& x) { return std::cos(2.0 * k1 * x[0]); });
    if (grid.dim() >= 2)
        add_mode("bump_x_cross", [k1](const std::array<double, 3>& x) {
            return std::cos(k1 * x[0]) * std::cos(k1 * x[1]);
        });
    else
        add_mode("bump_x_sin2", [k1](const std::array<double, 3>& x) { return std::sin(2.0 * k1 * x[0]); });
    while (out.size() > static_cast<std::size_t>(count)) out.pop_back();
    return out;
}

double distributional_residual(const SolutionPath& path, const TestFunction& phi,
                               const CoefficientSet& cs) {
    const Grid& g = path.grid();
    const double dV = g.cell_volume();
    const std::size_t n_snap = path.fields.size();
    if (n_snap < 2) throw DomainError("path needs at least two snapshots");

    // spatial pairings, exact spectrally
    const Field lap_psi = spectral::apply_fractional_laplacian(phi.psi, cs.s);
    const VectorField grad_psi = spectral::gradient(phi.psi);
    std::vector<double> D_dot_grad(g.size(), 0.0);
    if (!cs.D.is_zero()) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto idx = g.unravel(i);
            Vec3 x{0.0, 0.0, 0.0};
            for (int ax = 0; ax < g.dim(); ++ax) x[ax] = g.coord(idx[ax]);
            const Vec3 Dv = cs.D.evaluate(x);
            double s = 0.0;
            for (int ax = 0; ax < g.dim(); ++ax) s += Dv[ax] * grad_psi.component(ax)[i];
            D_dot_grad[i] = s;
        }
    }

    auto pair_psi = [&](const Field& u) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += u[i] * phi.psi[i];
        return s * dV;
    };
    // G(u) = <beta(u), (-Delta)^s psi> - <b(u) u, D.grad psi>
    auto G = [&](const Field& u) {
        double sb = 0.0, sd = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sb += cs.beta.evaluate(u[i]) * lap_psi[i];
            if (!cs.D.is_zero()) sd += cs.b.evaluate(u[i]) * u[i] * D_dot_grad[i];
        }
        return (sb - sd) * dV;
    };

    // int u phi_t dt dx with the piecewise-constant path, exact in t
    double residual = 0.0;
    for (std::size_t j = 0; j + 1 < n_snap; ++j) {
        const double dchi = phi.chi(path.times[j + 1]) - phi.chi(path.times[j]);
        residual += pair_psi(path.fields[j]) * dchi;
    }
    // operator terms, trapezoid on the snapshot nodes
    for (std::size_t j = 0; j + 1 < n_snap; ++j) {
        const double dt = path.times[j + 1] - path.times[j];
        const double wj = 0.5 * dt * phi.chi(path.times[j]);
        const double wj1 = 0.5 * dt * phi.chi(path.times[j + 1]);
        residual -= wj * G(path.fields[j]) + wj1 * G(path.fields[j + 1]);
    }
    // initial term
    residual += phi.chi(0.0) * pair_psi(path.fields.front());
    return std::abs(residual);
}

SolutionPath evolve_linearized(const SolutionPath& u_frozen, const Field& v0,
                               const CoefficientSet& cs, const LinearizedConfig& cfg) {
    const Grid& g = v0.grid();
    if (u_frozen.grid() != g) throw DomainError("frozen path grid mismatch");
    const std::size_t n_snap = u_frozen.fields.size();
    if (n_snap < 2) throw DomainError("frozen path needs at least two snapshots");

    // frozen coefficient evaluators (optionally eps-regularized)
    ScalarFunctionSpec beta_f = cs.beta;
    ScalarFunctionSpec b_f = cs.b;
    if (cfg.freeze_eps > 0.0) {
        beta_f = regularize_beta(cs.beta, cfg.freeze_eps);
        if (!cs.D.is_zero()) b_f = regularize_b(cs.b, cfg.freeze_eps).b_eps;
    }

    SolutionPath path;
    path.times.push_back(u_frozen.times.front());
    path.fields.push_back(v0);
    record_trace(path, u_frozen.times.front(), v0);

    Field v = v0;
    for (std::size_t j = 1; j < n_snap; ++j) {
        const Field& u_next = u_frozen.fields[j];
        const double dt = u_frozen.times[j] - u_frozen.times[j - 1];
        std::vector<double> c(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double u = u_next[i];
            c[i] = (u == 0.0) ? 0.0 : beta_f.evaluate(u) / u;
            if (!(c[i] >= 0.0)) c[i] = std::max(c[i], 0.0);
        }
        VectorField W(g);
        const bool drifted = !cs.D.is_zero();
        if (drifted) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto idx = g.unravel(i);
                Vec3 x{0.0, 0.0, 0.0};
                for (int ax = 0; ax < g.dim(); ++ax) x[ax] = g.coord(idx[ax]);
                const Vec3 Dv = cs.D.evaluate(x);
                const double bu = b_f.evaluate(u_next[i]);
                for (int ax = 0; ax < g.dim(); ++ax) W.component(ax)[i] = Dv[ax] * bu;
            }
        }
        ResolventSolution sol = solve_linear_nonlocal(
            v, dt, c, drifted ? &W : nullptr, cs.s, cfg.freeze_eps, cfg.solver, &v);
        v = std::move(sol.y);
        record_trace(path, u_frozen.times[j], v);
        if (j % std::max(1, cfg.snapshot_stride) == 0 || j + 1 == n_snap) {
            path.times.push_back(u_frozen.times[j]);
            path.fields.push_back(v);
        }
    }
    return path;
}

}  // namespace fracfp
