#include "fracfp/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "fracfp/spectral.hpp"

namespace fracfp {

namespace {

using spectral::forward_transform;
using spectral::inverse_transform;

using PointwiseFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

void differentiate_axis_inplace(Spectrum& S, int ax) {
    const Grid& g = S.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        const int m = g.mode(idx[ax]);
        if (m == -g.n() / 2) {
            S[i] = 0.0;
            continue;
        }
        S[i] *= std::complex<double>(0.0, -g.dxi() * m);
    }
}

void dealias_mask(Spectrum& S) {
    const Grid& g = S.grid();
    const int kmax = g.n() / 3;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        for (int ax = 0; ax < g.dim(); ++ax)
            if (std::abs(g.mode(idx[ax])) >= kmax) {
                S[i] = 0.0;
                break;
            }
    }
}

// Anderson acceleration (type II): given the history of iterates y_j and
// their fixed-point images g_j, return the extrapolated next iterate, or an
// empty vector when the small least-squares system is unusable.
std::vector<double> anderson_candidate(const std::deque<std::vector<double>>& ys,
                                       const std::deque<std::vector<double>>& gs) {
    const std::size_t m = ys.size();
    if (m < 2) return {};
    const std::size_t n = ys.front().size();
    const std::size_t k = m - 1;
    std::vector<std::vector<double>> dr(k, std::vector<double>(n));
    std::vector<double> r_last(n);
    for (std::size_t i = 0; i < n; ++i) r_last[i] = gs[m - 1][i] - ys[m - 1][i];
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            dr[j][i] = (gs[j + 1][i] - ys[j + 1][i]) - (gs[j][i] - ys[j][i]);

    std::vector<std::vector<double>> A(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    double tr = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += dr[a][i] * dr[b][i];
            A[a][b] = A[b][a] = s;
        }
        tr += A[a][a];
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += dr[a][i] * r_last[i];
        rhs[a] = s;
    }
    const double reg = 1e-12 * std::max(tr, 1e-300);
    for (std::size_t a = 0; a < k; ++a) A[a][a] += reg;

    std::vector<double> gamma(rhs);
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t best = col;
        for (std::size_t row = col + 1; row < k; ++row)
            if (std::abs(A[row][col]) > std::abs(A[best][col])) best = row;
        std::swap(A[col], A[best]);
        std::swap(gamma[col], gamma[best]);
        if (std::abs(A[col][col]) < 1e-300) return {};
        for (std::size_t row = col + 1; row < k; ++row) {
            const double fac = A[row][col] / A[col][col];
            for (std::size_t c2 = col; c2 < k; ++c2) A[row][c2] -= fac * A[col][c2];
            gamma[row] -= fac * gamma[col];
        }
    }
    for (std::size_t col = k; col-- > 0;) {
        for (std::size_t c2 = col + 1; c2 < k; ++c2) gamma[col] -= A[col][c2] * gamma[c2];
        gamma[col] /= A[col][col];
        if (!std::isfinite(gamma[col])) return {};
    }
    std::vector<double> out(gs[m - 1]);
    for (std::size_t j = 0; j < k; ++j) {
        const double gj = gamma[j];
        if (gj == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) out[i] -= gj * (gs[j + 1][i] - gs[j][i]);
    }
    return out;
}

// One eps-stage of the discrete operator: y + lambda a(xi) beta(y)^ + lambda div(W g(y)).
struct StageSpec {
    Grid grid;
    std::vector<double> symbol;
    PointwiseFn beta_eval;
    double mu = 1.0;
    const VectorField* drift_field = nullptr;
    PointwiseFn drift_factor;
    bool enforce_mean = true;
    bool dealias = false;

    explicit StageSpec(const Grid& g) : grid(g) {}
};

struct EvalState {
    std::vector<double> y;
    Spectrum yhat;
    Spectrum zhat;
    Spectrum divVhat;
    double rl1 = 0.0;
    double rl2 = 0.0;
    explicit EvalState(const Grid& g) : yhat(g), zhat(g), divVhat(g) {}
};

class StageSolver {
public:
    StageSolver(const StageSpec& spec, const Field& f, double lambda,
                const SolverControls& ctl)
        : spec_(spec), grid_(spec.grid), lambda_(lambda), ctl_(ctl),
          fhat_(forward_transform(f)) {
        const double scale = std::max(1.0, spectral::norm_l1(f));
        tol_l1_ = ctl.tol_l1 * scale;
        tol_rl2_ = ctl.tol_precond * scale;
        precond_.resize(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i)
            precond_[i] = 1.0 / (1.0 + lambda_ * spec_.mu * spec_.symbol[i]);
    }

    EvalState evaluate(std::vector<double> yvals) const {
        EvalState st(grid_);
        st.y = std::move(yvals);
        st.yhat = forward_transform(Field(grid_, st.y));
        fill_terms(st);
        return st;
    }

    // shift the initial guess so its mean matches f's; later proposals keep it
    std::vector<double> pin_mean_values(std::vector<double> y, const Field& f) const {
        double mf = 0.0, my = 0.0;
        for (double v : f.values()) mf += v;
        for (double v : y) my += v;
        const double shift = (mf - my) / static_cast<double>(y.size());
        for (auto& v : y) v += shift;
        return y;
    }

    ResolventSolution solve(const Field& f, const Field* warm) const {
        std::vector<double> y0 = warm ? warm->values() : f.values();
        if (spec_.enforce_mean) y0 = pin_mean_values(std::move(y0), f);
        EvalState cur = evaluate(std::move(y0));

        ResolventSolution sol{Field(grid_), 0, 0.0, 0.0, {}, {}, {}};
        sol.residual_history.push_back(cur.rl2);
        double omega = std::clamp(ctl_.damping, 1e-6, 1.0);
        std::deque<std::vector<double>> hist_y, hist_g;
        int iter = 0, aa_rejects = 0;

        while (!(cur.rl1 <= tol_l1_ && cur.rl2 <= tol_rl2_)) {
            if (iter >= ctl_.max_iter)
                throw NoConvergence(Field(grid_, cur.y), cur.rl1, "max_iter exceeded");
            ++iter;

            std::vector<double> g = picard_target(cur);
            hist_y.push_back(cur.y);
            hist_g.push_back(g);
            if (static_cast<int>(hist_y.size()) > std::max(2, ctl_.anderson_depth)) {
                hist_y.pop_front();
                hist_g.pop_front();
            }

            bool accepted = false;
            if (hist_y.size() >= 2 && aa_rejects < 3) {
                auto cand = anderson_candidate(hist_y, hist_g);
                if (!cand.empty()) {
                    EvalState trial = evaluate(std::move(cand));
                    if (trial.rl2 < cur.rl2) {
                        cur = std::move(trial);
                        accepted = true;
                        aa_rejects = 0;
                    } else {
                        ++aa_rejects;
                    }
                }
            }
            if (!accepted) {
                double w = omega;
                bool ok = false;
                for (int bt = 0; bt < 45 && !ok; ++bt) {
                    std::vector<double> trial_y(cur.y.size());
                    for (std::size_t i = 0; i < trial_y.size(); ++i)
                        trial_y[i] = cur.y[i] + w * (g[i] - cur.y[i]);
                    EvalState trial = evaluate(std::move(trial_y));
                    if (trial.rl2 < cur.rl2) {
                        cur = std::move(trial);
                        omega = std::min(1.0, w * 1.4);
                        ok = true;
                    } else {
                        w *= 0.5;
                        if (w < 1e-9) break;
                    }
                }
                if (!ok)
                    throw NoConvergence(Field(grid_, cur.y), cur.rl1,
                                        "backtracking stalled");
                if (aa_rejects >= 3) {
                    hist_y.clear();
                    hist_g.clear();
                    aa_rejects = 0;
                }
            }
            sol.residual_history.push_back(cur.rl2);
        }
        sol.y = Field(grid_, std::move(cur.y));
        sol.iterations = iter;
        sol.residual_l1 = cur.rl1;
        sol.residual_precond_l2 = cur.rl2;
        return sol;
    }

    void residuals_of(const Field& y, double& rl1, double& rl2) const {
        EvalState st = evaluate(y.values());
        rl1 = st.rl1;
        rl2 = st.rl2;
    }

private:
    void fill_terms(EvalState& st) const {
        std::vector<double> z(grid_.size());
        spec_.beta_eval(st.y, z);
        st.zhat = forward_transform(Field(grid_, z));
        if (spec_.dealias) dealias_mask(st.zhat);
        if (spec_.drift_field) {
            std::vector<double> w(grid_.size());
            spec_.drift_factor(st.y, w);
            Spectrum acc(grid_);
            for (int ax = 0; ax < grid_.dim(); ++ax) {
                std::vector<double> comp(grid_.size());
                const auto& Dax = spec_.drift_field->component(ax);
                for (std::size_t i = 0; i < grid_.size(); ++i) comp[i] = Dax[i] * w[i];
                Spectrum Sx = forward_transform(Field(grid_, comp));
                if (spec_.dealias) dealias_mask(Sx);
                differentiate_axis_inplace(Sx, ax);
                for (std::size_t i = 0; i < grid_.size(); ++i) acc[i] += Sx[i];
            }
            st.divVhat = std::move(acc);
        }
        Spectrum R(grid_);
        double rl2 = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double a = spec_.symbol[i];
            R[i] = st.yhat[i] + lambda_ * (a * st.zhat[i] + st.divVhat[i]) - fhat_[i];
            const double w = (a > 0.0) ? 1.0 / a : 1.0;
            rl2 += std::norm(R[i]) * w * w;
        }
        st.rl2 = std::sqrt(rl2 * grid_.dual_cell_volume());
        st.rl1 = spectral::norm_l1(spectral::inverse_transform_unchecked(R));
    }

    std::vector<double> picard_target(const EvalState& st) const {
        Spectrum Y(grid_);
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double a = spec_.symbol[i];
            Y[i] = precond_[i] * (fhat_[i] -
                                  lambda_ * (a * (st.zhat[i] - spec_.mu * st.yhat[i]) +
                                             st.divVhat[i]));
        }
        if (spec_.enforce_mean) Y[0] = fhat_[0];
        return spectral::inverse_transform_unchecked(Y).values();
    }

    const StageSpec& spec_;
    Grid grid_;
    double lambda_;
    SolverControls ctl_;
    Spectrum fhat_;
    std::vector<double> precond_;
    double tol_l1_ = 0.0, tol_rl2_ = 0.0;
};

double probe_sup(const std::function<double(double)>& f, double lo, double hi,
                 int points = 513) {
    double sup = 0.0;
    for (int i = 0; i < points; ++i)
        sup = std::max(sup, std::abs(f(lo + (hi - lo) * i / (points - 1))));
    return sup;
}

double probe_min(const std::function<double(double)>& f, double lo, double hi,
                 int points = 513) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i)
        m = std::min(m, f(lo + (hi - lo) * i / (points - 1)));
    return m;
}

}  // namespace

// --- engine ------------------------------------------------------------------

struct ResolventEngine::Impl {
    Grid grid;
    CoefficientSet cs;
    SolverControls ctl;
    std::vector<double> schedule;
    double lam0 = std::numeric_limits<double>::infinity();
    double M = 0.0;  // |(div D)^- + |D||_inf probe
    bool degenerate_beta = false;
    bool b_is_zero = false;

    struct StageContext {
        double eps = 0.0;
        std::vector<double> symbol;
        ScalarFunctionSpec beta_eps;
        VectorField D_vals;
        RegularizedB breg;
        bool has_drift = false;
        double D_sup_grid = 0.0;
        double lambda_stage = std::numeric_limits<double>::infinity();
        StageContext(const Grid& g) : D_vals(g) {}
    };
    mutable std::vector<std::shared_ptr<StageContext>> stages;

    Impl(const Grid& g, CoefficientSet c, SolverControls controls,
         std::vector<double> eps_schedule)
        : grid(g), cs(std::move(c)), ctl(controls), schedule(std::move(eps_schedule)) {
        if (schedule.empty()) throw DomainError("eps schedule must be nonempty");
        const double beta_min = probe_min(
            [this](double r) { return cs.beta.derivative(r); }, -8.0, 8.0);
        degenerate_beta = beta_min < 1e-8;
        if (degenerate_beta) {
            for (auto& e : schedule) e = std::max(e, 1e-3);
            schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
        }
        b_is_zero = probe_sup(cs.b.evaluate, -8.0, 8.0, 65) < 1e-14;
        ProbeOptions probes;
        lam0 = lambda0(cs, probes);
        if (cs.D.is_zero()) {
            M = 0.0;
        } else if (std::isfinite(lam0)) {
            // back out M from lambda0 = 1/(M + sqrt(M) b_sup) is fragile; reprobe
            M = cs.D.div_minus_sup + cs.D.sup_bound;
            if (!std::isfinite(M)) M = 0.0;
        }
        for (double e : schedule) stage_for(e);
    }

    StageContext& stage_for(double eps) const {
        for (auto& s : stages)
            if (s->eps == eps) return *s;
        auto ctx = std::make_shared<StageContext>(grid);
        ctx->eps = eps;
        ctx->beta_eps = regularize_beta(cs.beta, eps);
        ctx->symbol.resize(grid.size());
        const double s = cs.s;
        for (std::size_t i = 0; i < grid.size(); ++i)
            ctx->symbol[i] = std::pow(eps + grid.xi_norm2(i), s);
        if (ctl.mean_mode == MeanMode::annihilated) ctx->symbol[0] = 0.0;
        ctx->has_drift = !cs.D.is_zero() && !b_is_zero;
        if (ctx->has_drift) {
            DriftSpec Deps = cutoff_D(cs.D, eps);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto idx = grid.unravel(i);
                Vec3 x{0.0, 0.0, 0.0};
                for (int ax = 0; ax < grid.dim(); ++ax) x[ax] = grid.coord(idx[ax]);
                const Vec3 v = Deps.evaluate(x);
                double norm2 = 0.0;
                for (int ax = 0; ax < grid.dim(); ++ax) {
                    ctx->D_vals.component(ax)[i] = v[ax];
                    norm2 += v[ax] * v[ax];
                }
                ctx->D_sup_grid = std::max(ctx->D_sup_grid, std::sqrt(norm2));
            }
            ctx->breg = regularize_b(cs.b, eps);
            const double lip = ctx->breg.b_star_eps.lipschitz_bound.value_or(0.0);
            const double c_lip =
                ctx->D_sup_grid * lip * std::pow(eps, 0.5 - cs.s);
            ctx->lambda_stage =
                c_lip > 0.0 ? 1.0 / (2.0 * c_lip) : std::numeric_limits<double>::infinity();
        }
        stages.push_back(ctx);
        return *stages.back();
    }

    StageSpec make_spec(const StageContext& ctx, double f_sup, double warm_sup) const {
        StageSpec spec(grid);
        spec.symbol = ctx.symbol;
        const double range =
            1.2 * (1.0 + std::sqrt(std::max(M, 0.0))) * std::max(f_sup, warm_sup) + 0.5;
        auto beta = ctx.beta_eps;
        spec.beta_eval = [beta](const std::vector<double>& y, std::vector<double>& out) {
            for (std::size_t i = 0; i < y.size(); ++i) out[i] = beta.evaluate(y[i]);
        };
        spec.mu = std::max(probe_sup(ctx.beta_eps.derivative, -range, range), ctx.eps);
        if (ctx.has_drift) {
            spec.drift_field = &ctx.D_vals;
            auto bstar = ctx.breg.b_star_eps;
            spec.drift_factor = [bstar](const std::vector<double>& y,
                                        std::vector<double>& out) {
                for (std::size_t i = 0; i < y.size(); ++i) out[i] = bstar.evaluate(y[i]);
            };
        }
        spec.enforce_mean = ctl.mean_mode == MeanMode::annihilated;
        spec.dealias = ctl.dealias;
        return spec;
    }

    ResolventSolution solve_stage(const Field& f, double lambda, double eps,
                                  const Field* warm, bool chain_if_needed) const {
        if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
        const StageContext& ctx = stage_for(eps);
        const double f_sup = spectral::norm_linf(f);
        const double w_sup = warm ? spectral::norm_linf(*warm) : f_sup;
        StageSpec spec = make_spec(ctx, f_sup, w_sup);

        if (lambda < ctx.lambda_stage) {
            StageSolver solver(spec, f, lambda, ctl);
            ResolventSolution sol = solver.solve(f, warm);
            sol.chain.push_back({eps, lambda, sol.iterations, 0, sol.residual_l1, 0.0});
            return sol;
        }
        if (!chain_if_needed || !ctl.allow_chaining)
            throw StageBoundExceeded(lambda, ctx.lambda_stage);

        // lambda-range extension via T(y) = J_{l1}((1 - l1/l) y + (l1/l) f)
        const double l1 = 0.9 * ctx.lambda_stage;
        const double theta = l1 / lambda;
        const double tol_fix =
            0.5 * ctl.tol_l1 * std::max(1.0, spectral::norm_l1(f)) * theta;
        Field y = warm ? *warm : f;
        int total_iters = 0, outer = 0;
        while (outer < ctl.max_outer) {
            ++outer;
            Field rhs(grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                rhs[i] = (1.0 - theta) * y[i] + theta * f[i];
            StageSolver solver(spec, rhs, l1, ctl);
            ResolventSolution inner = solver.solve(rhs, &y);
            total_iters += inner.iterations;
            double inc = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i)
                inc += std::abs(inner.y[i] - y[i]);
            inc *= grid.cell_volume();
            y = std::move(inner.y);
            if (inc <= tol_fix) break;
        }
        if (outer >= ctl.max_outer)
            throw NoConvergence(y, 0.0, "lambda chain did not contract");

        ResolventSolution sol{Field(grid), 0, 0.0, 0.0, {}, {}, {}};
        StageSolver checker(spec, f, lambda, ctl);
        checker.residuals_of(y, sol.residual_l1, sol.residual_precond_l2);
        sol.y = std::move(y);
        sol.iterations = total_iters;
        sol.chain.push_back({eps, lambda, total_iters, outer, sol.residual_l1, 0.0});
        if (sol.residual_l1 > 50.0 * ctl.tol_l1 * std::max(1.0, spectral::norm_l1(f)))
            sol.warnings.push_back("chained solve residual above stage tolerance");
        return sol;
    }
};

ResolventEngine::ResolventEngine(const Grid& grid, CoefficientSet cs,
                                 SolverControls controls, std::vector<double> schedule)
    : impl_(std::make_unique<Impl>(grid, std::move(cs), controls, std::move(schedule))) {}

ResolventEngine::~ResolventEngine() = default;
ResolventEngine::ResolventEngine(ResolventEngine&&) noexcept = default;
ResolventEngine& ResolventEngine::operator=(ResolventEngine&&) noexcept = default;

ResolventSolution ResolventEngine::solve_stage(const Field& f, double lambda, double eps,
                                               const Field* warm,
                                               bool chain_if_needed) const {
    return impl_->solve_stage(f, lambda, eps, warm, chain_if_needed);
}

double ResolventEngine::lambda_stage(double eps) const {
    return impl_->stage_for(eps).lambda_stage;
}

double ResolventEngine::lambda0_bound() const { return impl_->lam0; }
const std::vector<double>& ResolventEngine::eps_schedule() const {
    return impl_->schedule;
}
const SolverControls& ResolventEngine::controls() const { return impl_->ctl; }
const Grid& ResolventEngine::grid() const { return impl_->grid; }

ResolventSolution ResolventEngine::apply(const Field& f, double lambda,
                                         const Field* warm_start) const {
    ResolventSolution out{Field(impl_->grid), 0, 0.0, 0.0, {}, {}, {}};
    if (lambda >= impl_->lam0)
        out.warnings.push_back("lambda exceeds the admissible bound lambda0");
    const Field* warm = warm_start;
    Field prev(impl_->grid);
    bool have_prev = false;
    for (double eps : impl_->schedule) {
        ResolventSolution sol = impl_->solve_stage(f, lambda, eps, warm, true);
        StageInfo info = sol.chain.back();
        if (have_prev) {
            double inc = 0.0;
            for (std::size_t i = 0; i < impl_->grid.size(); ++i)
                inc += std::abs(sol.y[i] - prev[i]);
            info.increment_l1 = inc * impl_->grid.cell_volume();
        }
        out.chain.push_back(info);
        out.iterations += sol.iterations;
        out.residual_l1 = sol.residual_l1;
        out.residual_precond_l2 = sol.residual_precond_l2;
        for (auto& w : sol.warnings) out.warnings.push_back(w);
        prev = std::move(sol.y);
        have_prev = true;
        warm = &prev;
    }
    out.y = std::move(prev);
    return out;
}

// --- one-shot wrappers -------------------------------------------------------

ResolventSolution solve_preconditioned(const ResolventProblem& p) {
    ResolventEngine engine(p.f.grid(), p.cs, p.controls, {p.eps});
    return engine.solve_stage(p.f, p.lambda, p.eps, nullptr, p.controls.allow_chaining);
}

ResolventSolution solve_chained(const Field& f, double lambda, double eps,
                                const CoefficientSet& cs, const SolverControls& controls) {
    ResolventEngine engine(f.grid(), cs, controls, {eps});
    return engine.solve_stage(f, lambda, eps, nullptr, true);
}

ResolventSolution resolvent_J(const Field& f, double lambda, const CoefficientSet& cs,
                              std::vector<double> eps_schedule,
                              const SolverControls& controls) {
    ResolventEngine engine(f.grid(), cs, controls, std::move(eps_schedule));
    return engine.apply(f, lambda);
}

double check_resolvent_identity(const Field& f, double lambda1, double lambda2,
                                const CoefficientSet& cs, const SolverControls& controls) {
    ResolventEngine engine(f.grid(), cs, controls);
    ResolventSolution y2 = engine.apply(f, lambda2);
    Field mixed(f.grid());
    const double ratio = lambda1 / lambda2;
    for (std::size_t i = 0; i < f.size(); ++i)
        mixed[i] = ratio * f[i] + (1.0 - ratio) * y2.y[i];
    ResolventSolution lhs = engine.apply(mixed, lambda1);
    double defect = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        defect += std::abs(lhs.y[i] - y2.y[i]);
    return defect * f.grid().cell_volume();
}

ResolventSolution solve_linear_nonlocal(const Field& f, double lambda,
                                        const std::vector<double>& c_diffusion,
                                        const VectorField* drift_coeff, double s,
                                        double eps_symbol, const SolverControls& controls,
                                        const Field* warm_start) {
    const Grid& g = f.grid();
    if (c_diffusion.size() != g.size())
        throw DomainError("diffusion coefficient size mismatch");
    StageSpec spec(g);
    spec.symbol.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi2 = g.xi_norm2(i);
        spec.symbol[i] = (eps_symbol == 0.0 && xi2 == 0.0)
                             ? 0.0
                             : std::pow(eps_symbol + xi2, s);
    }
    if (controls.mean_mode == MeanMode::annihilated) spec.symbol[0] = 0.0;
    spec.enforce_mean = controls.mean_mode == MeanMode::annihilated;
    spec.dealias = controls.dealias;
    double mu = 0.0;
    for (double c : c_diffusion) mu = std::max(mu, c);
    spec.mu = std::max(mu, 1e-12);
    spec.beta_eval = [&c_diffusion](const std::vector<double>& y,
                                    std::vector<double>& out) {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = c_diffusion[i] * y[i];
    };
    if (drift_coeff) {
        spec.drift_field = drift_coeff;
        spec.drift_factor = [](const std::vector<double>& y, std::vector<double>& out) {
            out = y;
        };
    }
    StageSolver solver(spec, f, lambda, controls);
    ResolventSolution sol = solver.solve(f, warm_start);
    sol.chain.push_back({eps_symbol, lambda, sol.iterations, 0, sol.residual_l1, 0.0});
    return sol;
}

}  // namespace fracfp
