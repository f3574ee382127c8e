#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracfp/coefficients.hpp"
#include "fracfp/field.hpp"

namespace fracfp {

/// Zero-mode treatment of the regularized operator (eps I - Delta)^s inside
/// the resolvent equation.
///   annihilated: the zero Fourier mode of the diffusion term is dropped, so
///     every stage conserves mass exactly (this is the eps->0 behavior of the
///     limit operator, whose symbol vanishes at xi = 0);
///   bessel: the literal symbol (eps + |xi|^2)^s including eps^s at xi = 0.
enum class MeanMode { annihilated, bessel };

struct SolverControls {
    int max_iter = 20000;
    double tol_l1 = 1e-10;        // |y + lambda A(y) - f|_1 stop threshold
    double tol_precond = 1e-11;   // preconditioned l2 residual stop threshold
    double damping = 1.0;         // initial relaxation factor
    int anderson_depth = 8;
    MeanMode mean_mode = MeanMode::annihilated;
    bool dealias = false;
    bool allow_chaining = true;
    int max_outer = 4000;         // lambda-doubling fixed-point iterations
};

struct ResolventProblem {
    Field f;
    double lambda;
    double eps;
    CoefficientSet cs;
    SolverControls controls;
};

struct StageInfo {
    double eps = 0.0;
    double lambda = 0.0;
    int iterations = 0;
    int outer_iterations = 0;  // T-iterations of the lambda chain
    double residual_l1 = 0.0;
    double increment_l1 = 0.0;  // l1 distance to the previous eps stage
};

struct ResolventSolution {
    Field y;
    int iterations = 0;
    double residual_l1 = 0.0;
    double residual_precond_l2 = 0.0;
    std::vector<StageInfo> chain;
    std::vector<double> residual_history;  // accepted preconditioned residuals
    std::vector<std::string> warnings;
};

struct NoConvergence : Error {
    Field best;
    double residual;
    NoConvergence(Field b, double r, const std::string& why)
        : Error("resolvent iteration did not converge: " + why +
                " (residual " + std::to_string(r) + ")"),
          best(std::move(b)), residual(r) {}
};

struct StageBoundExceeded : Error {
    double lambda, lambda_stage;
    StageBoundExceeded(double l, double ls)
        : Error("lambda " + std::to_string(l) + " >= stage bound " +
                std::to_string(ls) + " and chaining is disabled"),
          lambda(l), lambda_stage(ls) {}
};

/// Reusable per-(grid, coefficients) solver state: regularized coefficient
/// tables and sampled drift fields per eps stage are built once and shared by
/// every solve (the implicit-Euler loop calls this hundreds of times).
class ResolventEngine {
public:
    ResolventEngine(const Grid& grid, CoefficientSet cs, SolverControls controls = {},
                    std::vector<double> eps_schedule = {1e-2, 1e-3, 1e-4});
    ~ResolventEngine();
    ResolventEngine(ResolventEngine&&) noexcept;
    ResolventEngine& operator=(ResolventEngine&&) noexcept;

    /// J_lambda(f): chained solve over the eps schedule, last iterate returned.
    ResolventSolution apply(const Field& f, double lambda,
                            const Field* warm_start = nullptr) const;

    /// Single-stage solve of the eps-regularized equation (2.7 discretized).
    ResolventSolution solve_stage(const Field& f, double lambda, double eps,
                                  const Field* warm_start = nullptr,
                                  bool chain_if_needed = true) const;

    /// Smallness bound for the damped stage iteration at this eps.
    double lambda_stage(double eps) const;

    double lambda0_bound() const;
    const std::vector<double>& eps_schedule() const;
    const SolverControls& controls() const;
    const Grid& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// --- one-shot wrappers (spec operation surface) -----------------------------

/// Solve the preconditioned monotone form (2.12) of the regularized resolvent
/// equation at a single (lambda, eps). Delegates to the lambda chain when
/// lambda >= lambda_stage(eps) and chaining is enabled, else throws
/// StageBoundExceeded.
ResolventSolution solve_preconditioned(const ResolventProblem& p);

/// Lambda-range extension: outer fixed point T(y) = J_eps_l1((1-l1/l)y + (l1/l)f)
/// composed with single-stage solves at l1 < lambda_stage(eps).
ResolventSolution solve_chained(const Field& f, double lambda, double eps,
                                const CoefficientSet& cs,
                                const SolverControls& controls = {});

/// J_lambda(f): decreasing-eps schedule, last iterate, with per-stage l1
/// increments as the convergence diagnostic.
ResolventSolution resolvent_J(const Field& f, double lambda, const CoefficientSet& cs,
                              std::vector<double> eps_schedule = {1e-2, 1e-3, 1e-4},
                              const SolverControls& controls = {});

/// l1 defect of the resolvent identity (2.3) between lambda1 and lambda2.
double check_resolvent_identity(const Field& f, double lambda1, double lambda2,
                                const CoefficientSet& cs,
                                const SolverControls& controls = {});

/// Solve v + lambda (eps_symbol I - Delta)^s (c v) + lambda div(W v) = f with
/// pointwise coefficient c >= 0 and frozen drift coefficient W (the linear
/// solve behind the linearized evolution). eps_symbol = 0 uses |xi|^{2s} with
/// the zero mode annihilated.
ResolventSolution solve_linear_nonlocal(const Field& f, double lambda,
                                        const std::vector<double>& c_diffusion,
                                        const VectorField* drift_coeff, double s,
                                        double eps_symbol,
                                        const SolverControls& controls = {},
                                        const Field* warm_start = nullptr);

}  // namespace fracfp
