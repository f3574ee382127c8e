#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracfp/resolvent.hpp"

namespace fracfp {

struct EvolutionConfig {
    double T = 1.0;
    double h = 1e-2;
    CoefficientSet cs;
    SolverControls solver;
    std::vector<double> eps_schedule = {1e-2, 1e-3, 1e-4};
    int snapshot_stride = 1;
};

/// Piecewise-constant-in-time implicit-Euler path u_h(t) = u^j on [jh,(j+1)h).
struct SolutionPath {
    std::vector<double> times;   // snapshot times, times[0] == 0
    std::vector<Field> fields;   // aligned with times, common grid
    std::vector<double> trace_times;  // every step
    std::vector<double> mass_trace;
    std::vector<double> min_trace;
    std::vector<double> linf_trace;
    std::vector<std::string> warnings;
    bool failed = false;
    std::string failure;

    const Grid& grid() const { return fields.front().grid(); }
    const Field& final_field() const { return fields.back(); }
};

/// One implicit-Euler step u^{j+1} = J_h(u^j).
Field step(const Field& u, double h, const ResolventEngine& engine);

/// Run the implicit-Euler evolution; on solver failure the partial path is
/// returned with the failure marker set.
SolutionPath evolve(const Field& u0, const EvolutionConfig& cfg);

/// (I + (t/n) A)^{-n} u0; same code path as evolve with h = t/n.
Field exponential_formula(const Field& u0, double t, int n, const EvolutionConfig& cfg);

/// Separable space-time test function phi(t,x) = chi(t) psi(x) with
/// chi(T_window) = 0 (compact support in time enforced by the window).
struct TestFunction {
    std::function<double(double)> chi;
    Field psi;
    std::string name;
};

/// Built-in catalog: smooth bump window times low trig modes.
std::vector<TestFunction> test_function_catalog(const Grid& grid, double T_end,
                                                int count = 5);

/// Absolute residual of the weak form (1.10-style) for the stored path:
/// int [u phi_t - (-Delta)^s phi beta(u) + b(u) u D.grad(phi)] dt dx
/// + int phi(0) u0 dx, with exact piecewise-constant time pairing for the
/// phi_t term and trapezoid-in-t node quadrature for the operator terms.
double distributional_residual(const SolutionPath& path, const TestFunction& phi,
                               const CoefficientSet& cs);

struct LinearizedConfig {
    double h = 1e-2;
    SolverControls solver;
    /// eps used to freeze the regularized coefficients (beta_eps, b_eps and
    /// the (eps I - Delta)^s symbol); 0 means the plain coefficients and
    /// |xi|^{2s}.
    double freeze_eps = 0.0;
    int snapshot_stride = 1;
};

/// Implicit Euler for the linearized equation
///   v_t + (-Delta)^s((beta(u)/u) v) + div(v D b(u)) = 0
/// with coefficients frozen from the stored path (beta(0)/0 := 0).
SolutionPath evolve_linearized(const SolutionPath& u_frozen, const Field& v0,
                               const CoefficientSet& cs, const LinearizedConfig& cfg);

}  // namespace fracfp
