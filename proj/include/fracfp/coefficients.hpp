#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracfp/errors.hpp"

namespace fracfp {

using Vec3 = std::array<double, 3>;

/// Scalar coefficient (beta or b) with an explicit derivative.
struct ScalarFunctionSpec {
    std::function<double(double)> evaluate;
    std::function<double(double)> derivative;
    std::optional<double> lipschitz_bound;
    std::optional<double> sup_bound;
    std::string name;

    double operator()(double r) const { return evaluate(r); }
};

/// Probe the declared derivative against a central finite difference at
/// `points` locations in [r_lo, r_hi] (offset from 0). Returns the worst
/// relative mismatch.
double derivative_consistency(const ScalarFunctionSpec& f, double r_lo = -8.0,
                              double r_hi = 8.0, int points = 64);

/// Bounded drift field D: R^d -> R^d.
struct DriftSpec {
    int dim = 1;
    std::function<Vec3(const Vec3&)> evaluate;
    std::function<double(const Vec3&)> divergence;  // may be empty
    double sup_bound = 0.0;       // |D|_inf
    double div_minus_sup = 0.0;   // |(div D)^-|_inf
    std::string name;

    bool is_zero() const { return sup_bound == 0.0; }
};

DriftSpec zero_drift(int dim);

/// The coefficient triple of u_t + (-Delta)^s beta(u) + div(D b(u) u) = 0.
struct CoefficientSet {
    ScalarFunctionSpec beta;
    ScalarFunctionSpec b;
    DriftSpec D;
    double s = 0.75;
};

enum class HypothesisMode { existence, uniqueness };

struct HypothesisCheck {
    std::string name;
    bool pass;
    double witness;       // offending r (or |x| for drift checks)
    std::string detail;
};

struct HypothesisReport {
    HypothesisMode mode;
    std::vector<HypothesisCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const HypothesisCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct ProbeOptions {
    double r_lo = -8.0, r_hi = 8.0;
    int r_points = 257;
    double x_extent = 8.0;
    int x_points_per_axis = 9;
};

/// Numerically probe the paper's hypotheses on finite r/x grids. This is a
/// rejection test: failures carry witness points, passes are not proofs.
HypothesisReport validate(const CoefficientSet& cs, HypothesisMode mode,
                          const ProbeOptions& probes = {});

/// beta_eps(r) = beta(r) + eps r.
ScalarFunctionSpec regularize_beta(const ScalarFunctionSpec& beta, double eps);

struct RegularizedB {
    ScalarFunctionSpec b_eps;       // (b * phi_eps)(r) / (1 + eps |r|)
    ScalarFunctionSpec b_star_eps;  // b_eps(r) * r
};

/// Mollified and damped drift coefficient; table-backed for cheap evaluation,
/// valid on |r| <= range (linear extrapolation beyond).
RegularizedB regularize_b(const ScalarFunctionSpec& b, double eps,
                          double range = 32.0, int table_points = 4097);

/// Direct-quadrature evaluation of (b * phi_eps)(r) / (1 + eps |r|); the
/// oracle the table is checked against.
double mollified_b_value(const ScalarFunctionSpec& b, double eps, double r);

/// The fixed C^inf bump c exp(-1/(1-r^2)) on |r|<1, normalized to unit mass.
double mollifier_bump(double r);
/// 1-d Fourier transform int phi(r) cos(k r) dr of the bump (cached nodes).
double mollifier_bump_transform(double k);

/// D_eps = eta_eps D with a C^1 radial ramp from 1 at |x|=1/eps to 0 at
/// |x| = 1/eps + 2 (|grad eta| <= 1 by the 0.75 max slope of smoothstep).
DriftSpec cutoff_D(const DriftSpec& D, double eps);

/// beta_N / b_N: identity on [-N, N], affine with matching slope outside.
ScalarFunctionSpec truncate(const ScalarFunctionSpec& f, double N);

/// Admissible resolvent-step bound lambda_0 = 1/(M + sqrt(M) |b|_inf) with
/// M = |(div D)^- + |D||_inf; +infinity when M == 0.
double lambda0(const CoefficientSet& cs, const ProbeOptions& probes = {});

// --- built-in catalog -------------------------------------------------------

struct CatalogParams {
    std::vector<double> values;  // positional parameters
    double get(std::size_t i, double fallback) const {
        return i < values.size() ? values[i] : fallback;
    }
};

/// "linear" [slope], "porous_medium" [m], "zero"
ScalarFunctionSpec make_beta(const std::string& name, const CatalogParams& p = {});
/// "constant" [c], "logistic_b", "zero"
ScalarFunctionSpec make_b(const std::string& name, const CatalogParams& p = {});
/// "zero", "constant_D" [c1..cd], "rotational_D" [omega], "sine_D" [a, kappa]
DriftSpec make_drift(const std::string& name, int dim, const CatalogParams& p = {});

}  // namespace fracfp
