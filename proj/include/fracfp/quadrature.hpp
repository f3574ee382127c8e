#pragma once

#include <cstddef>
#include <functional>

namespace fracfp::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;  // 0 disables the relative criterion
    std::size_t max_evals = 1000000;  // per-integral budget
};

struct Result {
    double value;
    double error_estimate;
    std::size_t evals;
};

/// Globally adaptive Gauss-Kronrod 15(7) on a finite interval.
/// Throws QuadratureFailure when the budget runs out above tolerance.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

/// [a, inf) with the rational substitution t = a + u/(1-u).
Result integrate_to_infinity(const std::function<double(double)>& f, double a,
                             const Options& opt = {});

/// (0, inf) in log coordinates: int f(t) dt = int f(e^v) e^v dv over
/// [log(t_lo), log(t_hi)], with the bounds widened until the tails are
/// below tolerance (suitable for integrands with fast decay in log scale).
Result integrate_log_axis(const std::function<double(double)>& f, double t_lo,
                          double t_hi, const Options& opt = {});

}  // namespace fracfp::quad
