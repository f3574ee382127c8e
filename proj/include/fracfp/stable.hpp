#pragma once

#include "fracfp/spline.hpp"

namespace fracfp::stable {

/// Kanter's auxiliary function on (0, pi):
///   A(u) = sin(s u)^{s/(1-s)} sin((1-s) u) / sin(u)^{1/(1-s)},
/// increasing from s^{s/(1-s)}(1-s) at 0+ to +infinity at pi-.
double kanter_a(double s, double u);

enum class EtaMethod { auto_select, integral, series };

/// Density at r of eta^s_1, the one-sided stable law with Laplace transform
/// e^{-lambda^s}. Two independent evaluation routes: the Zolotarev single
/// integral (small and moderate r) and the convergent inverse-power series
/// (large r); auto_select switches at r = 3.
double eta_density(double s, double r, EtaMethod method = EtaMethod::auto_select);

/// Upper tail mass P(eta > R) via the term-wise integrated series (R >= 3).
double eta_tail_mass(double s, double R);

/// Log-log spline of eta^s_1 over [r_lo, r_hi] for fast repeated evaluation
/// inside the kernel quadratures; falls back to direct evaluation outside.
class StableDensityTable {
public:
    explicit StableDensityTable(double s, double r_lo = 0.0, double r_hi = 120.0,
                                int nodes = 1200);
    double operator()(double r) const;
    double order() const { return s_; }

private:
    double s_;
    double lo_ = 0.0, hi_ = 0.0;
    CubicSpline spline_;  // log eta vs log r
};

}  // namespace fracfp::stable
