#pragma once

#include <memory>

#include "fracfp/field.hpp"
#include "fracfp/stable.hpp"

namespace fracfp::kernels {

struct KernelQuery {
    double s;
    double eps;
    int d;
    double r;  // |x|, kernels are radial
};

void validate_query(const KernelQuery& q);

/// Gaussian heat kernel p_r(x) = (4 pi r)^{-d/2} exp(-|x|^2 / 4r).
double heat_kernel(double r_time, double x_norm, int d);

/// Subordination quadrature for p^s_t(x) = int p_tau(x) eta^s_t(dtau), using
/// the t^{1/s} scaling of eta^s_1. A shared density table may be supplied to
/// amortize eta evaluations.
double fractional_heat_kernel(double s, double t, double x_norm, int d,
                              const stable::StableDensityTable* table = nullptr);

/// g^s_eps(x) by the nested subordination route (outer Laplace transform in t,
/// inner subordination in the heat time).
double resolvent_kernel_subordination(const KernelQuery& q,
                                      const stable::StableDensityTable* table = nullptr);

/// g^s_eps(x) by radial Fourier inversion of 1/(eps + |xi|^{2s}) with
/// oscillatory-tail acceleration; the independent cross-check route.
double resolvent_kernel_fourier(const KernelQuery& q);

/// Cached radial profile of g^s_eps built through the subordination route.
class KernelTable {
public:
    KernelTable(double s, double eps, int d, double r_min = 1e-3,
                double r_max = 800.0, int nodes = 144);
    double operator()(double r) const;  // power-law extrapolation outside
    /// int_{R^d} g dx via radial quadrature of the table plus the fitted
    /// power-law tail; equals 1/eps up to quadrature error.
    double mass() const;
    double s() const { return s_; }
    double eps() const { return eps_; }
    int dim() const { return d_; }

private:
    double s_, eps_;
    int d_;
    double lo_, hi_;
    double node_spacing_ = 0.0;  // log spacing of the radial nodes
    double head_value_;     // g at r_min (finite only when 2s > d)
    double tail_coeff_, tail_power_;
    CubicSpline spline_;    // log g vs log r
};

/// Convolution of a grid field with g^s_eps by direct kernel quadrature over
/// periodic images, with an exact zero-mode correction from (A.4). Used to
/// cross-check the spectral Phi_eps on the box interior.
Field phi_epsilon_offgrid(const Field& f, double eps, double s);

}  // namespace fracfp::kernels
