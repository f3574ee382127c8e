#pragma once

#include <utility>
#include <vector>

#include "fracfp/evolution.hpp"

namespace fracfp::gauge {

/// Two candidate solutions on a common grid and snapshot set.
struct GaugePair {
    const SolutionPath* y1 = nullptr;
    const SolutionPath* y2 = nullptr;
    double mollifier_width = 0.0;  // eps_m; 0 disables mollification
    double gauge_eps = 1e-2;       // eps_g in Phi_eps
    CoefficientSet cs;
    double same_tol = 1e-8;        // verdict threshold on sup_t h
};

struct GaugeReport {
    std::vector<double> times;
    std::vector<double> h_trace;
    std::vector<double> eta_proxy;  // 2 eps int_0^t |(Phi_eps z_eps, w_eps)| ds
    double fitted_C = 0.0;          // smallest C with h(t) <= eta + C int h
    bool same = false;
    double same_tol = 0.0;
};

/// Spectral mollification: multiplication by the transform of the fixed bump
/// at width eps_m (the torus equivalent of convolution with theta_{eps_m}).
Field mollify(const Field& z, double eps_m);

/// z = y1 - y2 and w = beta_N(y1) - beta_N(y2) at a snapshot time, with
/// beta truncated at N >= max(|y1|_inf, |y2|_inf).
std::pair<Field, Field> compute_z_w(const GaugePair& pair, double t);

/// h = (Phi_eps z_eps, z_eps)_2, evaluated spectrally; the real-space inner
/// product route is exposed separately for the two-route identity test.
double gauge_h(const GaugePair& pair, double t);
std::pair<double, double> gauge_h_routes(const Field& z_mollified, double eps_g,
                                         double s);

/// (eps |Phi_eps z|_2^2, |(-Delta)^{s/2} Phi_eps z|_2^2); the parts sum to h.
std::pair<double, double> gauge_decomposition(const GaugePair& pair, double t);

/// h over all snapshots, the fitted Gronwall constant, and the SAME/DIFFERENT
/// verdict. Diagnostic consistent with the uniqueness theorem, not a proof.
GaugeReport gronwall_audit(const GaugePair& pair);

}  // namespace fracfp::gauge
