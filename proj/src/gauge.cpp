#include "fracfp/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "fracfp/spectral.hpp"

namespace fracfp::gauge {

namespace {

std::size_t snapshot_index(const SolutionPath& p, double t) {
    for (std::size_t k = 0; k < p.times.size(); ++k)
        if (std::abs(p.times[k] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return k;
    throw DomainError("time not in the snapshot set");
}

void check_pair(const GaugePair& pair) {
    if (!pair.y1 || !pair.y2) throw DomainError("gauge pair needs two paths");
    if (pair.y1->grid() != pair.y2->grid())
        throw DomainError("gauge pair paths live on different grids");
    if (pair.y1->times.size() != pair.y2->times.size())
        throw DomainError("gauge pair snapshot sets differ");
    if (!(pair.gauge_eps > 0.0)) throw DomainError("gauge eps must be positive");
}

double path_sup(const SolutionPath& p) {
    double s = 0.0;
    for (double v : p.linf_trace) s = std::max(s, v);
    return s;
}

}  // namespace

Field mollify(const Field& z, double eps_m) {
    if (eps_m <= 0.0) return z;
    const Grid& g = z.grid();
    // separable bump transform, cached per axis frequency magnitude
    std::vector<double> axis_factor(g.n());
    for (int j = 0; j < g.n(); ++j)
        axis_factor[j] = mollifier_bump_transform(eps_m * g.dxi() * g.mode(j));
    Spectrum S = spectral::forward_transform(z);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        double m = 1.0;
        for (int ax = 0; ax < g.dim(); ++ax) m *= axis_factor[idx[ax]];
        S[i] *= m;
    }
    return spectral::inverse_transform_unchecked(S);
}

std::pair<Field, Field> compute_z_w(const GaugePair& pair, double t) {
    check_pair(pair);
    const std::size_t k = snapshot_index(*pair.y1, t);
    const Field& a = pair.y1->fields[k];
    const Field& b = pair.y2->fields[snapshot_index(*pair.y2, t)];
    const Grid& g = a.grid();
    const double N = std::max({path_sup(*pair.y1), path_sup(*pair.y2), 1e-12});
    ScalarFunctionSpec beta_N = truncate(pair.cs.beta, N * (1.0 + 1e-12));
    Field z(g), w(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        z[i] = a[i] - b[i];
        w[i] = beta_N.evaluate(a[i]) - beta_N.evaluate(b[i]);
    }
    return {std::move(z), std::move(w)};
}

std::pair<double, double> gauge_h_routes(const Field& z_mollified, double eps_g,
                                         double s) {
    const Grid& g = z_mollified.grid();
    // spectral form: int |F(z_eps)|^2 / (eps + |xi|^{2s})
    Spectrum S = spectral::forward_transform(z_mollified);
    double h_spectral = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = std::pow(g.xi_norm2(i), s);
        h_spectral += std::norm(S[i]) / (eps_g + a);
    }
    h_spectral *= g.dual_cell_volume();
    // inner-product form: (Phi_eps z, z)_2 in real space
    Field phi = spectral::bessel_resolvent_phi(z_mollified, eps_g, s);
    double h_inner = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) h_inner += phi[i] * z_mollified[i];
    h_inner *= g.cell_volume();
    return {h_inner, h_spectral};
}

double gauge_h(const GaugePair& pair, double t) {
    auto [z, w] = compute_z_w(pair, t);
    (void)w;
    Field z_eps = mollify(z, pair.mollifier_width);
    return gauge_h_routes(z_eps, pair.gauge_eps, pair.cs.s).second;
}

std::pair<double, double> gauge_decomposition(const GaugePair& pair, double t) {
    auto [z, w] = compute_z_w(pair, t);
    (void)w;
    Field z_eps = mollify(z, pair.mollifier_width);
    const Grid& g = z_eps.grid();
    Spectrum S = spectral::forward_transform(z_eps);
    double part_l2 = 0.0, part_hs = 0.0;
    const double eps = pair.gauge_eps;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = std::pow(g.xi_norm2(i), pair.cs.s);
        const double m = std::norm(S[i]) / ((eps + a) * (eps + a));
        part_l2 += eps * m;
        part_hs += a * m;
    }
    part_l2 *= g.dual_cell_volume();
    part_hs *= g.dual_cell_volume();
    return {part_l2, part_hs};
}

GaugeReport gronwall_audit(const GaugePair& pair) {
    check_pair(pair);
    GaugeReport rep;
    rep.same_tol = pair.same_tol;
    const auto& times = pair.y1->times;
    double eta_acc = 0.0;
    double prev_integrand = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        auto [z, w] = compute_z_w(pair, t);
        Field z_eps = mollify(z, pair.mollifier_width);
        Field w_eps = mollify(w, pair.mollifier_width);
        const double h = gauge_h_routes(z_eps, pair.gauge_eps, pair.cs.s).second;
        // eta proxy: 2 eps |(Phi_eps z_eps, w_eps)_2| accumulated in time
        Field phi = spectral::bessel_resolvent_phi(z_eps, pair.gauge_eps, pair.cs.s);
        double ip = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) ip += phi[i] * w_eps[i];
        ip = 2.0 * pair.gauge_eps * std::abs(ip) * z.grid().cell_volume();
        if (k > 0) eta_acc += 0.5 * (ip + prev_integrand) * (times[k] - times[k - 1]);
        prev_integrand = ip;
        rep.times.push_back(t);
        rep.h_trace.push_back(h);
        rep.eta_proxy.push_back(eta_acc);
    }
    // smallest C with h(t) <= eta + C int_0^t h ds, eta = h(0+) + slack
    const double slack = 1e-14 * std::max(1.0, rep.h_trace.front());
    const double eta0 = rep.h_trace.front() + slack;
    double C = 0.0;
    double integral = 0.0;
    for (std::size_t k = 1; k < rep.times.size(); ++k) {
        integral += 0.5 * (rep.h_trace[k] + rep.h_trace[k - 1]) *
                    (rep.times[k] - rep.times[k - 1]);
        if (integral > 0.0 && rep.h_trace[k] > eta0)
            C = std::max(C, (rep.h_trace[k] - eta0) / integral);
    }
    rep.fitted_C = C;
    // with h(0) ~ 0 the audited exponential bound reduces to h staying below
    // the tolerance for the whole horizon
    double h_max = 0.0;
    for (double h : rep.h_trace) h_max = std::max(h_max, h);
    rep.same = rep.h_trace.front() <= pair.same_tol &&
               h_max <= pair.same_tol + eta0 * std::exp(C * rep.times.back());
    return rep;
}

}  // namespace fracfp::gauge
