#include "fracfp/stable.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracfp/errors.hpp"
#include "fracfp/quadrature.hpp"

namespace fracfp::stable {

double kanter_a(double s, double u) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("stable order must be in (0,1)");
    if (!(u > 0.0 && u < M_PI)) throw DomainError("kanter_a needs u in (0, pi)");
    if (u < 1e-8) return std::pow(s, s / (1.0 - s)) * (1.0 - s);
    const double log_a = (s / (1.0 - s)) * std::log(std::sin(s * u)) +
                         std::log(std::sin((1.0 - s) * u)) -
                         (1.0 / (1.0 - s)) * std::log(std::sin(u));
    return std::exp(log_a);
}

namespace {

double eta_integral(double s, double r) {
    // eta(r) = s/((1-s) pi) r^{-1/(1-s)} int_0^pi A(u) exp(-A(u) c) du,
    // c = r^{-s/(1-s)}
    const double c = std::pow(r, -s / (1.0 - s));
    const double a_min = std::pow(s, s / (1.0 - s)) * (1.0 - s);
    if (a_min * c > 600.0) return 0.0;  // double-exponentially small left tail
    auto integrand = [s, c](double u) {
        const double a = kanter_a(s, u);
        const double e = a * c;
        return e > 700.0 ? 0.0 : a * std::exp(-e);
    };
    // scale-aware absolute tolerance; the peak can sit anywhere between the
    // left endpoint (small r) and the pi end (large r)
    double probe = 0.0;
    for (double u : {1e-4, 0.01, 0.05, 0.12, 0.3, 0.6, 0.9, 1.6, 2.3, 2.9, 3.1})
        probe = std::max(probe, integrand(u));
    quad::Options opt;
    opt.abs_tol = std::max(probe * M_PI * 1e-11, 1e-290);
    opt.max_evals = 400000;
    const double I = quad::integrate(integrand, 0.0, M_PI, opt).value;
    return s / ((1.0 - s) * M_PI) * std::pow(r, -1.0 / (1.0 - s)) * I;
}

double eta_series(double s, double r) {
    // convergent for 0 < s < 1:
    // eta(r) = (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(ks+1)/k! sin(pi k s) r^{-ks-1}
    double sum = 0.0;
    const double logr = std::log(r);
    int small_run = 0;
    for (int k = 1; k <= 500; ++k) {
        const double log_mag = std::lgamma(k * s + 1.0) - std::lgamma(k + 1.0) -
                               (k * s + 1.0) * logr;
        const double mag = std::exp(log_mag);  // sin-free bound on the term
        sum += ((k % 2 == 1) ? 1.0 : -1.0) * std::sin(M_PI * k * s) * mag;
        // the sin factor can vanish on exact lattice values of k s; require
        // consecutive small magnitude bounds before stopping
        if (k > 3 && mag < 1e-17 * std::max(std::abs(sum), 1e-300)) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
    }
    return sum / M_PI;
}

}  // namespace

double eta_density(double s, double r, EtaMethod method) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("stable order must be in (0,1)");
    if (!(r > 0.0)) throw DomainError("eta density needs r > 0");
    switch (method) {
        case EtaMethod::integral:
            return eta_integral(s, r);
        case EtaMethod::series:
            return eta_series(s, r);
        case EtaMethod::auto_select:
        default:
            return r < 3.0 ? eta_integral(s, r) : eta_series(s, r);
    }
}

double eta_tail_mass(double s, double R) {
    if (!(R >= 3.0)) throw DomainError("series tail mass needs R >= 3");
    double sum = 0.0;
    const double logR = std::log(R);
    int small_run = 0;
    for (int k = 1; k <= 500; ++k) {
        const double log_mag = std::lgamma(k * s + 1.0) - std::lgamma(k + 1.0) -
                               k * s * logR - std::log(k * s);
        const double mag = std::exp(log_mag);
        sum += ((k % 2 == 1) ? 1.0 : -1.0) * std::sin(M_PI * k * s) * mag;
        if (k > 3 && mag < 1e-17 * std::max(std::abs(sum), 1e-300)) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
    }
    return sum / M_PI;
}

StableDensityTable::StableDensityTable(double s, double r_lo, double r_hi, int nodes)
    : s_(s) {
    if (r_lo <= 0.0) {
        // leftmost radius the quadratures can meaningfully resolve
        const double a_min = std::pow(s, s / (1.0 - s)) * (1.0 - s);
        r_lo = std::pow(a_min / 400.0, (1.0 - s) / s);
    }
    std::vector<double> lx, ly;
    lx.reserve(nodes);
    ly.reserve(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (nodes - 1));
        const double v = eta_density(s, r);
        if (v <= 0.0) continue;
        lx.push_back(std::log(r));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 8) throw DomainError("stable density table collapsed");
    lo_ = std::exp(lx.front());
    hi_ = std::exp(lx.back());
    spline_ = CubicSpline(std::move(lx), std::move(ly));
}

double StableDensityTable::operator()(double r) const {
    if (!(r > 0.0)) throw DomainError("eta density needs r > 0");
    if (r < lo_ || r > hi_) return eta_density(s_, r);
    return std::exp(spline_(std::log(r)));
}

}  // namespace fracfp::stable
