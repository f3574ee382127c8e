#include "fracfp/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace fracfp::spectral {

namespace {

// FFTW plan cache keyed by (dim, n). Plans are created with FFTW_UNALIGNED so
// they can execute on any caller-provided buffer; creation is serialized
// (FFTW's planner is not thread safe), execution via fftw_execute_dft is.
struct PlanPair {
    fftw_plan to_freq = nullptr;    // e^{+i x.xi} accumulation (FFTW_BACKWARD)
    fftw_plan from_freq = nullptr;  // e^{-i x.xi} accumulation (FFTW_FORWARD)
};

PlanPair& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, PlanPair> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(g.dim(), g.n());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> probe(g.size());
    auto* buf = reinterpret_cast<fftw_complex*>(probe.data());
    int dims[3] = {g.n(), g.n(), g.n()};
    PlanPair p;
    p.to_freq = fftw_plan_dft(g.dim(), dims, buf, buf, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.from_freq = fftw_plan_dft(g.dim(), dims, buf, buf, FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(key, p).first->second;
}

// (-1)^{sum of modes} phase from shifting the box origin to -L.
double origin_phase(const Grid& g, std::size_t flat) {
    auto idx = g.unravel(flat);
    int s = 0;
    for (int ax = 0; ax < g.dim(); ++ax) s += g.mode(idx[ax]);
    return (s & 1) ? -1.0 : 1.0;
}

double forward_scale(const Grid& g) {
    return g.cell_volume() * std::pow(2.0 * M_PI, -0.5 * g.dim());
}

double inverse_scale(const Grid& g) {
    return g.dual_cell_volume() * std::pow(2.0 * M_PI, -0.5 * g.dim());
}

}  // namespace

Spectrum forward_transform(const Field& f) {
    const Grid& g = f.grid();
    Spectrum S(g);
    for (std::size_t i = 0; i < g.size(); ++i) S[i] = f[i];
    auto* buf = reinterpret_cast<fftw_complex*>(S.coeffs().data());
    fftw_execute_dft(plans_for(g).to_freq, buf, buf);
    const double scale = forward_scale(g);
    for (std::size_t i = 0; i < g.size(); ++i) S[i] *= scale * origin_phase(g, i);
    return S;
}

namespace {

Field inverse_impl(const Spectrum& S, bool check) {
    const Grid& g = S.grid();
    std::vector<std::complex<double>> work(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        work[i] = S[i] * origin_phase(g, i);
    auto* buf = reinterpret_cast<fftw_complex*>(work.data());
    fftw_execute_dft(plans_for(g).from_freq, buf, buf);
    const double scale = inverse_scale(g);
    double max_re = 0.0, max_im = 0.0;
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        work[i] *= scale;
        max_re = std::max(max_re, std::abs(work[i].real()));
        max_im = std::max(max_im, std::abs(work[i].imag()));
        f[i] = work[i].real();
    }
    if (check) {
        const double residue = max_im / std::max(max_re, 1e-300);
        if (max_im > 0.0 && residue > 1e-10) throw NonHermitianSpectrum(residue);
    }
    return f;
}

}  // namespace

Field inverse_transform(const Spectrum& S) { return inverse_impl(S, true); }
Field inverse_transform_unchecked(const Spectrum& S) { return inverse_impl(S, false); }

Spectrum apply_multiplier(const Spectrum& S, const std::function<double(double)>& m) {
    Spectrum out = S;
    const Grid& g = S.grid();
    for (std::size_t i = 0; i < g.size(); ++i) out[i] *= m(g.xi_norm2(i));
    return out;
}

Field apply_multiplier(const Field& f, const std::function<double(double)>& m) {
    return inverse_transform_unchecked(apply_multiplier(forward_transform(f), m));
}

Field apply_fractional_laplacian(const Field& f, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("s must be in (0, 1]");
    return apply_multiplier(f, [s](double xi2) {
        return xi2 == 0.0 ? 0.0 : std::pow(xi2, s);
    });
}

Field apply_bessel_power(const Field& f, double eps, double sigma) {
    if (eps < 0.0) throw DomainError("eps must be nonnegative");
    if (sigma == 0.0) return f;
    Spectrum S = forward_transform(f);
    if (eps == 0.0 && sigma < 0.0) {
        const double mass = std::abs(S[0].real()) + std::abs(S[0].imag());
        if (mass > 1e-12 * std::max(1.0, norm_l1(f)))
            throw SingularInverse("(eps I - Delta)^sigma with sigma<0, eps=0 needs zero mass");
        S[0] = 0.0;
    }
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi2 = g.xi_norm2(i);
        if (eps == 0.0 && xi2 == 0.0) continue;  // already zeroed above (sigma<0) or 0^sigma=0
        S[i] *= std::pow(eps + xi2, sigma);
    }
    if (eps == 0.0 && sigma > 0.0) S[0] = 0.0;
    return inverse_transform_unchecked(S);
}

Field bessel_resolvent_phi(const Field& f, double eps, double s) {
    if (!(eps > 0.0)) throw DomainError("Phi_eps requires eps > 0");
    return apply_multiplier(f, [eps, s](double xi2) {
        return 1.0 / (eps + std::pow(xi2, s));
    });
}

namespace {

// Multiplier -i xi_ax on the spectrum, Nyquist mode zeroed.
void differentiate_axis(Spectrum& S, int ax) {
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

}  // namespace

VectorField gradient(const Field& f) {
    const Grid& g = f.grid();
    VectorField out(g);
    Spectrum S = forward_transform(f);
    for (int ax = 0; ax < g.dim(); ++ax) {
        Spectrum Sx = S;
        differentiate_axis(Sx, ax);
        out.component(ax) = inverse_transform_unchecked(Sx).values();
    }
    return out;
}

Field divergence(const VectorField& V) {
    const Grid& g = V.grid();
    Spectrum acc(g);
    for (int ax = 0; ax < g.dim(); ++ax) {
        Spectrum Sx = forward_transform(Field(g, V.component(ax)));
        differentiate_axis(Sx, ax);
        for (std::size_t i = 0; i < g.size(); ++i) acc[i] += Sx[i];
    }
    return inverse_transform_unchecked(acc);
}

Field dealias_two_thirds(const Field& f) {
    const Grid& g = f.grid();
    Spectrum S = forward_transform(f);
    const int kmax = g.n() / 3;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        for (int ax = 0; ax < g.dim(); ++ax) {
            if (std::abs(g.mode(idx[ax])) >= kmax) {
                S[i] = 0.0;
                break;
            }
        }
    }
    return inverse_transform_unchecked(S);
}

double integral(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().cell_volume();
}

double norm_l1(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += std::abs(v);
    return s * f.grid().cell_volume();
}

double norm_l2(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return std::sqrt(s * f.grid().cell_volume());
}

double norm_linf(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

double hs_seminorm(const Field& f, double s) {
    Spectrum S = forward_transform(f);
    const Grid& g = f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi2 = g.xi_norm2(i);
        if (xi2 == 0.0) continue;
        acc += std::pow(xi2, s) * std::norm(S[i]);
    }
    return std::sqrt(acc * g.dual_cell_volume());
}

double h_minus_s_norm(const Field& f, double s) {
    Spectrum S = forward_transform(f);
    const Grid& g = f.grid();
    const double mass = std::abs(S[0]);
    if (mass > 1e-12 * std::max(1.0, norm_l1(f)))
        throw SingularInverse("Hdot^{-s} norm requires a zero-mass field");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi2 = g.xi_norm2(i);
        if (xi2 == 0.0) continue;
        acc += std::norm(S[i]) / std::pow(xi2, s);
    }
    return std::sqrt(acc * g.dual_cell_volume());
}

Norms norms(const Field& f, double s) {
    return {norm_l1(f), norm_l2(f), norm_linf(f), hs_seminorm(f, s)};
}

}  // namespace fracfp::spectral
