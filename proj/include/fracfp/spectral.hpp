#pragma once

#include <functional>

#include "fracfp/field.hpp"

namespace fracfp::spectral {

/// Discrete counterpart of F(u)(xi) = (2pi)^{-d/2} int e^{i x.xi} u(x) dx,
/// scaled with dx^d (2pi)^{-d/2} so coefficients approximate the continuum
/// integral. inverse_transform(forward_transform(f)) == f to machine precision.
Spectrum forward_transform(const Field& f);

/// Inverse of forward_transform. Throws NonHermitianSpectrum when the
/// imaginary residue exceeds 1e-10 relative.
Field inverse_transform(const Spectrum& S);

/// Inverse without the Hermitian gate, for spectra that are conjugate
/// symmetric by construction (real multipliers applied to transforms of real
/// fields); the imaginary part is discarded.
Field inverse_transform_unchecked(const Spectrum& S);

/// Pointwise spectral multiplier m(|xi|^2); ignores the input's phase layout.
Field apply_multiplier(const Field& f, const std::function<double(double)>& m);
Spectrum apply_multiplier(const Spectrum& S, const std::function<double(double)>& m);

/// (-Delta)^s via the multiplier |xi|^{2s}; the zero mode is annihilated.
Field apply_fractional_laplacian(const Field& f, double s);

/// (eps I - Delta)^sigma via the multiplier (eps + |xi|^2)^sigma.
/// For sigma < 0 and eps == 0 the field must have zero mass (within 1e-12),
/// otherwise SingularInverse is thrown.
Field apply_bessel_power(const Field& f, double eps, double sigma);

/// Phi_eps(f) = (eps I + (-Delta)^s)^{-1} f, multiplier 1/(eps + |xi|^{2s}).
Field bessel_resolvent_phi(const Field& f, double eps, double s);

/// Spectral gradient (multiplier -i xi_j per our e^{+i x.xi} convention);
/// Nyquist modes are zeroed so the result of odd derivatives stays real.
VectorField gradient(const Field& f);
Field divergence(const VectorField& V);

/// Spectral 2/3-rule truncation: zero all modes with any |k| >= n/3.
Field dealias_two_thirds(const Field& f);

double integral(const Field& f);          // dx^d-weighted sum
double norm_l1(const Field& f);
double norm_l2(const Field& f);
double norm_linf(const Field& f);
/// Homogeneous Sobolev seminorm |f|_{Hdot^s} via Parseval.
double hs_seminorm(const Field& f, double s);
/// |f|_{Hdot^{-s}}; requires zero mass (throws SingularInverse otherwise).
double h_minus_s_norm(const Field& f, double s);

struct Norms {
    double l1, l2, linf, hs_semi;
};
Norms norms(const Field& f, double s);

}  // namespace fracfp::spectral
