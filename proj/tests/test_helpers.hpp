#pragma once

#include <cmath>
#include <random>

#include "fracfp/field.hpp"
#include "fracfp/spectral.hpp"

namespace testutil {

using fracfp::Field;
using fracfp::Grid;

/// Rough random field, entries uniform in [lo, hi].
inline Field random_field(const Grid& g, unsigned seed, double lo = -1.0,
                          double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = dist(rng);
    return f;
}

/// Smooth band-limited random field: random amplitudes on modes |k| <= kmax
/// with 1/(1+k^2) decay. Real by construction.
inline Field random_smooth_field(const Grid& g, unsigned seed, int kmax = 6,
                                 double amplitude = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field f(g);
    const double k1 = g.dxi();
    for (int k = 1; k <= kmax; ++k) {
        for (int ax = 0; ax < g.dim(); ++ax) {
            const double a = dist(rng) / (1.0 + k * k);
            const double b = dist(rng) / (1.0 + k * k);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto idx = g.unravel(i);
                const double x = g.coord(idx[ax]);
                f[i] += amplitude * (a * std::cos(k * k1 * x) + b * std::sin(k * k1 * x));
            }
        }
    }
    return f;
}

/// Nonnegative smooth density with unit mass: shifted smooth field.
inline Field random_density(const Grid& g, unsigned seed, int kmax = 4) {
    Field f = random_smooth_field(g, seed, kmax, 0.4);
    double mn = f[0];
    for (double v : f.values()) mn = std::min(mn, v);
    for (auto& v : f.values()) v += 0.05 - mn;
    const double mass = fracfp::spectral::integral(f);
    for (auto& v : f.values()) v /= mass;
    return f;
}

inline Field cosine_mode(const Grid& g, int k, int axis = 0, double amplitude = 1.0) {
    Field f(g);
    const double kk = k * g.dxi();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        f[i] = amplitude * std::cos(kk * g.coord(idx[axis]));
    }
    return f;
}

inline double l1_distance(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * a.grid().cell_volume();
}

inline double linf_distance(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

}  // namespace testutil
