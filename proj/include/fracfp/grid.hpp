#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>

#include "fracfp/errors.hpp"

namespace fracfp {

/// Uniform periodic box [-L, L)^d sampled with n points per axis (row-major).
/// Dual lattice frequencies are xi_k = (pi/L) * k with integer k in [-n/2, n/2).
class Grid {
public:
    Grid(int dim, int points_per_axis, double half_width)
        : d_(dim), n_(points_per_axis), L_(half_width) {
        if (d_ < 1 || d_ > 3) throw DomainError("grid dim must be 1, 2 or 3");
        if (n_ < 8 || (n_ & (n_ - 1)) != 0)
            throw DomainError("points_per_axis must be a power of two >= 8");
        if (!(L_ > 0.0)) throw DomainError("half_width must be positive");
        size_ = 1;
        for (int i = 0; i < d_; ++i) size_ *= static_cast<std::size_t>(n_);
    }

    int dim() const { return d_; }
    int n() const { return n_; }
    double half_width() const { return L_; }
    double dx() const { return 2.0 * L_ / n_; }
    /// Frequency spacing of the dual lattice, pi/L.
    double dxi() const { return M_PI / L_; }
    std::size_t size() const { return size_; }
    /// Cell volume dx^d.
    double cell_volume() const {
        double v = 1.0;
        for (int i = 0; i < d_; ++i) v *= dx();
        return v;
    }
    /// Box volume (2L)^d.
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < d_; ++i) v *= 2.0 * L_;
        return v;
    }
    double dual_cell_volume() const {
        double v = 1.0;
        for (int i = 0; i < d_; ++i) v *= dxi();
        return v;
    }

    /// Signed integer mode number for 1-d index j, in [-n/2, n/2).
    int mode(int j) const { return j < n_ / 2 ? j : j - n_; }
    /// Coordinate of 1-d index j, in [-L, L).
    double coord(int j) const { return -L_ + j * dx(); }

    /// Decompose a flat row-major index into per-axis indices.
    std::array<int, 3> unravel(std::size_t flat) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int ax = d_ - 1; ax >= 0; --ax) {
            idx[ax] = static_cast<int>(flat % n_);
            flat /= n_;
        }
        return idx;
    }

    std::size_t ravel(const std::array<int, 3>& idx) const {
        std::size_t flat = 0;
        for (int ax = 0; ax < d_; ++ax)
            flat = flat * n_ + static_cast<std::size_t>(idx[ax]);
        return flat;
    }

    /// |xi|^2 of the mode at flat index.
    double xi_norm2(std::size_t flat) const {
        auto idx = unravel(flat);
        double s = 0.0;
        for (int ax = 0; ax < d_; ++ax) {
            double x = dxi() * mode(idx[ax]);
            s += x * x;
        }
        return s;
    }

    bool operator==(const Grid& o) const {
        return d_ == o.d_ && n_ == o.n_ && L_ == o.L_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int d_;
    int n_;
    double L_;
    std::size_t size_;
};

}  // namespace fracfp
