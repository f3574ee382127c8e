#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fracfp/grid.hpp"

namespace fracfp {

/// Real scalar samples on a Grid, row-major over axes.
class Field {
public:
    explicit Field(const Grid& g, double fill = 0.0)
        : grid_(g), values_(g.size(), fill) {}
    Field(const Grid& g, std::vector<double> vals)
        : grid_(g), values_(std::move(vals)) {
        if (values_.size() != grid_.size())
            throw DomainError("field value count does not match grid");
    }

    const Grid& grid() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Complex Fourier coefficients, same layout as Field (mode at flat index k
/// has frequency (pi/L) * mode(k_ax) per axis).
class Spectrum {
public:
    explicit Spectrum(const Grid& g)
        : grid_(g), coeffs_(g.size(), {0.0, 0.0}) {}
    Spectrum(const Grid& g, std::vector<std::complex<double>> c)
        : grid_(g), coeffs_(std::move(c)) {
        if (coeffs_.size() != grid_.size())
            throw DomainError("spectrum size does not match grid");
    }

    const Grid& grid() const { return grid_; }
    std::vector<std::complex<double>>& coeffs() { return coeffs_; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }
    std::complex<double>& operator[](std::size_t i) { return coeffs_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }

private:
    Grid grid_;
    std::vector<std::complex<double>> coeffs_;
};

/// d real component fields on a common grid.
class VectorField {
public:
    explicit VectorField(const Grid& g)
        : grid_(g), comps_(g.dim(), std::vector<double>(g.size(), 0.0)) {}

    const Grid& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    std::vector<double>& component(int ax) { return comps_[ax]; }
    const std::vector<double>& component(int ax) const { return comps_[ax]; }

private:
    Grid grid_;
    std::vector<std::vector<double>> comps_;
};

}  // namespace fracfp
