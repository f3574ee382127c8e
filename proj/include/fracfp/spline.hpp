#pragma once

#include <cstddef>
#include <vector>

#include "fracfp/errors.hpp"

namespace fracfp {

/// Natural cubic spline on strictly increasing nodes; evaluation outside the
/// node range extrapolates linearly with the end slopes.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;
    double derivative(double t) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::size_t locate(double t) const;
    std::vector<double> x_, y_, m_;  // m_: second derivatives at nodes
};

}  // namespace fracfp
