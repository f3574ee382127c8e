#include "fracfp/spline.hpp"

#include <algorithm>
#include <cmath>

namespace fracfp {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw DomainError("spline needs >= 3 matching nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("spline nodes must increase");

    // Tridiagonal system for natural boundary conditions (Thomas algorithm).
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (hl + hr);
        upper[i] = hr;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double w = hl / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::locate(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double CubicSpline::operator()(double t) const {
    if (t <= x_.front()) return y_.front() + derivative(x_.front()) * (t - x_.front());
    if (t >= x_.back()) return y_.back() + derivative(x_.back()) * (t - x_.back());
    const std::size_t i = locate(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
    std::size_t i;
    if (t <= x_.front())
        i = 0;
    else if (t >= x_.back())
        i = x_.size() - 2;
    else
        i = locate(t);
    const double h = x_[i + 1] - x_[i];
    double tt = std::clamp(t, x_[i], x_[i + 1]);
    const double a = (x_[i + 1] - tt) / h;
    const double b = (tt - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

}  // namespace fracfp
