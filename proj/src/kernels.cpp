#include "fracfp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracfp/errors.hpp"
#include "fracfp/quadrature.hpp"

namespace fracfp::kernels {

void validate_query(const KernelQuery& q) {
    if (!(q.s > 0.0 && q.s < 1.0)) throw DomainError("kernel query needs s in (0,1)");
    if (!(q.eps > 0.0)) throw DomainError("kernel query needs eps > 0");
    if (q.d < 1 || q.d > 3) throw DomainError("kernel query needs d in {1,2,3}");
    if (!(q.r >= 0.0)) throw DomainError("kernel query needs r >= 0");
}

double heat_kernel(double r_time, double x_norm, int d) {
    if (!(r_time > 0.0)) throw DomainError("heat kernel needs positive time");
    const double expo = x_norm * x_norm / (4.0 * r_time);
    if (expo > 700.0) return 0.0;  // underflow guard against inf * 0
    return std::pow(4.0 * M_PI * r_time, -0.5 * d) * std::exp(-expo);
}

double fractional_heat_kernel(double s, double t, double x_norm, int d,
                              const stable::StableDensityTable* table) {
    if (!(t > 0.0)) throw DomainError("fractional heat kernel needs t > 0");
    if (d < 1 || d > 3) throw DomainError("d must be 1, 2 or 3");
    const double tscale = std::pow(t, 1.0 / s);
    auto eta = [&](double rho) {
        return table ? (*table)(rho) : stable::eta_density(s, rho);
    };
    auto integrand = [&](double rho) {
        return heat_kernel(tscale * rho, x_norm, d) * eta(rho);
    };
    // the heat factor peaks at heat time tau = |x|^2/(2d); make sure the
    // initial bracket straddles it before the adaptive widening takes over
    double lo = 0.05, hi = 50.0;
    if (x_norm > 0.0) {
        const double rho_peak = x_norm * x_norm / (2.0 * d) / tscale;
        lo = std::min(lo, std::max(rho_peak / 100.0, 1e-290));
        hi = std::max(hi, 100.0 * rho_peak);
    }
    quad::Options opt;
    opt.abs_tol = 1e-280;
    opt.rel_tol = 3e-10;
    opt.max_evals = 500000;
    return quad::integrate_log_axis(integrand, lo, hi, opt).value;
}

double resolvent_kernel_subordination(const KernelQuery& q,
                                      const stable::StableDensityTable* table) {
    validate_query(q);
    if (q.r == 0.0 && 2.0 * q.s <= q.d)
        throw DomainError("g^s_eps diverges at the origin when 2s <= d");
    std::unique_ptr<stable::StableDensityTable> local;
    if (!table) {
        local = std::make_unique<stable::StableDensityTable>(q.s);
        table = local.get();
    }
    auto outer = [&](double t) {
        return std::exp(-q.eps * t) * fractional_heat_kernel(q.s, t, q.r, q.d, table);
    };
    // support: e^{-eps t} cuts at ~40/eps; the small-t side decays linearly;
    // the heat-time peak adds an r-dependent scale
    const double t_peak = std::max(std::pow(std::max(q.r, 1e-3), 2.0 * q.s), 1e-3);
    quad::Options opt;
    opt.abs_tol = 1e-280;
    opt.rel_tol = 3e-9;
    opt.max_evals = 1000000;
    return quad::integrate_log_axis(outer, std::min(1e-3, t_peak / 100.0),
                                    std::max(40.0 / q.eps, 10.0 * t_peak), opt)
        .value;
}

namespace {

// Alternating-panel tail with iterated averaging (Euler transformation).
// osc_zero(m) gives the m-th positive zero of the oscillator in the rescaled
// variable z (xi = z / r).
double oscillatory_integral(const std::function<double(double)>& h, double r,
                            const std::function<double(int)>& osc_zero,
                            double abs_tol) {
    quad::Options head_opt;
    head_opt.abs_tol = abs_tol * 0.1;
    head_opt.max_evals = 400000;

    const int m_head = 4;
    const double xi_head = osc_zero(m_head) / r;
    double total = quad::integrate(h, 0.0, xi_head, head_opt).value;

    std::vector<double> partial;  // partial sums of the alternating panel series
    double sum = 0.0;
    double prev_avg = 0.0;
    for (int m = m_head; m < 4000; ++m) {
        const double a = osc_zero(m) / r;
        const double b = osc_zero(m + 1) / r;
        quad::Options panel_opt;
        panel_opt.abs_tol = abs_tol * 0.02;
        panel_opt.max_evals = 30000;
        sum += quad::integrate(h, a, b, panel_opt).value;
        partial.push_back(sum);
        if (partial.size() >= 6) {
            // repeated averaging of the last K partial sums
            std::vector<double> avg(partial.end() - std::min<std::size_t>(partial.size(), 30),
                                    partial.end());
            while (avg.size() > 1) {
                for (std::size_t i = 0; i + 1 < avg.size(); ++i)
                    avg[i] = 0.5 * (avg[i] + avg[i + 1]);
                avg.pop_back();
            }
            if (partial.size() >= 8 && std::abs(avg[0] - prev_avg) < abs_tol)
                return total + avg[0];
            prev_avg = avg[0];
        }
    }
    throw QuadratureFailure("oscillatory tail did not settle", total + prev_avg, 1.0);
}

}  // namespace

double resolvent_kernel_fourier(const KernelQuery& q) {
    validate_query(q);
    const double s = q.s, eps = q.eps, r = q.r;
    auto w = [s, eps](double xi) { return 1.0 / (eps + std::pow(xi, 2.0 * s)); };

    if (r == 0.0) {
        if (2.0 * s <= q.d)
            throw DomainError("g^s_eps diverges at the origin when 2s <= d");
        // d = 1, s > 1/2: plain algebraic integrand with analytic tail
        quad::Options opt;
        opt.abs_tol = 1e-11;
        opt.max_evals = 400000;
        const double Xi = 1e4;
        const double head = quad::integrate(w, 0.0, Xi, opt).value;
        const double tail = std::pow(Xi, 1.0 - 2.0 * s) / (2.0 * s - 1.0);
        return (head + tail) / M_PI;
    }

    const double abs_tol = 1e-10;
    if (q.d == 1) {
        auto h = [&](double xi) { return std::cos(r * xi) * w(xi); };
        auto zero = [](int m) { return (m + 0.5) * M_PI; };
        return oscillatory_integral(h, r, zero, abs_tol) / M_PI;
    }
    if (q.d == 2) {
        auto h = [&](double xi) { return std::cyl_bessel_j(0.0, r * xi) * xi * w(xi); };
        auto zero = [](int m) {
            const double beta = (m - 0.25) * M_PI;
            return beta + 1.0 / (8.0 * beta);  // McMahon expansion of j_{0,m}
        };
        return oscillatory_integral(h, r, zero, abs_tol) / (2.0 * M_PI);
    }
    auto h = [&](double xi) { return std::sin(r * xi) * xi * w(xi); };
    auto zero = [](int m) { return m * M_PI; };
    return oscillatory_integral(h, r, zero, abs_tol) / (2.0 * M_PI * M_PI * r);
}

KernelTable::KernelTable(double s, double eps, int d, double r_min, double r_max,
                         int nodes)
    : s_(s), eps_(eps), d_(d) {
    if (!(r_min > 0.0 && r_max > r_min)) throw DomainError("bad kernel table range");
    stable::StableDensityTable eta(s);
    std::vector<double> lx, ly;
    lx.reserve(nodes);
    ly.reserve(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double r =
            r_min * std::pow(r_max / r_min, static_cast<double>(i) / (nodes - 1));
        KernelQuery q{s, eps, d, r};
        const double v = resolvent_kernel_subordination(q, &eta);
        if (!(v > 0.0)) throw QuadratureFailure("kernel table value nonpositive", v, 0.0);
        lx.push_back(std::log(r));
        ly.push_back(std::log(v));
    }
    lo_ = std::exp(lx.front());
    hi_ = std::exp(lx.back());
    node_spacing_ = lx[1] - lx[0];
    // fitted power-law tail from the last two nodes
    const std::size_t n = lx.size();
    tail_power_ = (ly[n - 1] - ly[n - 2]) / (lx[n - 1] - lx[n - 2]);
    tail_coeff_ = std::exp(ly[n - 1] - tail_power_ * lx[n - 1]);
    head_value_ = std::exp(ly.front());
    spline_ = CubicSpline(std::move(lx), std::move(ly));
}

double KernelTable::operator()(double r) const {
    if (!(r >= 0.0)) throw DomainError("kernel radius must be nonnegative");
    if (r > hi_) return tail_coeff_ * std::pow(r, tail_power_);
    if (r < lo_) {
        if (2.0 * s_ > d_) return head_value_;  // bounded kernel head (d=1, s>1/2)
        const double p = -static_cast<double>(d_) + 2.0 * s_;
        return head_value_ * std::pow(r / lo_, p);
    }
    return std::exp(spline_(std::log(r)));
}

double KernelTable::mass() const {
    const double surface = d_ == 1 ? 2.0 : (d_ == 2 ? 2.0 * M_PI : 4.0 * M_PI);
    quad::Options opt;
    opt.abs_tol = 1e-10;
    opt.max_evals = 500000;
    // body: the tabulated subordination values, integrated exactly over [lo, hi]
    double m = quad::integrate(
                   [&](double v) {
                       const double r = std::exp(v);
                       return (*this)(r)*std::pow(r, static_cast<double>(d_));
                   },
                   std::log(lo_), std::log(hi_), opt)
                   .value;
    // head below the table resolution, from the local small-r model fitted
    // through the two lowest nodes
    const double r0 = lo_, r1 = lo_ * std::exp(node_spacing_);
    const double g0 = (*this)(r0), g1 = (*this)(r1);
    if (2.0 * s_ > d_) {
        // bounded head: g(r) = c0 - c1 r^{2s-d}
        const double p = 2.0 * s_ - d_;
        const double c1 = (g0 - g1) / (std::pow(r1, p) - std::pow(r0, p));
        const double c0 = g0 + c1 * std::pow(r0, p);
        m += c0 * std::pow(r0, static_cast<double>(d_)) / d_ -
             c1 * std::pow(r0, p + d_) / (p + d_);
    } else {
        // singular head: g(r) = A r^p with the fitted local exponent
        const double p = std::log(g1 / g0) / std::log(r1 / r0);
        if (p + d_ <= 0.0)
            throw QuadratureFailure("kernel head not integrable", m, 0.0);
        m += g0 * std::pow(r0, static_cast<double>(d_)) / (p + d_);
    }
    // fitted power-law tail (power < -d by the Levy-jump decay)
    if (tail_power_ + d_ < 0.0)
        m += tail_coeff_ * std::pow(hi_, tail_power_ + d_) / (-(tail_power_ + d_));
    return surface * m;
}

Field phi_epsilon_offgrid(const Field& f, double eps, double s) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const double L = g.half_width();
    const int images = 3;  // periodic image shells summed into the kernel
    const double r_max = 2.0 * L * (images + 1) * std::sqrt(static_cast<double>(d)) + 1.0;
    const double r_min = std::min(g.dx() / 8.0, 0.05);
    KernelTable table(s, eps, d, r_min, r_max);

    // periodized kernel on grid displacements
    const std::size_t n_pts = g.size();
    std::vector<double> kernel(n_pts, 0.0);
    const int n = g.n();
    for (std::size_t i = 0; i < n_pts; ++i) {
        const auto idx = g.unravel(i);
        double acc = 0.0;
        std::array<int, 3> img{0, 0, 0};
        const int span = 2 * images + 1;
        int total = 1;
        for (int ax = 0; ax < d; ++ax) total *= span;
        for (int m = 0; m < total; ++m) {
            int rem = m;
            double r2 = 0.0;
            for (int ax = 0; ax < d; ++ax) {
                img[ax] = rem % span - images;
                rem /= span;
                const double dx_ax = idx[ax] * g.dx() + img[ax] * 2.0 * L;
                const double wrapped = dx_ax > L * (2 * images + 1) ? 0.0 : dx_ax;
                (void)wrapped;
                r2 += dx_ax * dx_ax;
            }
            acc += table(std::sqrt(r2));
        }
        kernel[i] = acc;
    }

    // discrete convolution (direct sum; cross-check tool, not a hot path)
    Field out(g);
    const double dV = g.cell_volume();
    std::vector<int> strides(d, 1);
    for (int ax = d - 2; ax >= 0; --ax) strides[ax] = strides[ax + 1] * n;
    for (std::size_t i = 0; i < n_pts; ++i) {
        const auto xi = g.unravel(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n_pts; ++j) {
            const auto xj = g.unravel(j);
            std::size_t kidx = 0;
            for (int ax = 0; ax < d; ++ax) {
                int dd = xi[ax] - xj[ax];
                if (dd < 0) dd += n;
                kidx += static_cast<std::size_t>(dd) * strides[ax];
            }
            acc += kernel[kidx] * f[j];
        }
        out[i] = acc * dV;
    }

    // exact zero-mode correction from (A.4): the full-space kernel mass is 1/eps
    double covered = 0.0;
    for (std::size_t k = 0; k < n_pts; ++k) covered += kernel[k];
    covered *= dV;
    double mean_f = 0.0;
    for (std::size_t k = 0; k < n_pts; ++k) mean_f += f[k];
    mean_f /= static_cast<double>(n_pts);
    const double correction = (1.0 / eps - covered) * mean_f;
    for (std::size_t k = 0; k < n_pts; ++k) out[k] += correction;
    return out;
}

}  // namespace fracfp::kernels
