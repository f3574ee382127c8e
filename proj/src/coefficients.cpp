#include "fracfp/coefficients.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "fracfp/quadrature.hpp"
#include "fracfp/spline.hpp"

namespace fracfp {

namespace {

double bump_unnormalized(double r) {
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double bump_norm_constant() {
    static const double c = [] {
        auto res = quad::integrate([](double r) { return bump_unnormalized(r); },
                                   -1.0, 1.0, {1e-14, 100000});
        return 1.0 / res.value;
    }();
    return c;
}

}  // namespace

double mollifier_bump(double r) { return bump_norm_constant() * bump_unnormalized(r); }

double mollifier_bump_transform(double k) {
    k = std::abs(k);
    auto res = quad::integrate(
        [k](double r) { return mollifier_bump(r) * std::cos(k * r); }, -1.0, 1.0,
        {1e-12, 200000});
    return res.value;
}

double derivative_consistency(const ScalarFunctionSpec& f, double r_lo, double r_hi,
                              int points) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double r = r_lo + (r_hi - r_lo) * (i + 0.5) / points;
        const double h = 1e-5 * std::max(1.0, std::abs(r));
        const double fd = (f.evaluate(r + h) - f.evaluate(r - h)) / (2.0 * h);
        const double d = f.derivative(r);
        worst = std::max(worst, std::abs(fd - d) / std::max(1.0, std::abs(d)));
    }
    return worst;
}

DriftSpec zero_drift(int dim) {
    DriftSpec d;
    d.dim = dim;
    d.evaluate = [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
    d.divergence = [](const Vec3&) { return 0.0; };
    d.sup_bound = 0.0;
    d.div_minus_sup = 0.0;
    d.name = "zero";
    return d;
}

namespace {

double vec_norm(const Vec3& v, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += v[i] * v[i];
    return std::sqrt(s);
}

double drift_divergence_at(const DriftSpec& D, const Vec3& x) {
    if (D.divergence) return D.divergence(x);
    double div = 0.0;
    const double h = 1e-5;
    for (int ax = 0; ax < D.dim; ++ax) {
        Vec3 xp = x, xm = x;
        xp[ax] += h;
        xm[ax] -= h;
        div += (D.evaluate(xp)[ax] - D.evaluate(xm)[ax]) / (2.0 * h);
    }
    return div;
}

// iterate over a d-dimensional probe lattice in [-X, X]^d
template <typename F>
void for_each_probe_point(const DriftSpec& D, const ProbeOptions& p, F&& fn) {
    const int m = p.x_points_per_axis;
    int total = 1;
    for (int i = 0; i < D.dim; ++i) total *= m;
    for (int flat = 0; flat < total; ++flat) {
        Vec3 x{0.0, 0.0, 0.0};
        int rem = flat;
        for (int ax = 0; ax < D.dim; ++ax) {
            const int j = rem % m;
            rem /= m;
            x[ax] = -p.x_extent + 2.0 * p.x_extent * (j + 0.5) / m;
        }
        fn(x);
    }
}

}  // namespace

HypothesisReport validate(const CoefficientSet& cs, HypothesisMode mode,
                          const ProbeOptions& probes) {
    HypothesisReport rep;
    rep.mode = mode;
    auto add = [&rep](std::string name, bool pass, double witness, std::string detail) {
        rep.checks.push_back({std::move(name), pass, witness, std::move(detail)});
    };

    std::vector<double> rs(probes.r_points);
    for (int i = 0; i < probes.r_points; ++i)
        rs[i] = probes.r_lo + (probes.r_hi - probes.r_lo) * i / (probes.r_points - 1);

    // C^1 consistency of beta (both modes)
    {
        const double mismatch = derivative_consistency(cs.beta, probes.r_lo, probes.r_hi);
        add("beta_C1_consistency", mismatch <= 1e-6, mismatch,
            "central-difference check of beta'");
    }

    if (mode == HypothesisMode::existence) {
        // (i) beta Lipschitz and beta' > 0 away from 0
        {
            double lip = 0.0;
            bool finite = true;
            double witness = 0.0;
            for (double r : rs) {
                const double d = cs.beta.derivative(r);
                if (!std::isfinite(d)) {
                    finite = false;
                    witness = r;
                    break;
                }
                lip = std::max(lip, std::abs(d));
            }
            if (finite && cs.beta.lipschitz_bound)
                finite = lip <= *cs.beta.lipschitz_bound * (1.0 + 1e-9);
            add("i_beta_lipschitz", finite, witness,
                "probed Lipschitz constant " + std::to_string(lip));
        }
        {
            bool pass = true;
            double witness = 0.0;
            for (double r : rs) {
                if (r == 0.0) continue;
                if (!(cs.beta.derivative(r) > 0.0)) {
                    pass = false;
                    witness = r;
                    break;
                }
            }
            add("i_beta_strictly_increasing", pass, witness, "beta'(r) > 0 for r != 0");
        }
        // (ii) D bounded, div D locally square integrable
        {
            bool pass = true;
            double witness = 0.0;
            for_each_probe_point(cs.D, probes, [&](const Vec3& x) {
                const double nv = vec_norm(cs.D.evaluate(x), cs.D.dim);
                if (nv > cs.D.sup_bound * (1.0 + 1e-9) + 1e-12) {
                    pass = false;
                    witness = vec_norm(x, cs.D.dim);
                }
            });
            add("ii_D_bounded", pass, witness, "|D(x)| <= declared sup bound");
        }
        {
            bool pass = true;
            double witness = 0.0;
            for_each_probe_point(cs.D, probes, [&](const Vec3& x) {
                if (!std::isfinite(drift_divergence_at(cs.D, x))) {
                    pass = false;
                    witness = vec_norm(x, cs.D.dim);
                }
            });
            add("ii_divD_finite", pass, witness, "div D finite at probes");
        }
        // (iii) b continuous bounded
        {
            bool pass = true;
            double witness = 0.0, sup = 0.0;
            for (double r : rs) {
                const double v = cs.b.evaluate(r);
                if (!std::isfinite(v)) {
                    pass = false;
                    witness = r;
                    break;
                }
                sup = std::max(sup, std::abs(v));
            }
            if (pass && cs.b.sup_bound) pass = sup <= *cs.b.sup_bound * (1.0 + 1e-9);
            add("iii_b_bounded", pass, witness, "probed sup |b| = " + std::to_string(sup));
        }
        // (iv) (div D)^- bounded, b >= 0
        {
            bool pass = true;
            double witness = 0.0;
            for_each_probe_point(cs.D, probes, [&](const Vec3& x) {
                const double neg = std::max(0.0, -drift_divergence_at(cs.D, x));
                if (neg > cs.D.div_minus_sup * (1.0 + 1e-6) + 1e-9) {
                    pass = false;
                    witness = vec_norm(x, cs.D.dim);
                }
            });
            add("iv_div_minus_bounded", pass, witness, "(div D)^- <= declared bound");
        }
        {
            bool pass = true;
            double witness = 0.0;
            for (double r : rs) {
                if (cs.b.evaluate(r) < -1e-12) {
                    pass = false;
                    witness = r;
                    break;
                }
            }
            add("iv_b_nonnegative", pass, witness, "b >= 0 on probe grid");
        }
        // s-range admissibility: (1/2, 1) with drift, (0, 1) if D == 0
        {
            const bool pass = cs.D.is_zero() ? (cs.s > 0.0 && cs.s < 1.0)
                                             : (cs.s > 0.5 && cs.s < 1.0);
            add("s_range", pass, cs.s,
                cs.D.is_zero() ? "s in (0,1), D == 0" : "s in (1/2,1) with drift");
        }
    } else {
        // (j): beta' > 0 everywhere, beta(0) = 0
        {
            const double at0 = cs.beta.evaluate(0.0);
            add("j_beta_zero_at_zero", std::abs(at0) <= 1e-12, 0.0,
                "beta(0) = " + std::to_string(at0));
        }
        {
            bool pass = true;
            double witness = 0.0;
            for (double r : rs) {
                if (!(cs.beta.derivative(r) > 0.0)) {
                    pass = false;
                    witness = r;
                    break;
                }
            }
            if (pass && !(cs.beta.derivative(0.0) > 0.0)) {
                pass = false;
                witness = 0.0;
            }
            add("j_beta_prime_positive", pass, witness, "beta'(r) > 0 for all r");
        }
        // (j)': beta' >= 0 (sufficient when D == 0)
        {
            bool pass = true;
            double witness = 0.0;
            for (double r : rs) {
                if (cs.beta.derivative(r) < -1e-12) {
                    pass = false;
                    witness = r;
                    break;
                }
            }
            add("jprime_beta_prime_nonneg", pass, witness, "beta'(r) >= 0 for all r");
        }
        // (jj): D bounded
        {
            bool pass = true;
            double witness = 0.0;
            for_each_probe_point(cs.D, probes, [&](const Vec3& x) {
                const double nv = vec_norm(cs.D.evaluate(x), cs.D.dim);
                if (!std::isfinite(nv) || nv > cs.D.sup_bound * (1.0 + 1e-9) + 1e-12) {
                    pass = false;
                    witness = vec_norm(x, cs.D.dim);
                }
            });
            add("jj_D_bounded", pass, witness, "|D(x)| <= declared sup bound");
        }
        // (jjj): b in C^1
        {
            const double mismatch = derivative_consistency(cs.b, probes.r_lo, probes.r_hi);
            add("jjj_b_C1", mismatch <= 1e-6, mismatch, "central-difference check of b'");
        }
        {
            const bool pass = cs.s > 0.5 && cs.s < 1.0;
            add("s_range", pass, cs.s, "uniqueness theory needs s in (1/2,1)");
        }
    }
    return rep;
}

ScalarFunctionSpec regularize_beta(const ScalarFunctionSpec& beta, double eps) {
    if (!(eps > 0.0)) throw DomainError("regularize_beta needs eps > 0");
    ScalarFunctionSpec out;
    auto base_eval = beta.evaluate;
    auto base_deriv = beta.derivative;
    out.evaluate = [base_eval, eps](double r) { return base_eval(r) + eps * r; };
    out.derivative = [base_deriv, eps](double r) { return base_deriv(r) + eps; };
    if (beta.lipschitz_bound) out.lipschitz_bound = *beta.lipschitz_bound + eps;
    out.name = beta.name + "_eps";
    return out;
}

double mollified_b_value(const ScalarFunctionSpec& b, double eps, double r) {
    auto eval = b.evaluate;
    auto res = quad::integrate(
        [&eval, eps, r](double t) { return eval(r - eps * t) * mollifier_bump(t); },
        -1.0, 1.0, {1e-10, 200000});
    return res.value / (1.0 + eps * std::abs(r));
}

RegularizedB regularize_b(const ScalarFunctionSpec& b, double eps, double range,
                          int table_points) {
    if (!(eps > 0.0)) throw DomainError("regularize_b needs eps > 0");
    std::vector<double> xs(table_points), ys(table_points);
    for (int i = 0; i < table_points; ++i) {
        xs[i] = -range + 2.0 * range * i / (table_points - 1);
        ys[i] = mollified_b_value(b, eps, xs[i]);
    }
    auto table = std::make_shared<CubicSpline>(std::move(xs), std::move(ys));

    RegularizedB out;
    out.b_eps.evaluate = [table](double r) { return (*table)(r); };
    out.b_eps.derivative = [table](double r) { return table->derivative(r); };
    out.b_eps.sup_bound = b.sup_bound;
    out.b_eps.name = b.name + "_eps";

    out.b_star_eps.evaluate = [table](double r) { return (*table)(r)*r; };
    out.b_star_eps.derivative = [table](double r) {
        return table->derivative(r) * r + (*table)(r);
    };
    // probed global Lipschitz bound of b*_eps
    double lip = 0.0;
    for (int i = 0; i < 1024; ++i) {
        const double r = -range + 2.0 * range * (i + 0.5) / 1024;
        lip = std::max(lip, std::abs(out.b_star_eps.derivative(r)));
    }
    out.b_star_eps.lipschitz_bound = lip;
    out.b_star_eps.name = b.name + "_star_eps";
    return out;
}

DriftSpec cutoff_D(const DriftSpec& D, double eps) {
    if (!(eps > 0.0)) throw DomainError("cutoff_D needs eps > 0");
    const double r0 = 1.0 / eps;
    const double width = 2.0;
    auto ramp = [r0, width](double rho) {
        if (rho <= r0) return 1.0;
        if (rho >= r0 + width) return 0.0;
        const double t = (rho - r0) / width;
        return 1.0 - t * t * (3.0 - 2.0 * t);  // smoothstep, max slope 1.5/width
    };
    auto ramp_slope = [r0, width](double rho) {
        if (rho <= r0 || rho >= r0 + width) return 0.0;
        const double t = (rho - r0) / width;
        return -6.0 * t * (1.0 - t) / width;
    };

    DriftSpec out;
    out.dim = D.dim;
    const int dim = D.dim;
    auto base_eval = D.evaluate;
    out.evaluate = [base_eval, ramp, dim](const Vec3& x) {
        const double rho = vec_norm(x, dim);
        Vec3 v = base_eval(x);
        const double eta = ramp(rho);
        for (int i = 0; i < dim; ++i) v[i] *= eta;
        return v;
    };
    auto base_div = D.divergence;
    out.divergence = [base_eval, base_div, ramp, ramp_slope, dim](const Vec3& x) {
        const double rho = vec_norm(x, dim);
        const double eta = ramp(rho);
        double div = 0.0;
        if (base_div) {
            div = eta * base_div(x);
        } else if (eta != 0.0) {
            DriftSpec tmp;  // finite-difference fallback on the base field
            tmp.dim = dim;
            tmp.evaluate = base_eval;
            div = eta * drift_divergence_at(tmp, x);
        }
        const double slope = ramp_slope(rho);
        if (slope != 0.0 && rho > 0.0) {
            const Vec3 v = base_eval(x);
            double dot = 0.0;
            for (int i = 0; i < dim; ++i) dot += v[i] * x[i] / rho;
            div += slope * dot;
        }
        return div;
    };
    out.sup_bound = D.sup_bound;
    out.div_minus_sup = D.div_minus_sup + D.sup_bound;  // |grad eta| <= 1
    out.name = D.name + "_cutoff";
    return out;
}

ScalarFunctionSpec truncate(const ScalarFunctionSpec& f, double N) {
    if (!(N > 0.0)) throw DomainError("truncate needs N > 0");
    auto eval = f.evaluate;
    auto deriv = f.derivative;
    const double fN = eval(N), fmN = eval(-N);
    const double dN = deriv(N), dmN = deriv(-N);
    ScalarFunctionSpec out;
    out.evaluate = [eval, N, fN, fmN, dN, dmN](double r) {
        if (r > N) return dN * (r - N) + fN;
        if (r < -N) return dmN * (r + N) + fmN;
        return eval(r);
    };
    out.derivative = [deriv, N, dN, dmN](double r) {
        if (r > N) return dN;
        if (r < -N) return dmN;
        return deriv(r);
    };
    // inside slope bound becomes a global Lipschitz constant
    double lip = std::max(std::abs(dN), std::abs(dmN));
    for (int i = 0; i < 512; ++i) {
        const double r = -N + 2.0 * N * (i + 0.5) / 512;
        lip = std::max(lip, std::abs(deriv(r)));
    }
    out.lipschitz_bound = lip;
    out.name = f.name + "_N";
    return out;
}

double lambda0(const CoefficientSet& cs, const ProbeOptions& probes) {
    double M = 0.0;
    if (cs.D.is_zero()) {
        M = 0.0;
    } else if (cs.D.divergence) {
        for_each_probe_point(cs.D, probes, [&](const Vec3& x) {
            const double neg = std::max(0.0, -cs.D.divergence(x));
            M = std::max(M, neg + vec_norm(cs.D.evaluate(x), cs.D.dim));
        });
    } else {
        M = cs.D.div_minus_sup + cs.D.sup_bound;
    }
    if (M == 0.0) return std::numeric_limits<double>::infinity();
    double b_sup = 0.0;
    if (cs.b.sup_bound) {
        b_sup = *cs.b.sup_bound;
    } else {
        for (int i = 0; i < probes.r_points; ++i) {
            const double r =
                probes.r_lo + (probes.r_hi - probes.r_lo) * i / (probes.r_points - 1);
            b_sup = std::max(b_sup, std::abs(cs.b.evaluate(r)));
        }
    }
    return 1.0 / (M + std::sqrt(M) * b_sup);
}

ScalarFunctionSpec make_beta(const std::string& name, const CatalogParams& p) {
    ScalarFunctionSpec f;
    f.name = name;
    if (name == "linear") {
        const double a = p.get(0, 1.0);
        f.evaluate = [a](double r) { return a * r; };
        f.derivative = [a](double) { return a; };
        f.lipschitz_bound = std::abs(a);
    } else if (name == "porous_medium") {
        const double m = p.get(0, 2.0);
        if (m < 1.0) throw DomainError("porous_medium exponent must be >= 1");
        f.evaluate = [m](double r) { return std::pow(std::abs(r), m - 1.0) * r; };
        f.derivative = [m](double r) { return m * std::pow(std::abs(r), m - 1.0); };
    } else if (name == "zero") {
        f.evaluate = [](double) { return 0.0; };
        f.derivative = [](double) { return 0.0; };
        f.lipschitz_bound = 0.0;
        f.sup_bound = 0.0;
    } else {
        throw ConfigError("unknown beta catalog entry: " + name);
    }
    return f;
}

ScalarFunctionSpec make_b(const std::string& name, const CatalogParams& p) {
    ScalarFunctionSpec f;
    f.name = name;
    if (name == "constant") {
        const double c = p.get(0, 1.0);
        f.evaluate = [c](double) { return c; };
        f.derivative = [](double) { return 0.0; };
        f.sup_bound = std::abs(c);
        f.lipschitz_bound = 0.0;
    } else if (name == "logistic_b") {
        f.evaluate = [](double r) { return 1.0 / (1.0 + r * r); };
        f.derivative = [](double r) {
            const double d = 1.0 + r * r;
            return -2.0 * r / (d * d);
        };
        f.sup_bound = 1.0;
    } else if (name == "zero") {
        f.evaluate = [](double) { return 0.0; };
        f.derivative = [](double) { return 0.0; };
        f.sup_bound = 0.0;
        f.lipschitz_bound = 0.0;
    } else {
        throw ConfigError("unknown b catalog entry: " + name);
    }
    return f;
}

DriftSpec make_drift(const std::string& name, int dim, const CatalogParams& p) {
    if (name == "zero") return zero_drift(dim);
    DriftSpec d;
    d.dim = dim;
    d.name = name;
    if (name == "constant_D") {
        Vec3 c{p.get(0, 0.0), p.get(1, 0.0), p.get(2, 0.0)};
        d.evaluate = [c](const Vec3&) { return c; };
        d.divergence = [](const Vec3&) { return 0.0; };
        d.sup_bound = vec_norm(c, dim);
        d.div_minus_sup = 0.0;
    } else if (name == "rotational_D") {
        if (dim < 2) throw ConfigError("rotational_D needs dim >= 2");
        const double omega = p.get(0, 1.0);
        d.evaluate = [omega](const Vec3& x) {
            return Vec3{-omega * x[1], omega * x[0], 0.0};
        };
        d.divergence = [](const Vec3&) { return 0.0; };
        d.sup_bound = std::numeric_limits<double>::infinity();  // linear growth
        d.div_minus_sup = 0.0;
    } else if (name == "sine_D") {
        const double a = p.get(0, 0.25);
        const double kappa = p.get(1, 1.0);
        const int dd = dim;
        d.evaluate = [a, kappa, dd](const Vec3& x) {
            Vec3 v{0.0, 0.0, 0.0};
            for (int i = 0; i < dd; ++i) v[i] = a * std::sin(kappa * x[i]);
            return v;
        };
        d.divergence = [a, kappa, dd](const Vec3& x) {
            double s = 0.0;
            for (int i = 0; i < dd; ++i) s += a * kappa * std::cos(kappa * x[i]);
            return s;
        };
        d.sup_bound = std::abs(a) * std::sqrt(static_cast<double>(dim));
        d.div_minus_sup = std::abs(a * kappa) * dim;
    } else {
        throw ConfigError("unknown drift catalog entry: " + name);
    }
    return d;
}

}  // namespace fracfp
