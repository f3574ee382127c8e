#include "fracfp/sde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <atomic>
#include <thread>

#include "fracfp/spectral.hpp"
#include "fracfp/stable.hpp"

namespace fracfp::sde {

namespace {

constexpr std::uint64_t kInitStream = 0xFFFFFFFFull;

int worker_count() {
    if (const char* env = std::getenv("FRACFP_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

template <typename Fn>
void parallel_over(std::size_t count, Fn&& fn) {
    const int workers = worker_count();
    if (workers <= 1 || count < 1024) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

double wrap_coord(double x, double L) {
    return x - 2.0 * L * std::floor((x + L) / (2.0 * L));
}

}  // namespace

bool ParticleEnsemble::all_finite() const {
    for (double p : positions)
        if (!std::isfinite(p)) return false;
    return true;
}

double sample_subordinator(double s, double dt, CounterRng& rng) {
    if (!(s > 0.0 && s < 1.0) || !(dt > 0.0))
        throw DomainError("subordinator needs s in (0,1), dt > 0");
    const double u = rng.uniform() * M_PI;
    const double e = -std::log(rng.uniform());
    const double a = stable::kanter_a(s, u);
    return std::pow(a / e, (1.0 - s) / s) * std::pow(dt, 1.0 / s);
}

Vec3 sample_isotropic_stable(double s, double dt, int d, CounterRng& rng) {
    const double S = sample_subordinator(s, dt, rng);
    const double scale = std::sqrt(2.0 * S);
    Vec3 out{0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) out[ax] = scale * rng.normal();
    return out;
}

double interpolate(const Field& f, const Vec3& x) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int n = g.n();
    const double L = g.half_width();
    const double dx = g.dx();
    std::array<int, 3> i0{0, 0, 0};
    std::array<double, 3> frac{0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) {
        const double rel = (wrap_coord(x[ax], L) + L) / dx;
        const int cell = static_cast<int>(std::floor(rel));
        i0[ax] = ((cell % n) + n) % n;
        frac[ax] = rel - cell;
    }
    double acc = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::array<int, 3> idx{0, 0, 0};
        for (int ax = 0; ax < d; ++ax) {
            const int off = (c >> ax) & 1;
            idx[ax] = (i0[ax] + off) % n;
            w *= off ? frac[ax] : (1.0 - frac[ax]);
        }
        acc += w * f[g.ravel(idx)];
    }
    return acc;
}

ParticleEnsemble sample_initial(const Field& u0_density, const LevyConfig& cfg) {
    const Grid& g = u0_density.grid();
    const int d = g.dim();
    ParticleEnsemble ens{g, std::vector<double>(cfg.N * d, 0.0), 0.0, cfg.seed, 0};

    if (d == 1) {
        // inverse CDF over cells in natural order, linear within a cell
        const std::size_t n = g.size();
        std::vector<double> cum(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            cum[i + 1] = cum[i] + std::max(u0_density[i], 0.0);
        const double total = cum[n];
        if (!(total > 0.0)) throw DomainError("initial density has no mass");
        parallel_over(cfg.N, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                CounterRng rng(cfg.seed, p, kInitStream);
                const double u = rng.uniform() * total;
                const auto it = std::upper_bound(cum.begin(), cum.end(), u);
                std::size_t cell = std::max<std::ptrdiff_t>(it - cum.begin() - 1, 0);
                if (cell >= n) cell = n - 1;
                const double within = (u - cum[cell]) /
                                      std::max(cum[cell + 1] - cum[cell], 1e-300);
                ens.positions[p] = -g.half_width() + (cell + within) * g.dx();
            }
        });
        return ens;
    }

    double u_max = 0.0;
    for (double v : u0_density.values()) u_max = std::max(u_max, v);
    if (!(u_max > 0.0)) throw DomainError("initial density has no mass");
    parallel_over(cfg.N, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            CounterRng rng(cfg.seed, p, kInitStream);
            Vec3 x{0.0, 0.0, 0.0};
            for (int attempt = 0; attempt < 100000; ++attempt) {
                for (int ax = 0; ax < d; ++ax)
                    x[ax] = (2.0 * rng.uniform() - 1.0) * g.half_width();
                const double val = std::max(interpolate(u0_density, x), 0.0);
                if (rng.uniform() * u_max <= val) break;
            }
            for (int ax = 0; ax < d; ++ax) ens.positions[p * d + ax] = x[ax];
        }
    });
    return ens;
}

void euler_step(ParticleEnsemble& ens, const Field& u, double dt,
                const CoefficientSet& cs, const LevyConfig& cfg) {
    const Grid& g = ens.grid;
    const int d = g.dim();
    const double L = g.half_width();
    const double s = cfg.s;
    const bool drifted = !cs.D.is_zero();
    const std::uint64_t step = ens.step_index;

    std::atomic<bool> nonfinite{false};
    parallel_over(ens.count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            if (nonfinite.load(std::memory_order_relaxed)) return;
            CounterRng rng(cfg.seed, p, step);
            Vec3 x{0.0, 0.0, 0.0};
            for (int ax = 0; ax < d; ++ax) x[ax] = ens.positions[p * d + ax];

            const double u_here = std::max(interpolate(u, x), 0.0);
            const double ratio =
                u_here == 0.0 ? 0.0 : std::max(cs.beta.evaluate(u_here) / u_here, 0.0);
            const double jump_coef = ratio == 0.0 ? 0.0 : std::pow(ratio, 0.5 / s);

            // the stable increment is always drawn so the stream layout does
            // not depend on the local state
            const Vec3 dL = sample_isotropic_stable(s, dt, d, rng);

            Vec3 move{0.0, 0.0, 0.0};
            if (drifted) {
                const double bu = cs.b.evaluate(u_here);
                const Vec3 Dv = cs.D.evaluate(x);
                for (int ax = 0; ax < d; ++ax) move[ax] += Dv[ax] * bu * dt;
            }
            double jump2 = 0.0;
            for (int ax = 0; ax < d; ++ax) jump2 += dL[ax] * dL[ax];
            double jump_scale = jump_coef;
            if (cfg.big_jump_cap) {
                const double jn = jump_coef * std::sqrt(jump2);
                if (jn > *cfg.big_jump_cap) jump_scale *= *cfg.big_jump_cap / jn;
            }
            for (int ax = 0; ax < d; ++ax) move[ax] += jump_scale * dL[ax];

            for (int ax = 0; ax < d; ++ax) {
                const double nx = wrap_coord(x[ax] + move[ax], L);
                if (!std::isfinite(nx)) {
                    nonfinite.store(true, std::memory_order_relaxed);
                    return;
                }
                ens.positions[p * d + ax] = nx;
            }
        }
    });
    if (nonfinite.load())
        throw NonfiniteState("particle position became non-finite");
    ens.time += dt;
    ens.step_index += 1;
}

DensityEstimate estimate_density(const ParticleEnsemble& ens, const Grid& grid,
                                 double bandwidth) {
    const int d = grid.dim();
    const std::size_t N = ens.count();
    if (N == 0) throw DomainError("empty ensemble");

    if (bandwidth <= 0.0) {
        double sigma2_mean = 0.0;
        for (int ax = 0; ax < d; ++ax) {
            double m = 0.0, m2 = 0.0;
            for (std::size_t p = 0; p < N; ++p) {
                const double v = ens.positions[p * d + ax];
                m += v;
                m2 += v * v;
            }
            m /= N;
            sigma2_mean += std::max(m2 / N - m * m, 0.0);
        }
        sigma2_mean /= d;
        bandwidth = 1.06 * std::sqrt(sigma2_mean) *
                    std::pow(static_cast<double>(N), -1.0 / (d + 4));
        bandwidth = std::clamp(bandwidth, grid.dx(), grid.half_width() / 4.0);
    }

    // nearest-cell binning, then heat smoothing at time bw^2/2
    Field hist(grid);
    const double L = grid.half_width();
    const double dx = grid.dx();
    const int n = grid.n();
    for (std::size_t p = 0; p < N; ++p) {
        std::array<int, 3> idx{0, 0, 0};
        for (int ax = 0; ax < d; ++ax) {
            const double rel = (wrap_coord(ens.positions[p * d + ax], L) + L) / dx;
            int cell = static_cast<int>(std::lround(rel)) % n;
            if (cell < 0) cell += n;
            idx[ax] = cell;
        }
        hist[grid.ravel(idx)] += 1.0;
    }
    const double bw2 = 0.5 * bandwidth * bandwidth;
    Field smooth = spectral::apply_multiplier(
        hist, [bw2](double xi2) { return std::exp(-bw2 * xi2); });
    double mass = 0.0;
    for (auto& v : smooth.values()) {
        if (v < 0.0) v = 0.0;
        mass += v;
    }
    mass *= grid.cell_volume();
    for (auto& v : smooth.values()) v /= mass;
    return {std::move(smooth), bandwidth};
}

namespace {

const Field& pde_field_at(const SolutionPath& path, double t) {
    // piecewise constant in time, matching the implicit-Euler convention
    std::size_t k = 0;
    while (k + 1 < path.times.size() && path.times[k + 1] <= t + 1e-12) ++k;
    return path.fields[k];
}

std::array<std::complex<double>, 3> charfn_low_modes(const ParticleEnsemble& ens) {
    const Grid& g = ens.grid;
    const int d = g.dim();
    const double k1 = g.dxi();
    std::array<std::complex<double>, 3> out{};
    const std::size_t N = ens.count();
    for (int m = 1; m <= 3; ++m) {
        double re = 0.0, im = 0.0;
        for (std::size_t p = 0; p < N; ++p) {
            const double ph = m * k1 * ens.positions[p * d];
            re += std::cos(ph);
            im += std::sin(ph);
        }
        out[m - 1] = {re / N, im / N};
    }
    return out;
}

}  // namespace

SimResult simulate(const Field& u0_density, const LevyConfig& cfg,
                   const CoefficientSet& cs, SimMode mode,
                   const SolutionPath* pde_path, double T,
                   const std::vector<double>& snapshot_times, std::size_t thin_cap) {
    if (mode == SimMode::decoupled && pde_path == nullptr)
        throw DomainError("decoupled mode needs a PDE path");
    const Grid& g = u0_density.grid();

    SimResult res{{}, {}, {}, {}, sample_initial(u0_density, cfg), 0.0, 1};
    ParticleEnsemble& ens = res.final_ensemble;
    res.thin_stride = std::max<std::size_t>(1, (cfg.N + thin_cap - 1) / thin_cap);

    auto record = [&](double t) {
        res.times.push_back(t);
        res.densities.push_back(estimate_density(ens, g));
        std::vector<double> thin;
        const int d = g.dim();
        for (std::size_t p = 0; p < ens.count(); p += res.thin_stride)
            for (int ax = 0; ax < d; ++ax) thin.push_back(ens.positions[p * d + ax]);
        res.thinned_positions.push_back(std::move(thin));
        res.charfn.push_back(charfn_low_modes(ens));
    };

    std::size_t next_snap = 0;
    auto maybe_record = [&](double t) {
        while (next_snap < snapshot_times.size() &&
               snapshot_times[next_snap] <= t + 1e-9) {
            record(t);
            ++next_snap;
        }
    };
    maybe_record(0.0);

    const int n_steps = static_cast<int>(std::floor(T / cfg.dt + 1e-9));
    for (int j = 0; j < n_steps; ++j) {
        const double t = j * cfg.dt;
        if (mode == SimMode::decoupled) {
            euler_step(ens, pde_field_at(*pde_path, t), cfg.dt, cs, cfg);
        } else {
            DensityEstimate est = estimate_density(ens, g);
            euler_step(ens, est.values, cfg.dt, cs, cfg);
        }
        maybe_record((j + 1) * cfg.dt);
    }

    const double limit = 0.8 * g.half_width();
    std::size_t inside = 0;
    const int d = g.dim();
    for (std::size_t p = 0; p < ens.count(); ++p) {
        bool ok = true;
        for (int ax = 0; ax < d; ++ax)
            ok = ok && std::abs(ens.positions[p * d + ax]) <= limit;
        inside += ok ? 1 : 0;
    }
    res.escaped_mass_proxy = 1.0 - static_cast<double>(inside) / ens.count();
    return res;
}

SuperpositionReport superposition_check(const SimResult& sim, const SolutionPath& pde,
                                        double budget, double h_pde) {
    SuperpositionReport rep;
    const Grid& g = pde.grid();
    for (std::size_t k = 0; k < sim.times.size(); ++k) {
        const double t = sim.times[k];
        const Field& u = pde_field_at(pde, t);
        const DensityEstimate& kde = sim.densities[k];
        double l1 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            l1 += std::abs(kde.values[i] - u[i]);
        l1 *= g.cell_volume();
        rep.times.push_back(t);
        rep.l1_distance.push_back(l1);

        // characteristic-function distance at the 3 lowest axis-0 modes
        Spectrum S = spectral::forward_transform(u);
        std::array<double, 3> cf{};
        for (int m = 1; m <= 3; ++m) {
            // +m mode of axis 0 sits at flat index m (row-major layout)
            std::size_t idx = m;
            for (int ax = 1; ax < g.dim(); ++ax) idx *= g.n();
            const std::complex<double> phi_pde = S[idx] / S[0];
            cf[m - 1] = std::abs(sim.charfn[k][m - 1] - phi_pde);
        }
        rep.charfn_distance.push_back(cf);

        // block-resampled MC error proxy from the thinned positions
        const auto& thin = sim.thinned_positions[k];
        const int d = g.dim();
        const std::size_t M = thin.size() / d;
        const int B = 8;
        std::vector<double> block_l1;
        if (M >= 64) {
            for (int b = 0; b < B; ++b) {
                ParticleEnsemble sub{g, {}, t, 0, 0};
                for (std::size_t p = b; p < M; p += B)
                    for (int ax = 0; ax < d; ++ax)
                        sub.positions.push_back(thin[p * d + ax]);
                DensityEstimate bd = estimate_density(sub, g, kde.bandwidth);
                double bl1 = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i)
                    bl1 += std::abs(bd.values[i] - u[i]);
                block_l1.push_back(bl1 * g.cell_volume());
            }
            double mean = 0.0;
            for (double v : block_l1) mean += v;
            mean /= block_l1.size();
            double var = 0.0;
            for (double v : block_l1) var += (v - mean) * (v - mean);
            var /= (block_l1.size() - 1);
            // blocks hold M/B of the thinned sample; rescale the spread to the
            // full ensemble size: sd(l1_N) ~ sd(blocks) * sqrt((M/B) / N_full)
            const double n_block = static_cast<double>(M) / B;
            const double n_full = static_cast<double>(M) * sim.thin_stride;
            rep.mc_error.push_back(std::sqrt(var * n_block / n_full));
        } else {
            rep.mc_error.push_back(0.0);
        }
    }

    if (budget <= 0.0) {
        // sampling noise + bandwidth bias + time-coupling allowance
        const DensityEstimate& kde0 = sim.densities.back();
        const double bw = kde0.bandwidth;
        const std::size_t N = sim.final_ensemble.count();
        const int d = g.dim();
        double sqrt_mass = 0.0;
        for (double v : kde0.values.values()) sqrt_mass += std::sqrt(std::max(v, 0.0));
        sqrt_mass *= g.cell_volume();
        const double rk = std::pow(2.0 * std::sqrt(M_PI), -static_cast<double>(d));
        const double noise = std::sqrt(2.0 / M_PI) * sqrt_mass *
                             std::sqrt(rk / (N * std::pow(bw, d)));
        const Field& u_last = pde.fields.back();
        Field lap = spectral::apply_fractional_laplacian(u_last, 1.0);
        const double bias = 0.5 * bw * bw * spectral::norm_l1(lap);
        budget = 3.0 * (noise + bias) + 2.0 * h_pde;
    }
    rep.budget = budget;
    rep.pass = true;
    for (double v : rep.l1_distance) rep.pass = rep.pass && v <= budget;
    return rep;
}

}  // namespace fracfp::sde
