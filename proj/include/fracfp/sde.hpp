#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "fracfp/coefficients.hpp"
#include "fracfp/evolution.hpp"
#include "fracfp/rng.hpp"

namespace fracfp::sde {

struct LevyConfig {
    double s = 0.75;
    double dt = 1e-3;
    std::optional<double> big_jump_cap;  // R_cap; none = wrap handles large jumps
    std::uint64_t seed = 0;
    std::size_t N = 1000;
};

/// Positions of N particles on the torus, with the counter-RNG state needed
/// to reproduce the path bitwise under any worker count.
struct ParticleEnsemble {
    Grid grid;
    std::vector<double> positions;  // N x d, row-major
    double time = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t step_index = 0;

    std::size_t count() const { return positions.size() / grid.dim(); }
    bool all_finite() const;
};

struct DensityEstimate {
    Field values;
    double bandwidth = 0.0;
};

/// Increment of the s-stable subordinator over dt (Kanter's exact sampler;
/// Laplace transform e^{-dt lambda^s}).
double sample_subordinator(double s, double dt, CounterRng& rng);

/// Isotropic 2s-stable increment sqrt(2 S) G with characteristic function
/// e^{-dt |xi|^{2s}} (the unit normalization the PDE flow is calibrated to).
Vec3 sample_isotropic_stable(double s, double dt, int d, CounterRng& rng);

/// Periodic multilinear interpolation of a grid field at position x.
double interpolate(const Field& f, const Vec3& x);

/// Draw initial positions from a density field: inverse CDF over cells for
/// d = 1, rejection sampling against the field for d >= 2.
ParticleEnsemble sample_initial(const Field& u0_density, const LevyConfig& cfg);

/// One Euler step of dX = D(X) b(u(X)) dt + (beta(u(X-))/u(X-))^{1/(2s)} dL,
/// beta(0)/0 := 0, positions wrapped periodically.
void euler_step(ParticleEnsemble& ens, const Field& u, double dt,
                const CoefficientSet& cs, const LevyConfig& cfg);

/// Periodic Gaussian KDE on the grid, normalized to unit mass. bandwidth <= 0
/// selects 1.06 sigma N^{-1/(d+4)} clipped to [dx, L/4].
DensityEstimate estimate_density(const ParticleEnsemble& ens, const Grid& grid,
                                 double bandwidth = 0.0);

enum class SimMode { decoupled, self_consistent };

struct SimResult {
    std::vector<double> times;                    // snapshot times
    std::vector<DensityEstimate> densities;       // KDE at snapshots
    std::vector<std::vector<double>> thinned_positions;  // <= thin_cap rows each
    /// empirical characteristic function at the 3 lowest axis-0 modes,
    /// computed from the full ensemble at each snapshot
    std::vector<std::array<std::complex<double>, 3>> charfn;
    ParticleEnsemble final_ensemble;
    double escaped_mass_proxy = 0.0;  // final fraction outside 0.8 L
    std::size_t thin_stride = 1;
};

/// Time-stepped ensemble. In decoupled mode the density argument is the PDE
/// path interpolated piecewise-constant in time; in self-consistent mode it is
/// re-estimated from the particles every step.
SimResult simulate(const Field& u0_density, const LevyConfig& cfg,
                   const CoefficientSet& cs, SimMode mode,
                   const SolutionPath* pde_path, double T,
                   const std::vector<double>& snapshot_times,
                   std::size_t thin_cap = 10000);

struct SuperpositionReport {
    std::vector<double> times;
    std::vector<double> l1_distance;
    std::vector<double> mc_error;  // block-resampled standard error proxy
    std::vector<std::array<double, 3>> charfn_distance;  // 3 lowest modes
    double budget = 0.0;
    bool pass = false;
};

/// Per-time l1 distance between the KDE and the PDE fields plus low-mode
/// characteristic-function distances; pass/fail against a tolerance budget
/// combining sampling noise, bandwidth bias and the time step (budget <= 0
/// selects the automatic estimate).
SuperpositionReport superposition_check(const SimResult& sim, const SolutionPath& pde,
                                        double budget = 0.0, double h_pde = 0.0);

}  // namespace fracfp::sde
