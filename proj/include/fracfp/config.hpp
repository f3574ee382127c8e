#pragma once

#include <optional>
#include <string>

#include "fracfp/evolution.hpp"
#include "fracfp/sde.hpp"

namespace fracfp {

struct GridSpec {
    int d = 1;
    int n = 256;
    double L = M_PI;
    Grid make() const { return Grid(d, n, L); }
};

struct CoefficientSelection {
    std::string beta_name = "linear";
    CatalogParams beta_params;
    std::optional<double> beta_truncate;
    std::string b_name = "zero";
    CatalogParams b_params;
    std::string D_name = "zero";
    CatalogParams D_params;
};

struct InitialDataSpec {
    std::string name = "gaussian_bump";  // gaussian_bump | two_bumps | cosine_mixture | uniform
    CatalogParams params;
};

struct EvolutionBlock {
    double T = 0.5;
    double h = 1e-3;
    int snapshot_stride = 1;
    InitialDataSpec u0;
    bool compare_exact_linear = false;  // spectral exact-flow comparison stage
};

struct SdeBlock {
    std::size_t N = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    std::string mode = "decoupled";  // decoupled | self_consistent
    std::optional<double> big_jump_cap;
};

struct GaugeBlock {
    double eps_g = 1e-2;
    double eps_m = -1.0;  // <0 -> 2 dx
    double same_tol = 1e-8;
    double second_h = -1.0;  // >0: audit against a re-run at this step
};

struct KernelBlock {
    std::vector<double> s_values{0.75};
    std::vector<double> eps_values{1.0};
    std::vector<int> d_values{1};
    std::vector<double> r_values{0.5, 1.0, 2.0};
};

struct RunConfig {
    std::string scenario = "custom";
    GridSpec grid;
    CoefficientSelection coefficients;
    double s = 0.75;
    SolverControls solver;
    std::vector<double> eps_schedule{1e-2, 1e-3, 1e-4};
    std::optional<EvolutionBlock> evolution;
    std::optional<SdeBlock> sde;
    std::optional<GaugeBlock> gauge;
    std::optional<KernelBlock> kernel;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
};

/// Parse and validate a config file (ConfigError on schema violations).
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);

/// Materialize a built-in scenario preset ("linear_heat_d1",
/// "porous_medium_d1", "drifted_porous_d1", "superposition_linear_d1").
RunConfig scenario_preset(const std::string& name);

CoefficientSet build_coefficients(const RunConfig& cfg);
Field build_initial_data(const Grid& grid, const InitialDataSpec& spec);

}  // namespace fracfp
