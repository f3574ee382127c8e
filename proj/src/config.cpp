#include "fracfp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracfp/spectral.hpp"

namespace fracfp {

using nlohmann::json;

namespace {

CatalogParams params_from(const json& j) {
    CatalogParams p;
    if (j.contains("params"))
        for (const auto& v : j["params"]) p.values.push_back(v.get<double>());
    return p;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw ConfigError(what);
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
    if (cfg.scenario != "custom" && j.size() <= 2) {
        // bare scenario reference: start from the preset, allow overrides below
        cfg = scenario_preset(cfg.scenario);
    } else if (cfg.scenario != "custom") {
        cfg = scenario_preset(cfg.scenario);
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("d")) cfg.grid.d = g["d"].get<int>();
        if (g.contains("n")) cfg.grid.n = g["n"].get<int>();
        if (g.contains("L")) cfg.grid.L = g["L"].get<double>();
    }
    require(cfg.grid.d >= 1 && cfg.grid.d <= 3, "grid.d must be 1, 2 or 3");
    require(cfg.grid.n >= 8 && (cfg.grid.n & (cfg.grid.n - 1)) == 0,
            "grid.n must be a power of two >= 8");
    require(cfg.grid.L > 0.0, "grid.L must be positive");

    if (j.contains("s")) cfg.s = j["s"].get<double>();
    require(cfg.s > 0.0 && cfg.s < 1.0, "s must lie in (0,1)");

    if (j.contains("coefficients")) {
        const auto& c = j["coefficients"];
        if (c.contains("beta")) {
            cfg.coefficients.beta_name = c["beta"].value("name", "linear");
            cfg.coefficients.beta_params = params_from(c["beta"]);
            if (c["beta"].contains("truncate"))
                cfg.coefficients.beta_truncate = c["beta"]["truncate"].get<double>();
        }
        if (c.contains("b")) {
            cfg.coefficients.b_name = c["b"].value("name", "zero");
            cfg.coefficients.b_params = params_from(c["b"]);
        }
        if (c.contains("D")) {
            cfg.coefficients.D_name = c["D"].value("name", "zero");
            cfg.coefficients.D_params = params_from(c["D"]);
        }
    }

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        if (s.contains("max_iter")) cfg.solver.max_iter = s["max_iter"].get<int>();
        if (s.contains("tol_l1")) cfg.solver.tol_l1 = s["tol_l1"].get<double>();
        if (s.contains("tol_precond"))
            cfg.solver.tol_precond = s["tol_precond"].get<double>();
        if (s.contains("damping")) cfg.solver.damping = s["damping"].get<double>();
        if (s.contains("dealias")) cfg.solver.dealias = s["dealias"].get<bool>();
        if (s.contains("mean_mode")) {
            const std::string m = s["mean_mode"].get<std::string>();
            require(m == "annihilated" || m == "bessel",
                    "solver.mean_mode must be annihilated or bessel");
            cfg.solver.mean_mode =
                m == "bessel" ? MeanMode::bessel : MeanMode::annihilated;
        }
        if (s.contains("eps_schedule")) {
            cfg.eps_schedule.clear();
            for (const auto& v : s["eps_schedule"])
                cfg.eps_schedule.push_back(v.get<double>());
        }
        require(cfg.solver.tol_l1 > 0.0 && cfg.solver.tol_precond > 0.0,
                "solver tolerances must be positive");
        require(!cfg.eps_schedule.empty(), "eps_schedule must be nonempty");
        for (double e : cfg.eps_schedule)
            require(e > 0.0 && e <= 1.0, "eps_schedule entries must lie in (0,1]");
    }

    if (j.contains("evolution")) {
        const auto& e = j["evolution"];
        EvolutionBlock blk = cfg.evolution.value_or(EvolutionBlock{});
        if (e.contains("T")) blk.T = e["T"].get<double>();
        if (e.contains("h")) blk.h = e["h"].get<double>();
        if (e.contains("snapshot_stride"))
            blk.snapshot_stride = e["snapshot_stride"].get<int>();
        if (e.contains("u0")) {
            blk.u0.name = e["u0"].value("name", "gaussian_bump");
            blk.u0.params = params_from(e["u0"]);
        }
        if (e.contains("compare_exact_linear"))
            blk.compare_exact_linear = e["compare_exact_linear"].get<bool>();
        require(blk.h > 0.0 && blk.T >= blk.h, "evolution needs 0 < h <= T");
        require(blk.snapshot_stride >= 1, "snapshot_stride must be >= 1");
        cfg.evolution = blk;
    }

    if (j.contains("sde")) {
        const auto& s = j["sde"];
        SdeBlock blk = cfg.sde.value_or(SdeBlock{});
        if (s.contains("N")) blk.N = s["N"].get<std::size_t>();
        if (s.contains("dt")) blk.dt = s["dt"].get<double>();
        if (s.contains("seed")) blk.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("mode")) blk.mode = s["mode"].get<std::string>();
        if (s.contains("big_jump_cap"))
            blk.big_jump_cap = s["big_jump_cap"].get<double>();
        require(blk.N >= 1, "sde.N must be >= 1");
        require(blk.dt > 0.0, "sde.dt must be positive");
        require(blk.mode == "decoupled" || blk.mode == "self_consistent",
                "sde.mode must be decoupled or self_consistent");
        cfg.sde = blk;
    }

    if (j.contains("gauge")) {
        const auto& g = j["gauge"];
        GaugeBlock blk = cfg.gauge.value_or(GaugeBlock{});
        if (g.contains("eps_g")) blk.eps_g = g["eps_g"].get<double>();
        if (g.contains("eps_m")) blk.eps_m = g["eps_m"].get<double>();
        if (g.contains("same_tol")) blk.same_tol = g["same_tol"].get<double>();
        if (g.contains("second_h")) blk.second_h = g["second_h"].get<double>();
        require(blk.eps_g > 0.0, "gauge.eps_g must be positive");
        require(blk.same_tol > 0.0, "gauge.same_tol must be positive");
        cfg.gauge = blk;
    }

    if (j.contains("kernel")) {
        const auto& k = j["kernel"];
        KernelBlock blk;
        auto fill = [&](const char* key, auto& vec) {
            if (!k.contains(key)) return;
            vec.clear();
            for (const auto& v : k[key]) vec.push_back(v.get<typename std::decay_t<decltype(vec)>::value_type>());
        };
        fill("s", blk.s_values);
        fill("eps", blk.eps_values);
        fill("d", blk.d_values);
        fill("r", blk.r_values);
        for (double sv : blk.s_values) require(sv > 0.0 && sv < 1.0, "kernel.s in (0,1)");
        for (double ev : blk.eps_values) require(ev > 0.0, "kernel.eps positive");
        for (int dv : blk.d_values) require(dv >= 1 && dv <= 3, "kernel.d in {1,2,3}");
        cfg.kernel = blk;
    }

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["scenario"] = cfg.scenario;
    j["grid"] = {{"d", cfg.grid.d}, {"n", cfg.grid.n}, {"L", cfg.grid.L}};
    j["s"] = cfg.s;
    json beta = {{"name", cfg.coefficients.beta_name},
                 {"params", cfg.coefficients.beta_params.values}};
    if (cfg.coefficients.beta_truncate) beta["truncate"] = *cfg.coefficients.beta_truncate;
    j["coefficients"] = {
        {"beta", beta},
        {"b", {{"name", cfg.coefficients.b_name}, {"params", cfg.coefficients.b_params.values}}},
        {"D", {{"name", cfg.coefficients.D_name}, {"params", cfg.coefficients.D_params.values}}}};
    j["solver"] = {
        {"max_iter", cfg.solver.max_iter},
        {"tol_l1", cfg.solver.tol_l1},
        {"tol_precond", cfg.solver.tol_precond},
        {"damping", cfg.solver.damping},
        {"dealias", cfg.solver.dealias},
        {"mean_mode", cfg.solver.mean_mode == MeanMode::bessel ? "bessel" : "annihilated"},
        {"eps_schedule", cfg.eps_schedule}};
    if (cfg.evolution) {
        j["evolution"] = {{"T", cfg.evolution->T},
                          {"h", cfg.evolution->h},
                          {"snapshot_stride", cfg.evolution->snapshot_stride},
                          {"u0",
                           {{"name", cfg.evolution->u0.name},
                            {"params", cfg.evolution->u0.params.values}}},
                          {"compare_exact_linear", cfg.evolution->compare_exact_linear}};
    }
    if (cfg.sde) {
        j["sde"] = {{"N", cfg.sde->N},
                    {"dt", cfg.sde->dt},
                    {"seed", cfg.sde->seed},
                    {"mode", cfg.sde->mode}};
        if (cfg.sde->big_jump_cap) j["sde"]["big_jump_cap"] = *cfg.sde->big_jump_cap;
    }
    if (cfg.gauge) {
        j["gauge"] = {{"eps_g", cfg.gauge->eps_g},
                      {"eps_m", cfg.gauge->eps_m},
                      {"same_tol", cfg.gauge->same_tol},
                      {"second_h", cfg.gauge->second_h}};
    }
    if (cfg.kernel) {
        j["kernel"] = {{"s", cfg.kernel->s_values},
                       {"eps", cfg.kernel->eps_values},
                       {"d", cfg.kernel->d_values},
                       {"r", cfg.kernel->r_values}};
    }
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    return j.dump(2);
}

RunConfig scenario_preset(const std::string& name) {
    RunConfig cfg;
    cfg.scenario = name;
    if (name == "linear_heat_d1") {
        cfg.grid = {1, 256, M_PI};
        cfg.s = 0.75;
        cfg.coefficients.beta_name = "linear";
        cfg.coefficients.b_name = "zero";
        cfg.coefficients.D_name = "zero";
        cfg.eps_schedule = {1e-6};
        EvolutionBlock e;
        e.T = 0.5;
        e.h = 1e-3;
        e.u0 = {"cosine_mixture", {}};
        e.compare_exact_linear = true;
        cfg.evolution = e;
    } else if (name == "porous_medium_d1") {
        cfg.grid = {1, 256, M_PI};
        cfg.s = 0.75;
        cfg.coefficients.beta_name = "porous_medium";
        cfg.coefficients.beta_params.values = {2.0};
        cfg.coefficients.beta_truncate = 2.0;
        cfg.coefficients.b_name = "zero";
        cfg.coefficients.D_name = "zero";
        cfg.eps_schedule = {1e-2, 1e-3};
        EvolutionBlock e;
        e.T = 0.25;
        e.h = 2e-3;
        e.u0 = {"gaussian_bump", {}};
        cfg.evolution = e;
    } else if (name == "drifted_porous_d1") {
        cfg = scenario_preset("porous_medium_d1");
        cfg.scenario = name;
        cfg.coefficients.b_name = "logistic_b";
        cfg.coefficients.D_name = "sine_D";
        cfg.coefficients.D_params.values = {0.25, 1.0};
        GaugeBlock g;
        g.second_h = 1e-3;
        g.same_tol = 1e-4;
        cfg.gauge = g;
    } else if (name == "superposition_linear_d1") {
        cfg.grid = {1, 128, M_PI};
        cfg.s = 0.75;
        cfg.coefficients.beta_name = "linear";
        cfg.coefficients.b_name = "zero";
        cfg.coefficients.D_name = "zero";
        cfg.eps_schedule = {1e-6};
        EvolutionBlock e;
        e.T = 0.5;
        e.h = 2e-3;
        e.u0 = {"gaussian_bump", {}};
        cfg.evolution = e;
        SdeBlock s;
        s.N = 100000;
        s.dt = 2e-3;
        s.seed = 1;
        cfg.sde = s;
    } else {
        throw ConfigError("unknown scenario: " + name);
    }
    return cfg;
}

CoefficientSet build_coefficients(const RunConfig& cfg) {
    CoefficientSet cs;
    cs.beta = make_beta(cfg.coefficients.beta_name, cfg.coefficients.beta_params);
    if (cfg.coefficients.beta_truncate)
        cs.beta = truncate(cs.beta, *cfg.coefficients.beta_truncate);
    cs.b = make_b(cfg.coefficients.b_name, cfg.coefficients.b_params);
    cs.D = make_drift(cfg.coefficients.D_name, cfg.grid.d, cfg.coefficients.D_params);
    cs.s = cfg.s;
    return cs;
}

Field build_initial_data(const Grid& grid, const InitialDataSpec& spec) {
    Field f(grid);
    const double L = grid.half_width();
    auto fill = [&](auto&& fn) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto idx = grid.unravel(i);
            Vec3 x{0.0, 0.0, 0.0};
            for (int ax = 0; ax < grid.dim(); ++ax) x[ax] = grid.coord(idx[ax]);
            f[i] = fn(x);
        }
    };
    if (spec.name == "gaussian_bump") {
        const double width = spec.params.get(0, L / 4.0);
        const double center = spec.params.get(1, 0.0);
        fill([&](const Vec3& x) {
            double r2 = 0.0;
            for (int ax = 0; ax < grid.dim(); ++ax)
                r2 += (x[ax] - center) * (x[ax] - center);
            return std::exp(-r2 / (2.0 * width * width));
        });
    } else if (spec.name == "two_bumps") {
        const double width = spec.params.get(0, L / 6.0);
        const double sep = spec.params.get(1, L / 2.0);
        fill([&](const Vec3& x) {
            double a = 0.0, b = 0.0;
            for (int ax = 0; ax < grid.dim(); ++ax) {
                a += (x[ax] - sep) * (x[ax] - sep);
                b += (x[ax] + sep) * (x[ax] + sep);
            }
            return std::exp(-a / (2.0 * width * width)) +
                   0.7 * std::exp(-b / (2.0 * width * width));
        });
    } else if (spec.name == "cosine_mixture") {
        fill([&](const Vec3& x) {
            const double k1 = M_PI / L;
            return 1.0 + 0.8 * std::cos(k1 * x[0]) + 0.35 * std::cos(2.0 * k1 * x[0]) +
                   0.1 * std::sin(3.0 * k1 * x[0]);
        });
    } else if (spec.name == "uniform") {
        for (auto& v : f.values()) v = 1.0;
    } else {
        throw ConfigError("unknown initial data: " + spec.name);
    }
    // probability density: clamp tiny negatives, normalize to unit mass
    for (auto& v : f.values()) v = std::max(v, 0.0);
    const double mass = spectral::integral(f);
    if (!(mass > 0.0)) throw ConfigError("initial data has no mass");
    for (auto& v : f.values()) v /= mass;
    return f;
}

}  // namespace fracfp
