#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracfp/acceptance.hpp"
#include "fracfp/gauge.hpp"
#include "fracfp/io.hpp"
#include "fracfp/scenario.hpp"
#include "fracfp/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct CommonArgs {
    std::string config_path;
    std::string scenario;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

fracfp::RunConfig resolve_config(const CommonArgs& args) {
    fracfp::RunConfig cfg;
    if (!args.config_path.empty())
        cfg = fracfp::load_config(args.config_path);
    else if (!args.scenario.empty())
        cfg = fracfp::scenario_preset(args.scenario);
    else
        throw fracfp::ConfigError("provide --config <path> or --scenario <name>");
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed_set) {
        cfg.seed = args.seed;
        if (cfg.sde) cfg.sde->seed = args.seed;
    }
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool config_needed = true) {
    auto* c = cmd->add_option("--config", args.config_path, "run configuration file");
    auto* s = cmd->add_option("--scenario", args.scenario, "built-in scenario preset");
    if (config_needed) (c->excludes(s), void());
    cmd->add_option("--out", args.out_dir, "output directory override");
    cmd->add_option("--seed", args.seed, "seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
}

int run_pipeline(const CommonArgs& args, const char* required_block) {
    fracfp::RunConfig cfg = resolve_config(args);
    if (std::string(required_block) == "evolution" && !cfg.evolution)
        throw fracfp::ConfigError("config has no evolution block");
    if (std::string(required_block) == "sde" && !cfg.sde)
        throw fracfp::ConfigError("config has no sde block");
    if (std::string(required_block) == "kernel" && !cfg.kernel)
        throw fracfp::ConfigError("config has no kernel block");
    fracfp::RunManifest manifest = fracfp::run_scenario(cfg);
    std::cout << "run written to " << cfg.output_dir << "/manifest.json\n";
    if (manifest.failed) {
        std::cerr << "numerical failure: " << manifest.failure << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracfp: fractional nonlinear Fokker-Planck toolkit"};
    app.require_subcommand(1);

    CommonArgs resolvent_args, evolve_args, sde_args, kernel_args;
    auto* cmd_resolvent =
        app.add_subcommand("resolvent", "solve the regularized resolvent equation");
    add_common(cmd_resolvent, resolvent_args);
    double resolvent_lambda = 0.1;
    cmd_resolvent->add_option("--lambda", resolvent_lambda, "resolvent step");

    auto* cmd_evolve = app.add_subcommand("evolve", "implicit-Euler evolution run");
    add_common(cmd_evolve, evolve_args);

    auto* cmd_sde =
        app.add_subcommand("sde", "particle simulation with superposition report");
    add_common(cmd_sde, sde_args);

    auto* cmd_kernel = app.add_subcommand("kernel", "subordination kernel tables");
    add_common(cmd_kernel, kernel_args);

    auto* cmd_gauge = app.add_subcommand("gauge", "gauge audit of two run directories");
    std::string run_a, run_b, gauge_out = "gauge_out";
    double gauge_eps = 1e-2, gauge_same_tol = 1e-8, gauge_eps_m = -1.0;
    cmd_gauge->add_option("run_a", run_a, "first run directory")->required();
    cmd_gauge->add_option("run_b", run_b, "second run directory")->required();
    cmd_gauge->add_option("--out", gauge_out, "output directory");
    cmd_gauge->add_option("--eps-g", gauge_eps, "gauge epsilon");
    cmd_gauge->add_option("--eps-m", gauge_eps_m, "mollifier width (default 2 dx)");
    cmd_gauge->add_option("--same-tol", gauge_same_tol, "verdict tolerance");
    std::string gauge_config;
    cmd_gauge->add_option("--config", gauge_config,
                          "config naming the coefficient set (defaults to linear)");

    auto* cmd_accept = app.add_subcommand("accept", "run the acceptance suite");
    std::string level = "full";
    cmd_accept->add_option("--level", level, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_resolvent->parsed()) {
            fracfp::RunConfig cfg = resolve_config(resolvent_args);
            fracfp::CoefficientSet cs = fracfp::build_coefficients(cfg);
            const fracfp::Grid grid = cfg.grid.make();
            fracfp::Field f =
                cfg.evolution
                    ? fracfp::build_initial_data(grid, cfg.evolution->u0)
                    : fracfp::build_initial_data(grid, fracfp::InitialDataSpec{});
            fracfp::ResolventSolution sol =
                fracfp::resolvent_J(f, resolvent_lambda, cs, cfg.eps_schedule, cfg.solver);
            std::filesystem::create_directories(cfg.output_dir);
            fracfp::io::write_field_csv(sol.y, cfg.output_dir + "/y.csv");
            fracfp::io::write_field_binary(sol.y, cfg.output_dir + "/y.bin");
            std::ostringstream meta;
            meta << "{\n  \"lambda\": " << resolvent_lambda
                 << ",\n  \"iterations\": " << sol.iterations
                 << ",\n  \"residual_l1\": " << sol.residual_l1
                 << ",\n  \"residual_precond_l2\": " << sol.residual_precond_l2
                 << ",\n  \"stages\": [";
            for (std::size_t k = 0; k < sol.chain.size(); ++k) {
                const auto& st = sol.chain[k];
                meta << (k ? "," : "") << "\n    {\"eps\": " << st.eps
                     << ", \"iterations\": " << st.iterations
                     << ", \"outer\": " << st.outer_iterations
                     << ", \"residual_l1\": " << st.residual_l1
                     << ", \"increment_l1\": " << st.increment_l1 << "}";
            }
            meta << "\n  ]\n}\n";
            fracfp::io::write_text_atomic(cfg.output_dir + "/resolvent.json", meta.str());
            std::cout << "resolvent solved: " << sol.iterations
                      << " iterations, residual_l1 " << sol.residual_l1 << "\n";
            return kExitOk;
        }
        if (cmd_evolve->parsed()) return run_pipeline(evolve_args, "evolution");
        if (cmd_sde->parsed()) return run_pipeline(sde_args, "sde");
        if (cmd_kernel->parsed()) return run_pipeline(kernel_args, "kernel");
        if (cmd_gauge->parsed()) {
            fracfp::SolutionPath a = fracfp::load_run_path(run_a);
            fracfp::SolutionPath b = fracfp::load_run_path(run_b);
            fracfp::CoefficientSet cs;
            if (!gauge_config.empty()) {
                cs = fracfp::build_coefficients(fracfp::load_config(gauge_config));
            } else {
                cs.beta = fracfp::make_beta("linear");
                cs.b = fracfp::make_b("zero");
                cs.D = fracfp::zero_drift(a.grid().dim());
                cs.s = 0.75;
            }
            fracfp::gauge::GaugePair pair{
                &a, &b, gauge_eps_m >= 0.0 ? gauge_eps_m : 2.0 * a.grid().dx(),
                gauge_eps, cs, gauge_same_tol};
            fracfp::gauge::GaugeReport rep = fracfp::gauge::gronwall_audit(pair);
            std::filesystem::create_directories(gauge_out);
            std::ostringstream trace;
            trace.precision(17);
            trace << "t,h,eta_proxy\n";
            for (std::size_t k = 0; k < rep.times.size(); ++k)
                trace << rep.times[k] << "," << rep.h_trace[k] << ","
                      << rep.eta_proxy[k] << "\n";
            fracfp::io::write_text_atomic(gauge_out + "/h_trace.csv", trace.str());
            std::ostringstream rj;
            rj << "{\n  \"verdict\": \"" << (rep.same ? "SAME" : "DIFFERENT")
               << "\",\n  \"fitted_C\": " << rep.fitted_C
               << ",\n  \"same_tol\": " << rep.same_tol
               << ",\n  \"h_final\": " << rep.h_trace.back() << "\n}\n";
            fracfp::io::write_text_atomic(gauge_out + "/report.json", rj.str());
            std::cout << "gauge verdict: " << (rep.same ? "SAME" : "DIFFERENT")
                      << " (h_final " << rep.h_trace.back() << ")\n";
            return kExitOk;
        }
        if (cmd_accept->parsed()) {
            const auto lvl = level == "quick" ? fracfp::acceptance::Level::quick
                                              : fracfp::acceptance::Level::full;
            fracfp::acceptance::Report rep = fracfp::acceptance::run(lvl, std::cout);
            return rep.all_pass() ? kExitOk : kExitAcceptance;
        }
    } catch (const fracfp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fracfp::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
