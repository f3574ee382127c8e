#include "fracfp/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracfp/gauge.hpp"
#include "fracfp/io.hpp"
#include "fracfp/kernels.hpp"
#include "fracfp/spectral.hpp"

namespace fracfp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string RunManifest::to_json() const {
    json j;
    j["version"] = version;
    j["config"] = json::parse(config_echo);
    json t = json::object();
    for (const auto& [name, sec] : timings_s) t[name] = sec;
    j["timings_s"] = t;
    json o = json::object();
    for (const auto& [name, val] : outcomes) o[name] = val;
    j["outcomes"] = o;
    j["warnings"] = warnings;
    json files_j = json::array();
    for (const auto& f : files)
        files_j.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
    j["files"] = files_j;
    j["failed"] = failed;
    if (failed) j["failure"] = failure;
    return j.dump(2);
}

namespace {

class StageClock {
public:
    explicit StageClock(RunManifest& m, std::string name)
        : manifest_(m), name_(std::move(name)),
          start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        const double sec = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
        manifest_.timings_s.emplace_back(name_, sec);
    }

private:
    RunManifest& manifest_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

void track_file(RunManifest& m, const std::string& path) {
    m.files.push_back({path, static_cast<std::uint64_t>(fs::file_size(path)),
                       io::fnv1a64_file(path)});
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

void write_snapshots(const SolutionPath& path, const std::string& dir,
                     RunManifest& manifest) {
    fs::create_directories(dir);
    std::ostringstream index;
    index << "index,time,file\n";
    for (std::size_t k = 0; k < path.fields.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << k << ".bin";
        const std::string file = dir + "/" + name.str();
        io::write_field_binary(path.fields[k], file);
        track_file(manifest, file);
        index.precision(17);
        index << k << "," << path.times[k] << "," << name.str() << "\n";
    }
    io::write_text_atomic(dir + "/index.csv", index.str());
    track_file(manifest, dir + "/index.csv");
}

sde::SuperpositionReport run_sde_stage(const RunConfig& cfg, const CoefficientSet& cs,
                                       const Field& u0, const SolutionPath& pde,
                                       const std::string& out, RunManifest& manifest) {
    const SdeBlock& blk = *cfg.sde;
    sde::LevyConfig lc;
    lc.s = cfg.s;
    lc.dt = blk.dt;
    lc.seed = blk.seed;
    lc.N = blk.N;
    lc.big_jump_cap = blk.big_jump_cap;
    const double T = cfg.evolution->T;
    std::vector<double> snaps{0.0, 0.5 * T, T};
    const auto mode = blk.mode == "self_consistent" ? sde::SimMode::self_consistent
                                                    : sde::SimMode::decoupled;
    sde::SimResult sim = sde::simulate(u0, lc, cs, mode, &pde, T, snaps);
    manifest.outcomes.emplace_back("sde_escaped_mass_proxy", fmt(sim.escaped_mass_proxy));

    // density snapshots and thinned positions
    for (std::size_t k = 0; k < sim.times.size(); ++k) {
        std::ostringstream name;
        name << out << "/fields/kde_" << k << ".bin";
        io::write_field_binary(sim.densities[k].values, name.str());
        track_file(manifest, name.str());
    }
    {
        std::ostringstream rows;
        rows.precision(17);
        rows << "snapshot,particle";
        for (int ax = 0; ax < pde.grid().dim(); ++ax) rows << ",x" << ax;
        rows << "\n";
        const int d = pde.grid().dim();
        for (std::size_t k = 0; k < sim.thinned_positions.size(); ++k) {
            const auto& thin = sim.thinned_positions[k];
            for (std::size_t p = 0; p * d < thin.size(); ++p) {
                rows << k << "," << p * sim.thin_stride;
                for (int ax = 0; ax < d; ++ax) rows << "," << thin[p * d + ax];
                rows << "\n";
            }
        }
        io::write_text_atomic(out + "/positions.csv", rows.str());
        track_file(manifest, out + "/positions.csv");
        manifest.outcomes.emplace_back("sde_thin_stride", fmt(sim.thin_stride));
    }

    sde::SuperpositionReport rep = sde::superposition_check(sim, pde, 0.0, cfg.evolution->h);
    json rj;
    rj["times"] = rep.times;
    rj["l1_distance"] = rep.l1_distance;
    rj["mc_error"] = rep.mc_error;
    rj["budget"] = rep.budget;
    rj["pass"] = rep.pass;
    json cf = json::array();
    for (const auto& c : rep.charfn_distance) cf.push_back({c[0], c[1], c[2]});
    rj["charfn_distance"] = cf;
    io::write_text_atomic(out + "/report.json", rj.dump(2));
    track_file(manifest, out + "/report.json");
    manifest.outcomes.emplace_back("superposition_pass", rep.pass ? "true" : "false");
    manifest.outcomes.emplace_back("superposition_l1_final", fmt(rep.l1_distance.back()));
    return rep;
}

}  // namespace

SolutionPath load_run_path(const std::string& run_dir) {
    const std::string index = run_dir + "/fields/index.csv";
    std::ifstream in(index);
    if (!in) throw ConfigError("no snapshot index at " + index);
    std::string line;
    std::getline(in, line);  // header
    SolutionPath path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string idx, time, file;
        std::getline(row, idx, ',');
        std::getline(row, time, ',');
        std::getline(row, file, ',');
        path.times.push_back(std::stod(time));
        path.fields.push_back(io::read_field_binary(run_dir + "/fields/" + file));
        const Field& f = path.fields.back();
        path.trace_times.push_back(path.times.back());
        path.mass_trace.push_back(spectral::integral(f));
        double mn = f[0];
        for (double v : f.values()) mn = std::min(mn, v);
        path.min_trace.push_back(mn);
        path.linf_trace.push_back(spectral::norm_linf(f));
    }
    if (path.fields.empty()) throw ConfigError("empty snapshot index at " + index);
    return path;
}

RunManifest run_scenario(const RunConfig& cfg) {
    RunManifest manifest;
    manifest.config_echo = config_to_json(cfg);
    const std::string out = cfg.output_dir;
    fs::create_directories(out);
    fs::create_directories(out + "/fields");

    CoefficientSet cs = build_coefficients(cfg);

    try {
        {
            StageClock clock(manifest, "validate");
            for (auto mode : {HypothesisMode::existence, HypothesisMode::uniqueness}) {
                HypothesisReport rep = validate(cs, mode);
                const char* tag =
                    mode == HypothesisMode::existence ? "existence" : "uniqueness";
                for (const auto& c : rep.checks)
                    manifest.outcomes.emplace_back(
                        std::string("hypothesis_") + tag + "_" + c.name,
                        c.pass ? "pass" : "fail at r=" + fmt(c.witness));
                if (!rep.all_pass())
                    manifest.warnings.push_back(std::string(tag) +
                                                " hypothesis probe reported failures");
            }
        }

        SolutionPath path;
        Field u0(cfg.grid.make());
        if (cfg.evolution) {
            StageClock clock(manifest, "evolve");
            const Grid grid = cfg.grid.make();
            u0 = build_initial_data(grid, cfg.evolution->u0);
            EvolutionConfig ecfg;
            ecfg.T = cfg.evolution->T;
            ecfg.h = cfg.evolution->h;
            ecfg.cs = cs;
            ecfg.solver = cfg.solver;
            ecfg.eps_schedule = cfg.eps_schedule;
            ecfg.snapshot_stride = cfg.evolution->snapshot_stride;
            const double l0 = lambda0(cs);
            if (cfg.evolution->h >= l0)
                manifest.warnings.push_back("step h exceeds lambda0; run proceeds");
            path = evolve(u0, ecfg);
            for (const auto& w : path.warnings) manifest.warnings.push_back(w);
            if (path.failed) {
                manifest.failed = true;
                manifest.failure = path.failure;
            }

            io::write_traces_csv(path, out + "/traces.csv");
            track_file(manifest, out + "/traces.csv");
            write_snapshots(path, out + "/fields", manifest);
            io::write_field_csv(path.final_field(), out + "/final.csv");
            track_file(manifest, out + "/final.csv");

            double drift = 0.0, min_v = 0.0;
            for (std::size_t j = 0; j < path.mass_trace.size(); ++j) {
                drift = std::max(drift,
                                 std::abs(path.mass_trace[j] - path.mass_trace[0]));
                min_v = std::min(min_v, path.min_trace[j]);
            }
            manifest.outcomes.emplace_back("mass_drift_max", fmt(drift));
            manifest.outcomes.emplace_back("min_value", fmt(min_v));

            if (cfg.evolution->compare_exact_linear) {
                Spectrum S = spectral::forward_transform(u0);
                const Grid& g = u0.grid();
                for (std::size_t i = 0; i < g.size(); ++i)
                    S[i] *= std::exp(-cfg.evolution->T *
                                     std::pow(g.xi_norm2(i), cfg.s));
                Field exact = spectral::inverse_transform_unchecked(S);
                double l1 = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i)
                    l1 += std::abs(exact[i] - path.final_field()[i]);
                l1 *= g.cell_volume();
                manifest.outcomes.emplace_back("exact_linear_l1_error", fmt(l1));
            }
        }

        if (cfg.gauge && cfg.evolution) {
            StageClock clock(manifest, "gauge");
            const GaugeBlock& blk = *cfg.gauge;
            EvolutionConfig ecfg;
            ecfg.T = cfg.evolution->T;
            ecfg.h = blk.second_h > 0.0 ? blk.second_h : cfg.evolution->h;
            ecfg.cs = cs;
            ecfg.solver = cfg.solver;
            ecfg.eps_schedule = cfg.eps_schedule;
            const double ratio = cfg.evolution->h / ecfg.h;
            ecfg.snapshot_stride = std::max(
                1, static_cast<int>(std::lround(cfg.evolution->snapshot_stride * ratio)));
            SolutionPath second = evolve(u0, ecfg);
            gauge::GaugePair pair{&path, &second,
                                  blk.eps_m >= 0.0 ? blk.eps_m : 2.0 * path.grid().dx(),
                                  blk.eps_g, cs, blk.same_tol};
            gauge::GaugeReport rep = gauge::gronwall_audit(pair);
            std::ostringstream trace;
            trace.precision(17);
            trace << "t,h,eta_proxy\n";
            for (std::size_t k = 0; k < rep.times.size(); ++k)
                trace << rep.times[k] << "," << rep.h_trace[k] << ","
                      << rep.eta_proxy[k] << "\n";
            io::write_text_atomic(out + "/gauge_trace.csv", trace.str());
            track_file(manifest, out + "/gauge_trace.csv");
            manifest.outcomes.emplace_back("gauge_verdict", rep.same ? "SAME" : "DIFFERENT");
            manifest.outcomes.emplace_back("gauge_fitted_C", fmt(rep.fitted_C));
        }

        if (cfg.sde && cfg.evolution) {
            StageClock clock(manifest, "sde");
            run_sde_stage(cfg, cs, u0, path, out, manifest);
        }

        if (cfg.kernel) {
            StageClock clock(manifest, "kernel");
            const KernelBlock& blk = *cfg.kernel;
            for (double s : blk.s_values)
                for (double eps : blk.eps_values)
                    for (int d : blk.d_values) {
                        stable::StableDensityTable eta(s);
                        std::vector<double> gvals;
                        for (double r : blk.r_values) {
                            kernels::KernelQuery q{s, eps, d, r};
                            gvals.push_back(
                                kernels::resolvent_kernel_subordination(q, &eta));
                        }
                        std::ostringstream name;
                        name << out << "/kernel_s" << s << "_eps" << eps << "_d" << d
                             << ".csv";
                        io::write_kernel_csv(blk.r_values, gvals, name.str());
                        track_file(manifest, name.str());
                    }
        }
    } catch (const ConfigError&) {
        throw;  // config problems abort before compute; no manifest
    } catch (const Error& e) {
        manifest.failed = true;
        manifest.failure = e.what();
    }

    io::write_text_atomic(out + "/manifest.json", manifest.to_json());
    return manifest;
}

}  // namespace fracfp
