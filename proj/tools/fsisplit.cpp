#include <cstddef>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsi/checks.hpp"
#include "fsi/config.hpp"
#include "fsi/driver.hpp"
#include "fsi/energy.hpp"
#include "fsi/errors.hpp"
#include "fsi/output.hpp"
#include "fsi/sweep.hpp"

namespace {

// one machine-readable error object on stderr; exit code carries the class
void report_error(const char* kind, const std::string& what) {
    nlohmann::json j;
    j["error"] = kind;
    j["what"] = what;
    std::cerr << j.dump() << "\n";
}

int cmd_run(const std::string& config, const std::string& out_dir, bool force) {
    const fsi::RunConfig cfg = fsi::load_config(config);
    fsi::prepare_output_dir(out_dir, force);
    const fsi::RunOutput out = fsi::run(cfg);
    fsi::write_run_outputs(cfg, out, out_dir);
    std::cout << (out.status == fsi::RunStatus::completed ? "completed" : "collision")
              << ": " << out.windows.size() << " windows, horizon " << out.horizon_reached
              << ", trace gap " << out.gap_l2 << ", energy bound "
              << (out.telescope.pass ? "pass" : "VIOLATED") << "\n";
    for (const auto& w : out.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_dir, std::size_t jobs,
              bool force) {
    const fsi::SweepPlan plan = fsi::load_sweep_plan(plan_path);
    fsi::prepare_output_dir(out_dir, force);
    const fsi::SweepResult res = fsi::run_sweep(plan, out_dir, jobs);
    std::cout << res.table;
    if (!res.cauchy.empty()) std::cout << res.cauchy;
    return 0;
}

int cmd_bases(const std::string& config) {
    const fsi::RunConfig cfg = fsi::load_config(config);
    const fsi::PlateBasis plate = fsi::make_plate_basis(cfg.k, cfg.L);
    const fsi::HeatBasis heat{cfg.L, cfg.k};
    const fsi::CoupledMatrices cm =
        fsi::assemble_coupled_matrices(plate, heat, cfg.pair_quad);
    const fsi::FluidBasis fluid =
        fsi::make_fluid_basis(cfg.k, cfg.L, plate, cfg.lifting_intervals);

    nlohmann::ordered_json j;
    j["k"] = cfg.k;
    j["L"] = cfg.L;
    for (std::size_t i = 0; i < plate.size(); ++i) {
        j["plate"].push_back({{"mu", plate.modes[i].mu},
                              {"sigma", plate.modes[i].sigma},
                              {"eigenvalue", plate.xi(i)}});
        j["heat"].push_back({{"eigenvalue", heat.xi(i)}});
    }
    for (const auto& m : fluid.interior)
        j["fluid_interior"].push_back({{"m", m.m},
                                       {"n", m.n},
                                       {"component", m.component},
                                       {"eigenvalue", m.eigenvalue}});
    j["lifting_intervals"] = cfg.lifting_intervals;
    j["coupling_quadrature_drift"] = cm.quadrature_drift;
    j["korn_witness"] = fsi::korn_like_lower_bound(cfg.mu, cfg.lambda);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-splitting solver: compressible fluid under a thermoelastic plate"};
    app.require_subcommand(1);

    std::string run_config, run_out;
    bool run_force = false;
    auto* run_cmd = app.add_subcommand("run", "execute one trajectory and write its artifacts");
    run_cmd->add_option("--config", run_config, "config file (key = value lines)")->required();
    run_cmd->add_option("--out", run_out, "output directory")->required();
    run_cmd->add_flag("--force", run_force, "replace a non-empty output directory");

    std::string sweep_plan, sweep_out;
    std::size_t jobs = 0;
    bool sweep_force = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "run every point of a sweep plan");
    sweep_cmd->add_option("--plan", sweep_plan, "plan file (config plus sweep.* lines)")
        ->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
    sweep_cmd->add_option("--jobs", jobs, "worker threads (default: hardware count)");
    sweep_cmd->add_flag("--force", sweep_force, "replace a non-empty output directory");

    std::string filter;
    auto* check_cmd = app.add_subcommand("check", "run the verification suite");
    check_cmd->add_option("--filter", filter, "only run checks whose name contains this");

    std::string bases_config;
    auto* bases_cmd = app.add_subcommand("bases", "dump basis diagnostics as JSON");
    bases_cmd->add_option("--config", bases_config, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_config, run_out, run_force);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_plan, sweep_out, jobs, sweep_force);
        if (check_cmd->parsed()) return fsi::run_checks(filter, std::cout) == 0 ? 0 : 3;
        if (bases_cmd->parsed()) return cmd_bases(bases_config);
    } catch (const fsi::ConfigError& e) {
        report_error("config", e.what());
        return 2;
    } catch (const fsi::InvariantError& e) {
        report_error("invariant", e.what());
        return 3;
    } catch (const fsi::SolverError& e) {
        report_error("solver", e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
    return 0;
}
