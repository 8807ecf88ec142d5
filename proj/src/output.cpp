#include "fsi/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsi/energy.hpp"
#include "fsi/errors.hpp"

#ifndef FSI_GIT_DESCRIBE
#define FSI_GIT_DESCRIBE "untracked"
#endif

namespace fsi {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void prepare_output_dir(const std::string& dir, bool force) {
    namespace fs = std::filesystem;
    const fs::path p(dir);
    std::error_code ec;
    if (fs::exists(p, ec)) {
        if (!fs::is_directory(p, ec)) throw ConfigError("output path is not a directory: " + dir);
        if (!fs::is_empty(p, ec)) {
            if (!force)
                throw ConfigError("output directory not empty (use --force to replace): " + dir);
            fs::remove_all(p, ec);
            if (ec) throw ConfigError("cannot clear output directory " + dir + ": " + ec.message());
        }
    }
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("cannot open for writing: " + path);
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw SolverError("write failed: " + path);
}

std::string ledger_csv(const std::vector<EnergyLedger>& rows) {
    std::ostringstream os;
    os << "t,kinetic,internal,artificial_internal,plate_kinetic_half,plate_kinetic_quarter,"
          "bending,potential,heat,regularizer,df_rate,ds_rate,fd_eps_rate,mass,entropy,"
          "fluid_total,plate_total,total\n";
    for (const auto& e : rows) {
        os << num(e.t) << ',' << num(e.kinetic) << ',' << num(e.internal) << ','
           << num(e.artificial_internal) << ',' << num(e.plate_kinetic_half) << ','
           << num(e.plate_kinetic_quarter) << ',' << num(e.bending) << ',' << num(e.potential)
           << ',' << num(e.heat) << ',' << num(e.regularizer) << ',' << num(e.df_rate) << ','
           << num(e.ds_rate) << ',' << num(e.fd_eps_rate) << ',' << num(e.mass) << ','
           << num(e.entropy) << ',' << num(e.fluid_total()) << ',' << num(e.plate_total()) << ','
           << num(e.total()) << '\n';
    }
    return os.str();
}

std::string windows_csv(const std::vector<WindowRecord>& rows) {
    std::ostringstream os;
    os << "index,t_end,ssp_residual,fsp_residual,picard_iterations,picard_update,gap_sq,min_j,"
          "mass_start,mass_end,production,s_end,f_end,sd,fd,pen_gap_ssp,pen_gap_fsp,pen_v_end,"
          "margin_penalty_chain,margin_basis_growth,margin_gronwall\n";
    for (const auto& w : rows) {
        os << w.index << ',' << num(w.t_end) << ',' << num(w.ssp_residual) << ','
           << num(w.fsp_residual) << ',' << w.picard_iterations << ',' << num(w.picard_update)
           << ',' << num(w.gap_sq) << ',' << num(w.min_j) << ',' << num(w.mass_start) << ','
           << num(w.mass_end) << ',' << num(w.production) << ',' << num(w.s_end) << ','
           << num(w.f_end) << ',' << num(w.sd) << ',' << num(w.fd) << ',' << num(w.pen_gap_ssp)
           << ',' << num(w.pen_gap_fsp) << ',' << num(w.pen_v_end) << ','
           << num(w.dt_margins.penalty_chain) << ',' << num(w.dt_margins.basis_growth) << ','
           << num(w.dt_margins.gronwall) << '\n';
    }
    return os.str();
}

std::string field_csv(const Grid2D& grid, const Field& r) {
    std::ostringstream os;
    os << "i,j,x,z,r\n";
    for (std::size_t j = 0; j < grid.nz; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            os << i << ',' << j << ',' << num(grid.xc(i)) << ',' << num(grid.zc(j)) << ','
               << num(r[Eigen::Index(grid.idx(i, j))]) << '\n';
    return os.str();
}

std::string manifest_json(const RunConfig& cfg, const RunOutput& out) {
    nlohmann::ordered_json j;
    j["build"] = FSI_GIT_DESCRIBE;

    // canonical config echo, split back into key/value pairs so the manifest
    // stays both greppable and reloadable
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    std::istringstream echo(config_echo(cfg));
    for (std::string line; std::getline(echo, line);) {
        const auto sep = line.find(" = ");
        if (sep == std::string::npos) continue;
        conf[line.substr(0, sep)] = line.substr(sep + 3);
    }
    j["config"] = conf;

    j["status"] = out.status == RunStatus::completed ? "completed" : "collision";
    j["dt"] = out.dt;
    j["windows"] = out.windows.size();
    j["horizon_reached"] = out.horizon_reached;
    j["e0_total"] = out.e0_total;
    j["gap_l2"] = out.gap_l2;
    j["korn_witness"] = korn_like_lower_bound(cfg.mu, cfg.lambda);

    bool margins_ok = true;
    double worst_ssp = 0.0, worst_fsp = 0.0;
    for (const auto& w : out.windows) {
        margins_ok = margins_ok && w.dt_margins.satisfied();
        worst_ssp = std::max(worst_ssp, std::abs(w.ssp_residual));
        worst_fsp = std::max(worst_fsp, std::abs(w.fsp_residual));
    }
    j["admissibility_satisfied"] = margins_ok;
    j["max_ssp_residual"] = worst_ssp;
    j["max_fsp_residual"] = worst_fsp;

    j["telescope"] = {{"pass", out.telescope.pass}, {"min_margin", out.telescope.min_margin}};
    j["continuation_horizons"] = out.continuation_horizons;
    j["warnings"] = out.warnings;
    return j.dump(2) + "\n";
}

void write_run_outputs(const RunConfig& cfg, const RunOutput& out, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path base(dir);
    write_text_file((base / "manifest.json").string(), manifest_json(cfg, out));
    write_text_file((base / "ledger.csv").string(), ledger_csv(out.ledger));
    write_text_file((base / "windows.csv").string(), windows_csv(out.windows));
    if (!out.field_dumps.empty()) {
        const Grid2D grid(cfg.nx, cfg.nz, cfg.L);
        std::error_code ec;
        fs::create_directories(base / "fields", ec);
        if (ec) throw SolverError("cannot create fields directory under " + dir);
        for (const auto& [step, r] : out.field_dumps)
            write_text_file((base / "fields" / ("r_" + std::to_string(step) + ".csv")).string(),
                            field_csv(grid, r));
    }
}

}  // namespace fsi
