#include "fsi/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fsi/errors.hpp"
#include "fsi/output.hpp"

namespace fsi {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto piece = trim(s.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// full-string numeric parse; returns false on trailing garbage
bool to_double(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0' && std::isfinite(out);
}

}  // namespace

const char* reduction_name(SweepReduction r) {
    switch (r) {
        case SweepReduction::final_energy: return "final_energy";
        case SweepReduction::coupling_gap: return "coupling_gap";
        case SweepReduction::entropy: return "entropy";
        case SweepReduction::mass_drift: return "mass_drift";
    }
    return "unknown";
}

double reduction_value(SweepReduction r, const RunOutput& out) {
    switch (r) {
        case SweepReduction::final_energy: return out.ledger.back().total();
        case SweepReduction::coupling_gap: return out.gap_l2;
        case SweepReduction::entropy: return out.ledger.back().entropy;
        case SweepReduction::mass_drift: {
            // conservation defect: whatever the balance mass_end - mass_start
            // = production fails to account for, accumulated over windows
            double d = 0.0;
            for (const auto& w : out.windows) d += w.mass_end - w.mass_start - w.production;
            return std::abs(d);
        }
    }
    return 0.0;
}

std::size_t SweepPlan::points() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

RunConfig SweepPlan::config_at(std::size_t p) const {
    RunConfig cfg = base;
    const auto vals = values_at(p);
    for (std::size_t i = 0; i < axes.size(); ++i)
        apply_config_entry(cfg, axes[i].key, vals[i]);
    validate_config(cfg);
    return cfg;
}

std::vector<std::string> SweepPlan::values_at(std::size_t p) const {
    std::vector<std::string> vals(axes.size());
    std::size_t rest = p;
    for (std::size_t i = axes.size(); i-- > 0;) {
        const auto n = axes[i].values.size();
        vals[i] = axes[i].values[rest % n];
        rest /= n;
    }
    return vals;
}

SweepPlan parse_sweep_plan(const std::string& text) {
    SweepPlan plan;
    std::string base_text;
    std::istringstream in(text);
    std::size_t lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("sweep.", 0) != 0) {
            base_text += line + "\n";
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("plan line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "sweep.reduction") {
            if (value == "final_energy") plan.reduction = SweepReduction::final_energy;
            else if (value == "coupling_gap") plan.reduction = SweepReduction::coupling_gap;
            else if (value == "entropy") plan.reduction = SweepReduction::entropy;
            else if (value == "mass_drift") plan.reduction = SweepReduction::mass_drift;
            else
                throw ConfigError("plan line " + std::to_string(lineno) +
                                  ": unknown reduction '" + value + "'");
        } else if (key == "sweep.axis") {
            const auto colon = value.find(':');
            if (colon == std::string::npos)
                throw ConfigError("plan line " + std::to_string(lineno) +
                                  ": axis needs '<key> : v1, v2, ...'");
            SweepAxis axis;
            axis.key = trim(value.substr(0, colon));
            axis.values = split_list(value.substr(colon + 1));
            if (axis.key.empty() || axis.values.empty())
                throw ConfigError("plan line " + std::to_string(lineno) +
                                  ": empty axis key or value list");
            for (const auto& a : plan.axes)
                if (a.key == axis.key)
                    throw ConfigError("plan line " + std::to_string(lineno) +
                                      ": duplicate axis '" + axis.key + "'");
            plan.axes.push_back(std::move(axis));
        } else {
            throw ConfigError("plan line " + std::to_string(lineno) +
                              ": unknown sweep directive '" + key + "'");
        }
    }
    plan.base = parse_config_text(base_text);
    // surface bad axis keys/values now, not mid-sweep
    for (std::size_t p = 0; p < plan.points(); ++p) (void)plan.config_at(p);
    return plan;
}

SweepPlan load_sweep_plan(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open plan file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep_plan(buf.str());
}

CauchyReport cauchy_table(const std::vector<double>& params, const std::vector<Vec>& states) {
    if (params.size() < 3) throw ConfigError("cauchy table needs at least 3 ladder points");
    if (states.size() != params.size())
        throw ConfigError("cauchy table: params and states disagree in length");
    for (const auto& s : states)
        if (s.size() != states.front().size())
            throw ConfigError("cauchy table: incompatible state sizes (project first)");
    for (std::size_t j = 0; j + 1 < params.size(); ++j)
        if (params[j] == params[j + 1])
            throw ConfigError("cauchy table: ladder values must be distinct");

    CauchyReport rep;
    rep.param = params;
    for (std::size_t j = 0; j + 1 < states.size(); ++j)
        rep.diff.push_back((states[j + 1] - states[j]).norm());
    bool degenerate = false;
    for (const double d : rep.diff) degenerate = degenerate || d == 0.0;
    for (std::size_t j = 0; j + 1 < rep.diff.size(); ++j) {
        const double p = degenerate ? 0.0
                                    : std::log(rep.diff[j + 1] / rep.diff[j]) /
                                          std::log(params[j + 1] / params[j]);
        rep.pair_order.push_back(p);
        rep.order += p;
    }
    if (!rep.pair_order.empty()) rep.order /= double(rep.pair_order.size());
    return rep;
}

Vec comparison_state(const RunConfig& cfg, const RunOutput& out, const Grid2D& coarse) {
    const PlateBasis pb = make_plate_basis(cfg.k, cfg.L);
    const Grid2D fine(cfg.nx, cfg.nz, cfg.L);
    const std::size_t n = coarse.nx;
    Vec s(2 * n + coarse.cells());
    const double wl = std::sqrt(coarse.hx());
    const double wa = std::sqrt(coarse.cell_area());
    for (std::size_t i = 0; i < n; ++i) {
        s[Eigen::Index(i)] = wl * pb.field(out.plate_final.beta, coarse.xc(i), 0);
        s[Eigen::Index(n + i)] = wl * pb.field(out.plate_final.gamma, coarse.xc(i), 0);
    }
    for (std::size_t j = 0; j < coarse.nz; ++j)
        for (std::size_t i = 0; i < coarse.nx; ++i)
            s[Eigen::Index(2 * n + coarse.idx(i, j))] =
                wa * bilinear_sample(fine, out.r_final, coarse.xc(i), coarse.zc(j));
    return s;
}

CauchyReport cauchy_from_runs(const std::vector<double>& params,
                              const std::vector<RunConfig>& cfgs,
                              const std::vector<RunOutput>& outs) {
    if (cfgs.size() != outs.size() || cfgs.size() != params.size())
        throw ConfigError("cauchy table: mismatched run list lengths");
    if (cfgs.empty()) throw ConfigError("cauchy table: no runs");
    std::size_t nx = cfgs.front().nx, nz = cfgs.front().nz;
    for (const auto& c : cfgs) {
        if (c.L != cfgs.front().L)
            throw ConfigError("cauchy table: incompatible resolutions (L differs)");
        nx = std::min(nx, c.nx);
        nz = std::min(nz, c.nz);
    }
    const Grid2D coarse(nx, nz, cfgs.front().L);
    std::vector<Vec> states;
    states.reserve(outs.size());
    for (std::size_t i = 0; i < outs.size(); ++i)
        states.push_back(comparison_state(cfgs[i], outs[i], coarse));
    return cauchy_table(params, states);
}

namespace {

std::string point_dir_name(std::size_t i, std::size_t total) {
    int width = 4;
    for (std::size_t v = total; v > 10000; v /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "point_%0*zu", width, i);
    return buf;
}

std::string render_table(const SweepPlan& plan, const std::vector<double>& reductions) {
    std::ostringstream os;
    os << "point";
    for (const auto& a : plan.axes) os << ',' << a.key;
    os << ',' << reduction_name(plan.reduction) << '\n';
    for (std::size_t p = 0; p < reductions.size(); ++p) {
        os << p;
        for (const auto& v : plan.values_at(p)) os << ',' << v;
        os << ',' << num(reductions[p]) << '\n';
    }
    return os.str();
}

std::string render_cauchy(const CauchyReport& rep) {
    std::ostringstream os;
    os << "pair,param_from,param_to,diff,pair_order\n";
    for (std::size_t j = 0; j < rep.diff.size(); ++j) {
        os << j << ',' << num(rep.param[j]) << ',' << num(rep.param[j + 1]) << ','
           << num(rep.diff[j]) << ',';
        if (j > 0) os << num(rep.pair_order[j - 1]);
        os << '\n';
    }
    return os.str();
}

// numeric ladder of a single-axis plan; time.N values are mapped to the
// window length T/N so the order estimate reads against the natural step
bool numeric_ladder(const SweepPlan& plan, std::vector<double>& params) {
    if (plan.axes.size() != 1 || plan.axes[0].values.size() < 3) return false;
    params.clear();
    for (const auto& v : plan.axes[0].values) {
        double x = 0.0;
        if (!to_double(v, x)) return false;
        if (plan.axes[0].key == "time.N") {
            if (x <= 0.0) return false;
            x = plan.base.T / x;
        }
        params.push_back(x);
    }
    for (std::size_t j = 0; j + 1 < params.size(); ++j)
        if (params[j] == params[j + 1]) return false;
    return true;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const std::string& out_dir, std::size_t jobs) {
    namespace fs = std::filesystem;
    const std::size_t n = plan.points();
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, n);

    SweepResult res;
    res.configs.resize(n);
    res.outputs.resize(n);
    std::vector<std::string> dirs(n);
    for (std::size_t p = 0; p < n; ++p) {
        res.configs[p] = plan.config_at(p);
        dirs[p] = (fs::path(out_dir) / point_dir_name(p, n)).string();
        prepare_output_dir(dirs[p], false);
    }

    // worker pool; points claim indices from a shared counter and own their
    // output slots, so the realized interleaving cannot affect any result
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t p = next.fetch_add(1);
            if (p >= n) return;
            try {
                res.outputs[p] = run(res.configs[p]);
                write_run_outputs(res.configs[p], res.outputs[p], dirs[p]);
            } catch (...) {
                failures[p] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t p = 0; p < n; ++p)
        if (failures[p]) std::rethrow_exception(failures[p]);

    std::vector<double> reductions(n);
    for (std::size_t p = 0; p < n; ++p)
        reductions[p] = reduction_value(plan.reduction, res.outputs[p]);
    res.table = render_table(plan, reductions);
    write_text_file((fs::path(out_dir) / "table.csv").string(), res.table);

    std::vector<double> params;
    if (numeric_ladder(plan, params)) {
        res.cauchy = render_cauchy(cauchy_from_runs(params, res.configs, res.outputs));
        write_text_file((fs::path(out_dir) / "cauchy.csv").string(), res.cauchy);
    }
    return res;
}

}  // namespace fsi
