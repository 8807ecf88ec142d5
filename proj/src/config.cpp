#include "fsi/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

std::size_t parse_size(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x < 0 || x != static_cast<double>(static_cast<std::size_t>(x)))
        throw ConfigError("config key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt(std::size_t x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }
std::string fmt(const std::string& x) { return x; }
std::string fmt(const std::vector<double>& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ' ';
        s += fmt(x[i]);
    }
    return s;
}

struct KeyDef {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
KeyDef key(const char* name, T RunConfig::* member) {
    KeyDef d;
    d.name = name;
    d.get = [member](const RunConfig& c) { return fmt(c.*member); };
    d.set = [name, member](RunConfig& c, const std::string& v) {
        if constexpr (std::is_same_v<T, double>)
            c.*member = parse_double(name, v);
        else if constexpr (std::is_same_v<T, std::size_t>)
            c.*member = parse_size(name, v);
        else if constexpr (std::is_same_v<T, bool>)
            c.*member = parse_bool(name, v);
        else if constexpr (std::is_same_v<T, std::string>)
            c.*member = v;
        else if constexpr (std::is_same_v<T, std::vector<double>>)
            c.*member = parse_list(name, v);
        else if constexpr (std::is_same_v<T, std::uint64_t>)
            c.*member = static_cast<std::uint64_t>(parse_size(name, v));
    };
    return d;
}

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> table = {
        key("geometry.L", &RunConfig::L),
        key("geometry.nx", &RunConfig::nx),
        key("geometry.nz", &RunConfig::nz),
        key("time.T", &RunConfig::T),
        key("time.N", &RunConfig::N),
        key("time.fsp_substeps", &RunConfig::fsp_substeps),
        key("basis.k", &RunConfig::k),
        key("basis.lifting_intervals", &RunConfig::lifting_intervals),
        key("basis.quad_x", &RunConfig::quad_x),
        key("basis.quad_z", &RunConfig::quad_z),
        key("basis.nonlin_quad", &RunConfig::nonlin_quad),
        key("basis.pair_quad", &RunConfig::pair_quad),
        key("fluid.gamma", &RunConfig::gamma_exp),
        key("fluid.mu", &RunConfig::mu),
        key("fluid.lambda", &RunConfig::lambda),
        key("fluid.eps", &RunConfig::eps),
        key("fluid.delta", &RunConfig::delta),
        key("fluid.a", &RunConfig::a_exp),
        key("fluid.fx", &RunConfig::fx),
        key("fluid.fz", &RunConfig::fz),
        key("plate.nonlinearity", &RunConfig::nonlinearity),
        key("plate.q1", &RunConfig::q1),
        key("plate.q2", &RunConfig::q2),
        key("solver.picard_tol", &RunConfig::picard_tol),
        key("solver.picard_max", &RunConfig::picard_max),
        key("solver.collision_floor", &RunConfig::collision_floor),
        key("solver.transport_substeps_per", &RunConfig::transport_substeps_per),
        key("solver.rannacher", &RunConfig::rannacher),
        key("init.beta", &RunConfig::init_beta),
        key("init.gamma", &RunConfig::init_gamma),
        key("init.theta", &RunConfig::init_theta),
        key("init.velocity", &RunConfig::init_velocity),
        key("init.density", &RunConfig::init_density),
        key("init.density_wiggle", &RunConfig::init_density_wiggle),
        key("output.ledger_every", &RunConfig::ledger_every),
        key("output.fields_every", &RunConfig::fields_every),
        key("run.seed", &RunConfig::seed),
        key("continuation.enable", &RunConfig::continuation_enable),
        key("continuation.steps", &RunConfig::continuation_steps),
    };
    return table;
}

}  // namespace

NonlinearitySpec RunConfig::nonlinearity_spec() const {
    NonlinearitySpec nl;
    nl.q1 = q1;
    nl.q2 = q2;
    if (nonlinearity == "linear")
        nl.kind = NonlinearitySpec::Kind::linear_zero;
    else if (nonlinearity == "cubic")
        nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    else if (nonlinearity == "berger")
        nl.kind = NonlinearitySpec::Kind::berger_type;
    else
        throw ConfigError("plate.nonlinearity must be linear, cubic or berger");
    return nl;
}

void apply_config_entry(RunConfig& cfg, const std::string& key_name, const std::string& value) {
    for (const auto& d : key_table()) {
        if (key_name == d.name) {
            d.set(cfg, value);
            return;
        }
    }
    throw ConfigError("unknown config key: " + key_name);
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate_config(const RunConfig& c) {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    need(c.L > 0.0, "geometry.L must be positive");
    need(c.nx >= 2 && c.nz >= 2, "geometry.nx and geometry.nz must be at least 2");
    need(c.T > 0.0, "time.T must be positive");
    need(c.N >= 1, "time.N must be at least 1");
    need(c.fsp_substeps >= 1, "time.fsp_substeps must be at least 1");
    need(c.k >= 1, "basis.k must be at least 1");
    need(c.lifting_intervals >= 8, "basis.lifting_intervals must be at least 8");
    need(c.quad_x >= 4 && c.quad_z >= 4, "basis.quad_x and basis.quad_z must be at least 4");
    need(c.nonlin_quad >= 4 && c.pair_quad >= 4, "nonlinearity/pair quadrature too small");
    need(c.gamma_exp > 1.0, "fluid.gamma must exceed 1 for the planar model");
    need(c.mu > 0.0, "fluid.mu must be positive");
    need(c.lambda + 2.0 * c.mu / 3.0 > 0.0, "fluid.lambda + 2 mu / 3 must be positive");
    need(c.eps > 0.0, "fluid.eps must be positive");
    need(c.delta >= 0.0, "fluid.delta must be nonnegative");
    need(c.a_exp >= 9.0, "fluid.a must be at least 9");
    need(c.picard_tol > 0.0, "solver.picard_tol must be positive");
    need(c.picard_max >= 1, "solver.picard_max must be at least 1");
    need(c.collision_floor > 0.0, "solver.collision_floor must be positive");
    need(c.transport_substeps_per >= 2 && c.transport_substeps_per % 2 == 0,
         "solver.transport_substeps_per must be even and at least 2");
    need(c.init_beta.size() <= c.k, "init.beta longer than basis.k");
    need(c.init_gamma.size() <= c.k, "init.gamma longer than basis.k");
    need(c.init_theta.size() <= c.k, "init.theta longer than basis.k");
    need(c.init_velocity.size() <= 2 * c.k, "init.velocity longer than 2 basis.k");
    need(c.init_density > 0.0, "init.density must be positive");
    need(c.init_density - std::abs(c.init_density_wiggle) > 0.0,
         "init.density_wiggle would produce a nonpositive density");
    need(c.ledger_every >= 1, "output.ledger_every must be at least 1");
    c.nonlinearity_spec();  // validates the selector and parameters
    if (c.nonlinearity == "berger") need(c.q1 > 0.0, "plate.q1 must be positive for berger");
}

std::string config_echo(const RunConfig& cfg) {
    std::string out;
    for (const auto& d : key_table()) {
        out += d.name;
        out += " = ";
        out += d.get(cfg);
        out += '\n';
    }
    return out;
}

}  // namespace fsi
