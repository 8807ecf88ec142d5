#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsi/ssp.hpp"

namespace fsi {

// Full parameter set of one run. Parsed from flat "section.key = value" text;
// unknown keys are rejected so sweep templating cannot silently typo.
struct RunConfig {
    // geometry
    double L = 1.0;
    std::size_t nx = 32, nz = 16;

    // time: N splitting windows of length T/N
    double T = 0.4;
    std::size_t N = 8;
    std::size_t fsp_substeps = 8;

    // bases and quadrature
    std::size_t k = 3;
    std::size_t lifting_intervals = 128;
    std::size_t quad_x = 26, quad_z = 20;
    std::size_t nonlin_quad = 44;
    std::size_t pair_quad = 40;

    // fluid
    double gamma_exp = 2.0;
    double mu = 1.0, lambda = 0.0;
    double eps = 0.05;
    double delta = 1e-3;  // shared by the artificial pressure and the plate regularizer
    double a_exp = 9.0;
    double fx = 0.0, fz = 0.0;

    // plate nonlinearity
    std::string nonlinearity = "cubic";  // linear | cubic | berger
    double q1 = 1.0, q2 = 0.0;

    // solver controls
    double picard_tol = 1e-10;
    std::size_t picard_max = 40;
    double collision_floor = 1e-6;
    std::size_t transport_substeps_per = 2;
    bool rannacher = true;

    // initial data (modal lists may be shorter than k resp. 2k; zero-padded)
    std::vector<double> init_beta, init_gamma, init_theta, init_velocity;
    double init_density = 1.0;
    double init_density_wiggle = 0.0;  // amplitude of a cos(pi x / L) profile

    // output cadence
    std::size_t ledger_every = 1;
    std::size_t fields_every = 0;  // 0: no field dumps
    std::uint64_t seed = 0;

    // lifespan extension
    bool continuation_enable = false;
    std::size_t continuation_steps = 0;

    double dt() const { return T / static_cast<double>(N); }
    // structure substeps per window; 4x the fluid substep rate keeps the
    // interpolated-trace kinks on structure substep boundaries
    std::size_t ssp_substeps() const { return std::max<std::size_t>(16, 4 * fsp_substeps); }
    NonlinearitySpec nonlinearity_spec() const;
};

// set one dotted key; throws ConfigError on unknown key or malformed value
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config_text(const std::string& text);  // validates before returning
RunConfig load_config(const std::string& path);
void validate_config(const RunConfig& cfg);

// canonical full echo, fixed key order, round-trippable through the parser
std::string config_echo(const RunConfig& cfg);

}  // namespace fsi
