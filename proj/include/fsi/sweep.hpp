#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/driver.hpp"

namespace fsi {

// One sweep axis: a config key plus the literal values it takes. Values are
// kept as strings so the table echoes exactly what the plan said.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

// Scalar tabulated per sweep point.
enum class SweepReduction { final_energy, coupling_gap, entropy, mass_drift };

const char* reduction_name(SweepReduction r);
double reduction_value(SweepReduction r, const RunOutput& out);

// A sweep plan is an ordinary config file with extra "sweep." directives:
//   sweep.reduction = coupling_gap            (default when omitted)
//   sweep.axis      = time.N : 4, 8, 16, 32   (repeatable, one per axis)
// All remaining lines form the base config. Every point of the cartesian
// product is validated at parse time.
struct SweepPlan {
    RunConfig base;
    std::vector<SweepAxis> axes;
    SweepReduction reduction = SweepReduction::coupling_gap;

    std::size_t points() const;
    // config of point p; the last axis varies fastest
    RunConfig config_at(std::size_t p) const;
    std::vector<std::string> values_at(std::size_t p) const;
};

SweepPlan parse_sweep_plan(const std::string& text);
SweepPlan load_sweep_plan(const std::string& path);

// Cauchy refinement table: successive-difference norms of a state sampled
// along one parameter ladder, with per-pair order estimates
//   p_j = log(d_{j+1}/d_j) / log(h_{j+1}/h_j)
// (exact for power-law data on a geometric ladder). Needs >= 3 points.
struct CauchyReport {
    std::vector<double> param;  // h_j, the ladder values
    std::vector<double> diff;   // d_j = ||x_{j+1} - x_j||, size n-1
    std::vector<double> pair_order;  // size n-2
    double order = 0.0;              // mean of pair_order
};

CauchyReport cauchy_table(const std::vector<double>& params,
                          const std::vector<Vec>& states);

// Final-time snapshot of a run projected onto a common representation:
// plate deflection and velocity at the coarse cell centers plus density
// sampled at the coarse cell centers, each entry scaled by the square root
// of its quadrature weight so plain Euclidean norms are discrete L2 norms.
Vec comparison_state(const RunConfig& cfg, const RunOutput& out, const Grid2D& coarse);

// cauchy_table over finished runs, projected to the coarsest grid present
CauchyReport cauchy_from_runs(const std::vector<double>& params,
                              const std::vector<RunConfig>& cfgs,
                              const std::vector<RunOutput>& outs);

struct SweepResult {
    std::vector<RunConfig> configs;
    std::vector<RunOutput> outputs;
    std::string table;   // rendered table.csv
    std::string cauchy;  // rendered cauchy.csv; empty unless the plan has one
                         // numeric axis with at least three values
};

// Runs every point of the plan (worker pool of `jobs` threads; 0 means the
// hardware count), writing per-point artifacts to <out_dir>/point_<i> and the
// reduction table to <out_dir>/table.csv. Point outputs and the table are
// functions of the plan alone, so execution order cannot change any file.
SweepResult run_sweep(const SweepPlan& plan, const std::string& out_dir, std::size_t jobs);

}  // namespace fsi
