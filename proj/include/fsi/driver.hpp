#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/energy.hpp"
#include "fsi/fsp.hpp"
#include "fsi/ssp.hpp"

namespace fsi {

enum class RunStatus { completed, collision };

// Smallness-condition margins for one window; each entry is positive when the
// (sufficient, pessimistic) condition holds. Violations only produce
// warnings: acceptance rests on the measured invariants.
struct AdmissibilityMargins {
    double penalty_chain = 0.0;  // 1 - 8 C(C_r, delta)^2 sqrt(dt)
    double basis_growth = 0.0;   // 1 - sqrt(dt) C(k, E0, delta)
    double gronwall = 0.0;       // 2 - exp(dt sup |div^w U|)
    bool satisfied() const {
        return penalty_chain >= 0.0 && basis_growth >= 0.0 && gronwall >= 0.0;
    }
};

struct WindowRecord {
    std::size_t index = 0;
    double t_end = 0.0;
    double ssp_residual = 0.0;  // max |identity residual| over the window
    double fsp_residual = 0.0;
    std::size_t picard_iterations = 0;
    double picard_update = 0.0;
    double gap_sq = 0.0;  // int over the window of |v - w_t|^2 on Gamma
    double min_j = 0.0;
    double mass_start = 0.0, mass_end = 0.0, production = 0.0;
    double s_end = 0.0, f_end = 0.0;
    double sd = 0.0, fd = 0.0;
    double pen_gap_ssp = 0.0, pen_gap_fsp = 0.0, pen_v_end = 0.0;
    AdmissibilityMargins dt_margins;
};

struct RunOutput {
    RunStatus status = RunStatus::completed;
    std::vector<WindowRecord> windows;
    std::vector<EnergyLedger> ledger;
    TelescopeVerdict telescope;
    double gap_l2 = 0.0;  // ||v - w_t|| over the whole realized horizon
    double e0_total = 0.0;
    double dt = 0.0;
    double horizon_reached = 0.0;
    std::vector<double> continuation_horizons;
    std::vector<std::string> warnings;

    PlateState plate_final;
    Vec alpha_final;
    Field r_final;
    std::vector<std::pair<std::size_t, Field>> field_dumps;  // (window index, r)
};

RunOutput run(const RunConfig& cfg);

// first index at which the two states differ bitwise, if any
std::optional<std::size_t> handoff_mismatch(const Vec& a, const Vec& b);

// Horizon-extension recurrence: T_n = T_{n-1} + (c_{n-1} / (2 C))^4 with
// c_{n-1} the clearance min J observed at T_{n-1}; stops at the first
// nonpositive clearance. The increment is evaluated as a squared square so
// independent reimplementations agree bitwise.
std::vector<double> continuation_schedule(const std::vector<double>& clearances, double c_of_e0,
                                          double t0);

}  // namespace fsi
