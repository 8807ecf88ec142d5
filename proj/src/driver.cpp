#include "fsi/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

constexpr double kPi = 3.14159265358979323846;

// single extension increment, written as a squared square so the exported
// schedule, the in-run policy and any reimplementation agree bitwise
double continuation_increment(double clearance, double c_of_e0) {
    const double q = clearance / (2.0 * c_of_e0);
    const double q2 = q * q;
    return q2 * q2;
}

Vec padded(const std::vector<double>& v, std::size_t n) {
    Vec out = Vec::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < v.size() && i < n; ++i) out[Eigen::Index(i)] = v[i];
    return out;
}

// sup over the quadrature grid of |div^w U|, the Gronwall rate of the
// density envelope
double sup_transformed_divergence(const FspSystem& sys, const Vec& beta, const Vec& alpha) {
    const auto ox = sys.qx.size(), oz = sys.qz.size();
    const auto nm = sys.fluid.size();
    const Vec wq = sys.p0_quad.transpose() * beta;
    const Vec wxq = sys.p1_quad.transpose() * beta;
    double sup = 0.0;
    for (std::size_t iz = 0; iz < oz; ++iz) {
        const double zp1 = sys.qz.x[iz] + 1.0;
        for (std::size_t ix = 0; ix < ox; ++ix) {
            const double J = 1.0 + wq[Eigen::Index(ix)];
            const double slope = zp1 * wxq[Eigen::Index(ix)] / J;
            const std::size_t p = ix + ox * iz;
            double dX0 = 0.0, dz0 = 0.0, dz1 = 0.0;
            for (std::size_t m = 0; m < nm; ++m) {
                const double* v = sys.quad_tab.at(m, p);
                const double am = alpha[Eigen::Index(m)];
                dX0 += am * v[2];
                dz0 += am * v[4];
                dz1 += am * v[5];
            }
            sup = std::max(sup, std::abs(dX0 - slope * dz0 + dz1 / J));
        }
    }
    return sup;
}

double min_clearance(const FspSystem& sys, const PlateTrajectory& motion) {
    double mn = std::numeric_limits<double>::max();
    for (const Vec& b : motion.beta) {
        const Vec w = sys.p0_face.transpose() * b;
        mn = std::min(mn, 1.0 + w.minCoeff());
    }
    return mn;
}

}  // namespace

std::optional<std::size_t> handoff_mismatch(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return std::size_t(0);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (std::memcmp(&a[i], &b[i], sizeof(double)) != 0) return std::size_t(i);
    return std::nullopt;
}

std::vector<double> continuation_schedule(const std::vector<double>& clearances, double c_of_e0,
                                          double t0) {
    std::vector<double> horizons = {t0};
    double t = t0;
    for (const double c : clearances) {
        if (!(c > 0.0)) break;
        t += continuation_increment(c, c_of_e0);
        horizons.push_back(t);
    }
    return horizons;
}

RunOutput run(const RunConfig& cfg) {
    const double dt = cfg.dt();
    const auto k = cfg.k;

    const PlateBasis plate = make_plate_basis(k, cfg.L);
    const HeatBasis heat{cfg.L, k};
    const CoupledMatrices cm = assemble_coupled_matrices(plate, heat, cfg.pair_quad);
    const FluidBasis fluid = make_fluid_basis(k, cfg.L, plate, cfg.lifting_intervals);

    SspSystem ssys(plate, heat, cm, cfg.nonlinearity_spec(), dt, cfg.delta, cfg.nonlin_quad);

    FspParams fpar;
    fpar.mu = cfg.mu;
    fpar.lambda = cfg.lambda;
    fpar.gamma_exp = cfg.gamma_exp;
    fpar.a_exp = cfg.a_exp;
    fpar.delta = cfg.delta;
    fpar.eps = cfg.eps;
    fpar.dt = dt;
    fpar.fx = cfg.fx;
    fpar.fz = cfg.fz;
    fpar.collision_floor = cfg.collision_floor;
    fpar.quad_x = cfg.quad_x;
    fpar.quad_z = cfg.quad_z;
    const Grid2D grid(cfg.nx, cfg.nz, cfg.L);
    FspSystem fsys(plate, fluid, grid, fpar);

    PicardOptions popt;
    popt.max_iterations = cfg.picard_max;
    popt.tolerance = cfg.picard_tol;
    popt.transport_substeps_per = cfg.transport_substeps_per;
    popt.rannacher = cfg.rannacher;

    // initial data; the density floor only engages on pathological input
    PlateState ps;
    ps.beta = padded(cfg.init_beta, k);
    ps.gamma = padded(cfg.init_gamma, k);
    ps.alpha = padded(cfg.init_theta, k);
    ps.t = 0.0;
    Vec alpha = padded(cfg.init_velocity, 2 * k);
    Field r(grid.cells());
    for (std::size_t j = 0; j < grid.nz; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            r[Eigen::Index(grid.idx(i, j))] =
                cfg.init_density +
                cfg.init_density_wiggle * std::cos(kPi * grid.xc(i) / cfg.L);
    const double rfloor = 1e-3 * r.mean();
    r = r.cwiseMax(rfloor);

    RunOutput out;
    out.dt = dt;
    out.ledger.push_back(compute_ledger(fsys, ssys, ps, alpha, r));
    out.e0_total = out.ledger.front().total();
    const double v0_trace_sq = alpha.tail(Eigen::Index(k)).squaredNorm();
    const CoercivityWitness cw = coercivity_witness(cfg.nonlinearity_spec());

    // the basis-growth constant is fixed for the whole run
    const double c_basis =
        std::pow(plate.xi(k - 1), 0.125) *
        std::sqrt(4.0 * (out.e0_total + cfg.T * std::sqrt(dt)));

    TraceHistory trace = TraceHistory::constant(alpha.tail(Eigen::Index(k)), 0.0, dt);
    std::vector<WindowEnergyTotals> totals;
    Vec end_beta = ps.beta;  // window-exit snapshots for the handoff contract
    Field end_r = r;

    double target_horizon = cfg.T;
    std::size_t remaining_extensions = cfg.continuation_enable ? cfg.continuation_steps : 0;
    out.continuation_horizons.push_back(target_horizon);

    std::size_t win = 0;
    bool collided = false;
    while (!collided) {
        const double t0 = static_cast<double>(win) * dt;
        if (t0 + 0.5 * dt >= target_horizon) {
            // horizon reached; extend it if the policy still grants time
            if (remaining_extensions == 0) break;
            const double clearance = out.windows.empty()
                                         ? 1.0 + (fsys.p0_face.transpose() * ps.beta).minCoeff()
                                         : out.windows.back().min_j;
            if (clearance <= cfg.collision_floor) break;
            target_horizon +=
                continuation_increment(clearance, out.e0_total + cw.cstar + 1.0);
            out.continuation_horizons.push_back(target_horizon);
            --remaining_extensions;
            continue;
        }

        // handoff contract: the states entering this window are bit-identical
        // to the states the previous window produced
        if (handoff_mismatch(ps.beta, end_beta) || handoff_mismatch(r, end_r))
            throw InvariantError("window " + std::to_string(win) + ": handoff mismatch");

        WindowRecord rec;
        rec.index = win;
        rec.t_end = t0 + dt;
        try {
            const SspWindowOutput sout =
                ssp_step(ssys, ps, trace, dt, cfg.ssp_substeps());
            const PlateTrajectory motion = PlateTrajectory::from(sout);

            const FspResult fres = fsp_step(fsys, r, alpha, motion, t0, dt,
                                            cfg.fsp_substeps, popt);
            const FspIdentityReport rep = fsp_energy_identity(fsys, fres, motion);

            rec.ssp_residual = sout.max_abs_residual;
            rec.fsp_residual = rep.residual;
            rec.picard_iterations = fres.iterations;
            rec.picard_update = fres.last_update;
            rec.gap_sq = rep.trace_gap;
            rec.min_j = min_clearance(fsys, motion);
            rec.mass_start = fres.density.mass_start;
            rec.mass_end = fres.density.mass_end;
            rec.production = fres.density.production;  // mass through the lid
            rec.sd = sout.dissipation.back();
            rec.fd = rep.dissipation;
            rec.pen_gap_ssp = sout.pen_gap / (4.0 * dt);
            rec.pen_gap_fsp = rep.trace_gap / (4.0 * dt);
            rec.pen_v_end = rep.trace_v / (4.0 * dt);

            // advance the states and the lagged trace
            ps.beta = sout.beta.back();
            ps.gamma = sout.gamma.back();
            ps.alpha = sout.alpha.back();
            ps.t = t0 + dt;
            alpha = fres.alpha.back();
            r = fres.density.r.back();
            end_beta = ps.beta;
            end_r = r;

            TraceHistory next;
            next.t0 = t0 + dt;
            next.dt_sample = dt / static_cast<double>(cfg.fsp_substeps);
            next.samples.clear();
            for (const Vec& a : fres.alpha) next.samples.push_back(a.tail(Eigen::Index(k)));
            trace = next;

            const EnergyLedger led = compute_ledger(fsys, ssys, ps, alpha, r);
            rec.s_end = led.plate_total();
            rec.f_end = led.fluid_total();
            if ((win + 1) % cfg.ledger_every == 0) out.ledger.push_back(led);
            if (cfg.fields_every > 0 && (win + 1) % cfg.fields_every == 0)
                out.field_dumps.emplace_back(win, r);

            const double c_pen =
                std::sqrt(cfg.L) * pressure_potential_of(fpar, fres.density.max_value);
            rec.dt_margins.penalty_chain = 1.0 - 8.0 * c_pen * c_pen * std::sqrt(dt);
            rec.dt_margins.basis_growth = 1.0 - std::sqrt(dt) * c_basis;
            double divsup = 0.0;
            for (std::size_t m = 0; m < fres.times.size(); ++m) {
                Vec b, g;
                motion.sample(fres.times[m], b, g);
                divsup = std::max(divsup, sup_transformed_divergence(fsys, b, fres.alpha[m]));
            }
            rec.dt_margins.gronwall = 2.0 - std::exp(dt * divsup);
            if (!rec.dt_margins.satisfied())
                out.warnings.push_back("window " + std::to_string(win) +
                                       ": dt smallness condition not met (advisory)");

            WindowEnergyTotals wt;
            wt.s_end = rec.s_end;
            wt.f_end = rec.f_end;
            wt.sd = rec.sd;
            wt.fd = rec.fd;
            wt.pen_gap_ssp = rec.pen_gap_ssp;
            wt.pen_gap_fsp = rec.pen_gap_fsp;
            wt.pen_v_end = rec.pen_v_end;
            wt.production = rep.production;  // energy-weighted boundary work
            wt.ssp_residual = sout.residual.back();
            wt.fsp_residual = rep.residual;
            totals.push_back(wt);

            out.windows.push_back(rec);
            out.gap_l2 += rec.gap_sq;

            if (rec.min_j <= cfg.collision_floor) {
                out.warnings.push_back("window " + std::to_string(win) +
                                       ": clearance reached the collision floor");
                collided = true;
            }
        } catch (const DegenerateMapError& e) {
            out.warnings.push_back("window " + std::to_string(win) + ": " +
                                   std::string(e.what()));
            collided = true;
        } catch (const SolverError& e) {
            throw SolverError("window " + std::to_string(win) + ": " + std::string(e.what()));
        }
        ++win;
    }

    out.status = collided ? RunStatus::collision : RunStatus::completed;
    out.horizon_reached = out.windows.empty() ? 0.0 : out.windows.back().t_end;
    out.gap_l2 = std::sqrt(out.gap_l2);
    out.telescope = telescoped_bound_verdict(out.e0_total, v0_trace_sq, cw.cstar,
                                             std::max(cfg.T, out.horizon_reached), dt, totals);
    if (!out.telescope.pass)
        out.warnings.push_back("telescoped energy bound violated");

    out.plate_final = ps;
    out.alpha_final = alpha;
    out.r_final = r;
    if (!out.windows.empty() && out.ledger.back().t != out.windows.back().t_end)
        out.ledger.push_back(compute_ledger(fsys, ssys, ps, alpha, r));
    return out;
}

}  // namespace fsi
