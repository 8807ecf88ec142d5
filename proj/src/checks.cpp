#include "fsi/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "fsi/ale.hpp"
#include "fsi/bases.hpp"
#include "fsi/config.hpp"
#include "fsi/driver.hpp"
#include "fsi/energy.hpp"
#include "fsi/fsp.hpp"
#include "fsi/ssp.hpp"

namespace fsi {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// -----------------------------------------------------------------------
// 1. plate/heat window identity: S(t) + dissipation + penalty integrals
//    returns to S(0) plus the forcing integrals, with a residual that only
//    contains integrator error (order 4); doubling substeps must shrink it
//    by at least 8x
// -----------------------------------------------------------------------
CheckResult check_ssp_energy_identity() {
    const PlateBasis plate = make_plate_basis(1, 1.0);
    const HeatBasis heat{1.0, 1};
    const CoupledMatrices cm = assemble_coupled_matrices(plate, heat, 40);
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    const double window = 0.1;
    const SspSystem sys(plate, heat, cm, nl, window, 1e-3, 44);

    PlateState s0;
    s0.beta = Vec::Constant(1, 0.02);
    s0.gamma = Vec::Constant(1, 0.0);
    s0.alpha = Vec::Constant(1, 0.10);
    s0.t = 0.0;

    // sampled trace forcing; kinks at window/16 land on substep boundaries
    // for both substep counts, so interpolation does not cap the order
    TraceHistory trace;
    trace.t0 = 0.0;
    trace.dt_sample = window / 16.0;
    for (int j = 0; j <= 16; ++j)
        trace.samples.push_back(Vec::Constant(1, 0.15 * std::sin(2.0 * kPi * j / 16.0)));

    const SspWindowOutput coarse = ssp_step(sys, s0, trace, window, 64);
    const SspWindowOutput fine = ssp_step(sys, s0, trace, window, 128);
    const double allowance = 1e-8 * (sys.energy(s0) + 1.0);
    const double ratio = coarse.max_abs_residual / std::max(fine.max_abs_residual, 1e-300);

    CheckResult r;
    r.name = "ssp_energy_identity";
    r.measured = coarse.max_abs_residual;
    r.limit = allowance;
    r.pass = coarse.max_abs_residual <= allowance && ratio >= 8.0;
    r.detail = "residual(64)=" + fmt(coarse.max_abs_residual) + " <= " + fmt(allowance) +
               ", refinement ratio " + fmt(ratio) + " >= 8";
    return r;
}

// -----------------------------------------------------------------------
// 2. density envelope: over randomized geometry/velocity windows the
//    transported density stays within min/max r0 scaled by
//    exp(+-int sup |div^w U|), inflated by 1e-6
// -----------------------------------------------------------------------
CheckResult check_density_envelope() {
    const std::size_t k = 2;
    const double L = 1.0;
    const PlateBasis plate = make_plate_basis(k, L);
    const FluidBasis fluid = make_fluid_basis(k, L, plate, 128);
    const Grid2D grid(32, 16, L);
    FspParams par;
    par.dt = 0.05;
    const FspSystem sys(plate, fluid, grid, par);

    // probe set for the divergence supremum, denser than the grid
    const std::size_t px = 48, pz = 24;
    std::vector<double> probe_x(px * pz), probe_z(px * pz);
    for (std::size_t j = 0; j < pz; ++j)
        for (std::size_t i = 0; i < px; ++i) {
            probe_x[i + px * j] = (double(i) + 0.5) * L / double(px);
            probe_z[i + px * j] = -1.0 + (double(j) + 0.5) / double(pz);
        }
    FluidBasisTable ptab;
    ptab.build(fluid, probe_x, probe_z);
    Mat s0(k, px), s1(k, px);
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t i = 0; i < px; ++i) {
            s0(Eigen::Index(m), Eigen::Index(i)) = plate.eval(m, probe_x[i], 0);
            s1(Eigen::Index(m), Eigen::Index(i)) = plate.eval(m, probe_x[i], 1);
        }

    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> ub(-0.05, 0.05), ug(-0.25, 0.25),
        ua(-0.35, 0.35), uc(-0.2, 0.2);

    const double window = 0.05;
    const std::size_t substeps = 16, refine = 4;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Vec b0(k), g0(k), alpha(2 * k);
        for (std::size_t i = 0; i < k; ++i) {
            b0[Eigen::Index(i)] = ub(rng);
            g0[Eigen::Index(i)] = ug(rng);
        }
        for (std::size_t i = 0; i < 2 * k; ++i) alpha[Eigen::Index(i)] = ua(rng);

        PlateTrajectory motion;
        motion.times = {0.0, window};
        motion.beta = {b0, b0 + window * g0};
        motion.gamma = {g0, g0};
        const VelocityTrajectory vel = VelocityTrajectory::constant(alpha, 0.0, window);

        const double a1 = uc(rng), a2 = uc(rng), a3 = uc(rng);
        Field r0(grid.cells());
        for (std::size_t j = 0; j < grid.nz; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i) {
                const double x = grid.xc(i), z = grid.zc(j);
                r0[Eigen::Index(grid.idx(i, j))] =
                    1.0 + a1 * std::cos(kPi * x / L) * std::cos(kPi * (z + 1.0)) +
                    a2 * std::cos(2.0 * kPi * x / L) + a3 * std::cos(2.0 * kPi * (z + 1.0));
            }

        const auto res =
            sys.transport.advance(r0, 0.0, window, substeps, sys.provider(motion, vel), true);

        // velocity is constant in time; tabulate its probe derivatives once
        std::vector<double> dx0(px * pz, 0.0), dz0(px * pz, 0.0), dz1(px * pz, 0.0);
        for (std::size_t p = 0; p < px * pz; ++p)
            for (std::size_t m = 0; m < 2 * k; ++m) {
                const double* v = ptab.at(m, p);
                const double am = alpha[Eigen::Index(m)];
                dx0[p] += am * v[2];
                dz0[p] += am * v[4];
                dz1[p] += am * v[5];
            }

        // cumulative trapezoid of sup_x |div^w U| on a 4x refined time grid
        const std::size_t nf = substeps * refine;
        std::vector<double> cumulative(nf + 1, 0.0);
        double prev_sup = 0.0;
        for (std::size_t m = 0; m <= nf; ++m) {
            const double t = window * double(m) / double(nf);
            const Vec bt = b0 + t * g0;
            const Vec w = s0.transpose() * bt;
            const Vec wx = s1.transpose() * bt;
            double sup = 0.0;
            for (std::size_t j = 0; j < pz; ++j) {
                const double zp1 = probe_z[px * j] + 1.0;
                for (std::size_t i = 0; i < px; ++i) {
                    const double J = 1.0 + w[Eigen::Index(i)];
                    const double slope = zp1 * wx[Eigen::Index(i)] / J;
                    const std::size_t p = i + px * j;
                    sup = std::max(sup, std::abs(dx0[p] - slope * dz0[p] + dz1[p] / J));
                }
            }
            if (m > 0)
                cumulative[m] = cumulative[m - 1] +
                                0.5 * (sup + prev_sup) * window / double(nf);
            prev_sup = sup;
        }

        const double rmin0 = r0.minCoeff(), rmax0 = r0.maxCoeff();
        for (std::size_t m = 0; m < res.r.size(); ++m) {
            const double I = cumulative[std::min(m * refine, nf)];
            const double lo = rmin0 * std::exp(-I);
            const double hi = rmax0 * std::exp(I);
            worst = std::max(worst, (lo - res.r[m].minCoeff()) / lo);
            worst = std::max(worst, (res.r[m].maxCoeff() - hi) / hi);
        }
        // startup half-steps are included in the global extrema; hold them
        // to the full-window envelope
        const double lo = rmin0 * std::exp(-cumulative[nf]);
        const double hi = rmax0 * std::exp(cumulative[nf]);
        worst = std::max(worst, (lo - res.min_value) / lo);
        worst = std::max(worst, (res.max_value - hi) / hi);
    }

    CheckResult r;
    r.name = "density_envelope";
    r.measured = worst;
    r.limit = 1e-6;
    r.pass = worst <= 1e-6;
    r.detail = "worst relative envelope violation " + fmt(worst) + " <= 1e-06 (100 windows)";
    return r;
}

// -----------------------------------------------------------------------
// 3. mass accounting: per window the drift of int J r stays below 1e-6
//    relative even though the trace gap is nonzero, and the discrete
//    balance mass_end - mass_start = production holds to solver precision
// -----------------------------------------------------------------------
CheckResult check_mass_conservation() {
    RunConfig cfg;
    cfg.k = 2;
    cfg.nx = 32;
    cfg.nz = 16;
    cfg.T = 0.004;
    cfg.N = 8;
    cfg.fsp_substeps = 8;
    cfg.nonlinearity = "cubic";
    cfg.init_beta = {1e-4};
    cfg.init_density = 1.0;
    validate_config(cfg);

    const RunOutput out = run(cfg);
    double worst_drift = 0.0, worst_balance = 0.0, min_gap = 1e300;
    for (const auto& w : out.windows) {
        worst_drift = std::max(worst_drift, std::abs(w.mass_end - w.mass_start) / w.mass_start);
        worst_balance = std::max(
            worst_balance, std::abs(w.mass_end - w.mass_start - w.production) / w.mass_start);
        min_gap = std::min(min_gap, w.gap_sq);
    }

    CheckResult r;
    r.name = "mass_conservation";
    r.measured = worst_drift;
    r.limit = 1e-6;
    r.pass = out.windows.size() == cfg.N && worst_drift <= 1e-6 && min_gap > 1e-16 &&
             worst_balance <= 1e-10;
    r.detail = "max |drift|/mass " + fmt(worst_drift) + " <= 1e-06 with trace gap present" +
               " (min window gap^2 " + fmt(min_gap) + "), flux balance defect " +
               fmt(worst_balance);
    return r;
}

// -----------------------------------------------------------------------
// 4. fluid window identity: the energy balance residual of one fluid window
//    shrinks at order >= 1.5 under combined grid + substep refinement
// -----------------------------------------------------------------------
CheckResult check_fsp_energy_identity() {
    const std::size_t k = 2;
    const double L = 1.0, window = 0.05;
    const PlateBasis plate = make_plate_basis(k, L);
    const FluidBasis fluid = make_fluid_basis(k, L, plate, 128);

    // linear plate motion: beta and gamma stay exactly consistent under the
    // trajectory's linear interpolation, so no motion-sampling error floor
    Vec b0(k), g0(k);
    b0 << 0.03, -0.01;
    g0 << 0.12, 0.05;
    PlateTrajectory motion;
    motion.times = {0.0, window};
    motion.beta = {b0, b0 + window * g0};
    motion.gamma = {g0, g0};

    Vec alpha0 = Vec::Zero(2 * k);
    alpha0[Eigen::Index(k)] = 0.08;  // trace mismatch against g0 drives the penalty

    PicardOptions popt;
    popt.tolerance = 1e-12;
    popt.max_iterations = 60;
    // run the transport with plain midpoint steps throughout: the startup
    // smoothing otherwise injects a one-time signed defect with a large
    // constant that cancels against the truncation error on coarse ladders
    // and makes the measured order meaningless
    popt.rannacher = false;

    double resid[3] = {0.0, 0.0, 0.0};
    for (int l = 0; l < 3; ++l) {
        const Grid2D grid(16u << l, 8u << l, L);
        FspParams par;
        par.dt = window;
        const FspSystem sys(plate, fluid, grid, par);
        Field r0(grid.cells());
        for (std::size_t j = 0; j < grid.nz; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i)
                r0[Eigen::Index(grid.idx(i, j))] =
                    1.0 + 0.2 * std::cos(kPi * grid.xc(i) / L) *
                              std::cos(kPi * (grid.zc(j) + 1.0));
        const FspResult res =
            fsp_step(sys, r0, alpha0, motion, 0.0, window, 4u << l, popt);
        resid[l] = std::abs(fsp_energy_identity(sys, res, motion).residual);
    }

    const double p1 = std::log2(resid[0] / resid[1]);
    const double p2 = std::log2(resid[1] / resid[2]);
    const double order = 0.5 * (p1 + p2);

    CheckResult r;
    r.name = "fsp_energy_identity";
    r.measured = order;
    r.limit = 1.5;
    r.pass = order >= 1.5 && resid[0] > resid[1] && resid[1] > resid[2];
    r.detail = "residuals " + fmt(resid[0]) + " -> " + fmt(resid[1]) + " -> " + fmt(resid[2]) +
               ", refinement order " + fmt(order) + " >= 1.5";
    return r;
}

// -----------------------------------------------------------------------
// 5. telescoped budget: accumulated energy + dissipation + penalties never
//    exceed the initial budget + coercivity constant + T sqrt(dt) +
//    accumulated identity residuals, at every window boundary
// -----------------------------------------------------------------------
CheckResult check_telescoped_bound() {
    RunConfig cfg;
    cfg.k = 2;
    cfg.nx = 32;
    cfg.nz = 16;
    cfg.T = 0.3;
    cfg.N = 6;
    cfg.fsp_substeps = 8;
    cfg.nonlinearity = "cubic";
    cfg.init_beta = {0.02, -0.01};
    cfg.init_gamma = {0.1, 0.05};
    cfg.init_theta = {0.05};
    cfg.init_density = 1.0;
    cfg.init_density_wiggle = 0.2;
    validate_config(cfg);

    const RunOutput out = run(cfg);

    CheckResult r;
    r.name = "telescoped_bound";
    r.measured = out.telescope.min_margin;
    r.limit = 0.0;
    r.pass = out.status == RunStatus::completed && out.windows.size() == cfg.N &&
             out.telescope.pass;
    r.detail = "min margin over " + std::to_string(out.windows.size()) +
               " window boundaries " + fmt(out.telescope.min_margin) + " >= 0";
    return r;
}

// -----------------------------------------------------------------------
// 6. trace-gap scaling: with an O(1) initial mismatch between the fluid
//    trace and the plate velocity, ||v - dt w|| over the horizon scales
//    like sqrt(dt); the log-log slope over a dyadic ladder is 0.5 +- 0.15
// -----------------------------------------------------------------------
CheckResult check_coupling_gap_slope() {
    RunConfig base;
    base.k = 2;
    base.nx = 24;
    base.nz = 12;
    base.T = 0.32;
    base.fsp_substeps = 8;
    base.nonlinearity = "cubic";
    base.init_velocity = {0.0, 0.0, 0.8, 0.0};  // lift-block mode only
    base.init_density = 1.0;

    const std::size_t ladder[4] = {4, 8, 16, 32};
    double lx[4], ly[4];
    for (int i = 0; i < 4; ++i) {
        RunConfig cfg = base;
        cfg.N = ladder[i];
        validate_config(cfg);
        const RunOutput out = run(cfg);
        lx[i] = std::log(cfg.dt());
        ly[i] = std::log(out.gap_l2);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < 4; ++i) {
        mx += lx[i] / 4.0;
        my += ly[i] / 4.0;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < 4; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;

    CheckResult r;
    r.name = "coupling_gap_slope";
    r.measured = slope;
    r.limit = 0.15;
    r.pass = std::abs(slope - 0.5) <= 0.15;
    r.detail = "log-log slope of the trace gap vs dt over {T/4..T/32} is " + fmt(slope) +
               ", required 0.5 +- 0.15";
    return r;
}

// -----------------------------------------------------------------------
// 7. inertia matrix solvability: Cholesky succeeds on 1000 randomized
//    positive (density, geometry) samples and fails once the density is
//    driven nonpositive
// -----------------------------------------------------------------------
CheckResult check_mass_matrix_spd() {
    const std::size_t k = 2;
    const double L = 1.0;
    const PlateBasis plate = make_plate_basis(k, L);
    const FluidBasis fluid = make_fluid_basis(k, L, plate, 128);
    const Grid2D grid(32, 16, L);
    FspParams par;
    par.dt = 0.05;
    const FspSystem sys(plate, fluid, grid, par);

    std::mt19937_64 rng(987654321);
    std::uniform_real_distribution<double> ub(-0.1, 0.1), ur(0.2, 1.5);

    int failures = 0;
    double min_weight_seen = 1e300;
    for (int trial = 0; trial < 1000; ++trial) {
        Vec beta(k);
        for (std::size_t i = 0; i < k; ++i) beta[Eigen::Index(i)] = ub(rng);
        Field r(grid.cells());
        for (Eigen::Index c = 0; c < r.size(); ++c) r[c] = ur(rng);
        const MassMatrixInfo mm = mass_matrix(sys, beta, r);
        Eigen::LLT<Mat> llt(mm.m);
        if (llt.info() != Eigen::Success || mm.min_weight <= 0.0) ++failures;
        min_weight_seen = std::min(min_weight_seen, mm.min_weight);
    }

    // drive the density nonpositive: factorization must now fail
    const Field bad = Field::Constant(Eigen::Index(grid.cells()), -0.5);
    const MassMatrixInfo mm = mass_matrix(sys, Vec::Zero(k), bad);
    Eigen::LLT<Mat> llt(mm.m);
    const bool detected = llt.info() != Eigen::Success && mm.min_weight <= 0.0;

    CheckResult r;
    r.name = "mass_matrix_spd";
    r.measured = double(failures);
    r.limit = 0.0;
    r.pass = failures == 0 && detected;
    r.detail = std::to_string(failures) + " factorization failures in 1000 positive samples" +
               " (min J r weight " + fmt(min_weight_seen) + "); nonpositive density " +
               (detected ? "rejected" : "NOT rejected");
    return r;
}

// -----------------------------------------------------------------------
// 8. harmonic lifting oracle: the production lifting of sin(pi x) matches
//    the separable sinh solution to 1e-6 max error on a 128x64 grid
// -----------------------------------------------------------------------
CheckResult check_harmonic_lifting() {
    const double L = 1.0;
    const SineExtension ext =
        harmonic_extension_of([](double x) { return std::sin(kPi * x); }, L, 128);
    const Grid2D g(128, 64, L);
    double maxerr = 0.0;
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double x = g.xc(i), z = g.zc(j);
            const double exact =
                std::sin(kPi * x) * std::sinh(kPi * (z + 1.0)) / std::sinh(kPi);
            maxerr = std::max(maxerr, std::abs(ext.value(x, z) - exact));
        }
    for (std::size_t i = 0; i <= g.nx; ++i) {
        const double x = g.xf(i);
        maxerr = std::max(maxerr, std::abs(ext.value(x, 0.0) - std::sin(kPi * x)));
    }

    CheckResult r;
    r.name = "harmonic_lifting";
    r.measured = maxerr;
    r.limit = 1e-6;
    r.pass = maxerr <= 1e-6;
    r.detail = "max |numeric - sinh formula| on 128x64 = " + fmt(maxerr) + " <= 1e-06";
    return r;
}

// -----------------------------------------------------------------------
// 9. nonlinearity consistency: the modal force F(beta) is the exact
//    gradient of the quartic potential, checked by central differences
// -----------------------------------------------------------------------
CheckResult check_potential_gradient() {
    const std::size_t k = 3;
    const PlateBasis plate = make_plate_basis(k, 1.0);
    const HeatBasis heat{1.0, k};
    const CoupledMatrices cm = assemble_coupled_matrices(plate, heat, 60);
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    const SspSystem sys(plate, heat, cm, nl, 0.1, 0.0, 60);

    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> ub(-0.5, 0.5);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Vec b(k);
        for (std::size_t i = 0; i < k; ++i) b[Eigen::Index(i)] = ub(rng);
        Vec grad(k);
        for (std::size_t j = 0; j < k; ++j) {
            Vec bp = b, bm = b;
            bp[Eigen::Index(j)] += h;
            bm[Eigen::Index(j)] -= h;
            grad[Eigen::Index(j)] = (sys.potential(bp) - sys.potential(bm)) / (2.0 * h);
        }
        const Vec f = sys.nonlinearity(b);
        worst = std::max(worst, (grad - f).norm() / f.norm());
    }

    CheckResult r;
    r.name = "potential_gradient";
    r.measured = worst;
    r.limit = 1e-6;
    r.pass = worst <= 1e-6;
    r.detail = "worst relative |dPi - F| over 50 random states = " + fmt(worst) + " <= 1e-06";
    return r;
}

// -----------------------------------------------------------------------
// 10. clamped-beam spectrum: production root vs an independent bisection
//     oracle, plus the eigen-residual s'''' = xi s for the first 8 modes
// -----------------------------------------------------------------------
CheckResult check_beam_eigenvalue() {
    // bisection oracle on cos(t) cosh(t) - 1 over (3, 6); the product form
    // is safe here, cosh(6) ~ 2e2
    auto f = [](double t) { return std::cos(t) * std::cosh(t) - 1.0; };
    double lo = 3.0, hi = 6.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(lo) * f(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    const double root_err = std::abs(clamped_beam_root(1) - oracle);

    const auto modes = clamped_beam_modes(8, 1.0);
    const GaussRule nodes(240, 0.0, 1.0);
    double worst = 0.0;
    for (const auto& m : modes)
        for (const double x : nodes.x)
            worst = std::max(worst, std::abs(clamped_beam_eval(m, x, 4) -
                                             m.xi * clamped_beam_eval(m, x, 0)) /
                                        m.xi);

    CheckResult r;
    r.name = "beam_eigenvalue";
    r.measured = root_err;
    r.limit = 1e-9;
    r.pass = root_err <= 1e-9 && worst <= 1e-8;
    r.detail = "|mu_1 - bisection oracle| = " + fmt(root_err) +
               " <= 1e-09; max spectral residual over 8 modes = " + fmt(worst) + " <= 1e-08";
    return r;
}

// -----------------------------------------------------------------------
// 11. horizon-extension recurrence: the exported schedule matches a scalar
//     oracle exactly (bitwise) over randomized clearance trajectories
// -----------------------------------------------------------------------
CheckResult check_continuation_recurrence() {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> uc(-0.2, 1.0), ue(0.5, 5.0), ut(0.0, 2.0);

    int mismatches = 0;
    for (int traj = 0; traj < 100; ++traj) {
        const std::size_t len = 1 + std::size_t(rng() % 8);
        std::vector<double> clearances(len);
        for (auto& c : clearances) c = uc(rng);
        const double c_of_e0 = ue(rng);
        const double t0 = ut(rng);

        // independent scalar recurrence: T_n = T_{n-1} + (c/(2C))^4 as a
        // squared square, stopping at the first nonpositive clearance
        std::vector<double> expect = {t0};
        double t = t0;
        for (const double c : clearances) {
            if (!(c > 0.0)) break;
            const double q = c / (2.0 * c_of_e0);
            const double qq = q * q;
            t += qq * qq;
            expect.push_back(t);
        }

        const auto got = continuation_schedule(clearances, c_of_e0, t0);
        bool same = got.size() == expect.size();
        for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i] == expect[i];
        if (!same) ++mismatches;
    }

    CheckResult r;
    r.name = "continuation_recurrence";
    r.measured = double(mismatches);
    r.limit = 0.0;
    r.pass = mismatches == 0;
    r.detail = std::to_string(mismatches) +
               " schedule mismatches in 100 synthetic clearance trajectories (exact equality)";
    return r;
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
    static const std::vector<CheckSpec> registry = {
        {"ssp_energy_identity", "structure window energy identity and integrator order",
         check_ssp_energy_identity},
        {"density_envelope", "transported density obeys the exponential envelope",
         check_density_envelope},
        {"mass_conservation", "per-window mass drift below 1e-6 with nonzero trace gap",
         check_mass_conservation},
        {"fsp_energy_identity", "fluid window energy balance converges at order >= 1.5",
         check_fsp_energy_identity},
        {"telescoped_bound", "cumulative energy budget stays under the initial bound",
         check_telescoped_bound},
        {"coupling_gap_slope", "trace gap scales like sqrt(dt) over a dyadic ladder",
         check_coupling_gap_slope},
        {"mass_matrix_spd", "inertia matrix positive definite iff density positive",
         check_mass_matrix_spd},
        {"harmonic_lifting", "numeric lifting matches the separable sinh solution",
         check_harmonic_lifting},
        {"potential_gradient", "modal force is the exact potential gradient",
         check_potential_gradient},
        {"beam_eigenvalue", "beam root matches bisection oracle; spectral residual",
         check_beam_eigenvalue},
        {"continuation_recurrence", "horizon extension matches the scalar recurrence",
         check_continuation_recurrence},
    };
    return registry;
}

int run_checks(const std::string& filter, std::ostream& out) {
    int failures = 0, ran = 0;
    for (const auto& spec : check_registry()) {
        if (!filter.empty() && std::string(spec.name).find(filter) == std::string::npos)
            continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = spec.fn();
        } catch (const std::exception& e) {
            res.name = spec.name;
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        char line[64];
        std::snprintf(line, sizeof(line), " [%.2fs]", res.seconds);
        out << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << ": " << res.detail << line
            << "\n";
        if (!res.pass) ++failures;
    }
    if (ran == 0) {
        out << "no check matches filter '" << filter << "'\n";
        return 1;
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) FAILED")
        << " (" << ran << " run)\n";
    return failures;
}

}  // namespace fsi
