#include "fsi/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsi/ale.hpp"
#include "fsi/errors.hpp"

namespace fsi {

namespace {

struct FluidQuadTotals {
    double kinetic = 0.0, internal = 0.0, artificial = 0.0;
    double df = 0.0, fd_eps = 0.0;
};

// all quadrature-based fluid functionals for one (beta, alpha, r) snapshot
FluidQuadTotals fluid_quadrature(const FspSystem& sys, const Vec& beta, const Vec& alpha,
                                 const Field& r) {
    const auto ox = sys.qx.size(), oz = sys.qz.size();
    const auto nm = sys.fluid.size();
    const double g = sys.par.gamma_exp, a = sys.par.a_exp, d = sys.par.delta;
    const double mu = sys.par.mu, mulam = sys.par.mu + sys.par.lambda;

    const Vec wq = sys.p0_quad.transpose() * beta;
    const Vec wxq = sys.p1_quad.transpose() * beta;
    const Field rx = fd_dx(sys.grid, r, 2);
    const Field rz = fd_dz(sys.grid, r, 2);

    FluidQuadTotals out;
    for (std::size_t iz = 0; iz < oz; ++iz) {
        const double z = sys.qz.x[iz], zp1 = z + 1.0;
        for (std::size_t ix = 0; ix < ox; ++ix) {
            const double X = sys.qx.x[ix];
            const double J = 1.0 + wq[Eigen::Index(ix)];
            if (J <= 0.0) throw DegenerateMapError("energy quadrature: degenerate map");
            const double slope = zp1 * wxq[Eigen::Index(ix)] / J;
            const double wgt = sys.qx.w[ix] * sys.qz.w[iz];
            const std::size_t p = ix + ox * iz;

            double u0 = 0.0, u1 = 0.0, dX0 = 0.0, dX1 = 0.0, dz0 = 0.0, dz1 = 0.0;
            for (std::size_t m = 0; m < nm; ++m) {
                const double* v = sys.quad_tab.at(m, p);
                const double am = alpha[Eigen::Index(m)];
                u0 += am * v[0];
                u1 += am * v[1];
                dX0 += am * v[2];
                dX1 += am * v[3];
                dz0 += am * v[4];
                dz1 += am * v[5];
            }
            const double Dx0 = dX0 - slope * dz0, Dz0 = dz0 / J;
            const double Dx1 = dX1 - slope * dz1, Dz1 = dz1 / J;
            const double div = Dx0 + Dz1;

            const double rv = bilinear_sample(sys.grid, r, X, z);
            out.kinetic += wgt * 0.5 * J * rv * (u0 * u0 + u1 * u1);
            out.internal += wgt * J * std::pow(rv, g) / (g - 1.0);
            out.artificial += wgt * J * d * std::pow(rv, a) / (a - 1.0);
            out.df += wgt * J *
                      (mu * (Dx0 * Dx0 + Dz0 * Dz0 + Dx1 * Dx1 + Dz1 * Dz1) + mulam * div * div);
            const double gx = bilinear_sample(sys.grid, rx, X, z);
            const double gz = bilinear_sample(sys.grid, rz, X, z);
            out.fd_eps += wgt * sys.par.eps * J * (gx * gx + gz * gz) *
                          (g * std::pow(rv, g - 2.0) + d * a * std::pow(rv, a - 2.0));
        }
    }
    return out;
}

struct CellFrameTotals {
    double internal = 0.0, artificial = 0.0;
    double fd_eps = 0.0;
};

// internal energy and damping dissipation in the transport's own cell/face
// frame, so the balance against its flux algebra carries no interpolation
// error
CellFrameTotals cell_frame_totals(const FspSystem& sys, const Vec& beta, const Field& r) {
    const auto& g = sys.grid;
    const double gam = sys.par.gamma_exp, a = sys.par.a_exp, d = sys.par.delta;
    const double area = g.cell_area();
    const Vec w_cent = sys.p0_cent.transpose() * beta;
    const Vec w_face = sys.p0_face.transpose() * beta;

    CellFrameTotals out;
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double J = 1.0 + w_cent[Eigen::Index(i)];
            if (J <= 0.0) throw DegenerateMapError("energy quadrature: degenerate map");
            const double rv = r[Eigen::Index(g.idx(i, j))];
            out.internal += area * J * std::pow(rv, gam) / (gam - 1.0);
            out.artificial += area * J * d * std::pow(rv, a) / (a - 1.0);
        }

    // damping acts through interior faces only, mirroring the flux stencil
    auto ppb = [&](double rl, double rr) {
        const double rm = 0.5 * (rl + rr);
        return gam * std::pow(rm, gam - 2.0) + d * a * std::pow(rm, a - 2.0);
    };
    const double hx = g.hx(), hz = g.hz();
    for (std::size_t fi = 1; fi < g.nx; ++fi) {
        const double jf = 1.0 + w_face[Eigen::Index(fi)];
        for (std::size_t j = 0; j < g.nz; ++j) {
            const double rl = r[Eigen::Index(g.idx(fi - 1, j))];
            const double rr = r[Eigen::Index(g.idx(fi, j))];
            const double gx = (rr - rl) / hx;
            out.fd_eps += area * sys.par.eps * jf * gx * gx * ppb(rl, rr);
        }
    }
    for (std::size_t fj = 1; fj < g.nz; ++fj)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double jc = 1.0 + w_cent[Eigen::Index(i)];
            const double rb = r[Eigen::Index(g.idx(i, fj - 1))];
            const double rt = r[Eigen::Index(g.idx(i, fj))];
            const double gz = (rt - rb) / hz;
            out.fd_eps += area * sys.par.eps * jc * gz * gz * ppb(rb, rt);
        }
    return out;
}

}  // namespace

double korn_like_lower_bound(double mu, double lambda) {
    // mu|G|^2 + (mu+lambda) tr(G)^2 with tr(G)^2 <= 2|G|^2 in two dimensions
    if (lambda >= -mu) return mu;
    return 3.0 * mu + 2.0 * lambda;
}

double entropy_functional(const Grid2D& g, const Vec& w_cent, const Field& r) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double rv = r[Eigen::Index(g.idx(i, j))];
            if (!(rv > 0.0)) throw InvariantError("entropy: nonpositive density");
            s += (1.0 + w_cent[Eigen::Index(i)]) * rv * std::log(rv);
        }
    return s * g.cell_area();
}

EnergyLedger compute_ledger(const FspSystem& fs, const SspSystem& ss, const PlateState& plate,
                            const Vec& alpha_fluid, const Field& r) {
    EnergyLedger led;
    led.t = plate.t;

    led.plate_kinetic_half = 0.5 * plate.gamma.squaredNorm();
    led.plate_kinetic_quarter = 0.25 * plate.gamma.squaredNorm();
    led.bending = 0.5 * plate.beta.dot(ss.xi_s.cwiseProduct(plate.beta));
    led.potential = ss.potential(plate.beta);
    led.heat = 0.5 * plate.alpha.squaredNorm();
    led.regularizer = 0.5 * ss.delta * plate.beta.dot(ss.third_grad * plate.beta);
    led.ds_rate = plate.alpha.dot(ss.xi_h.cwiseProduct(plate.alpha));

    const FluidQuadTotals q = fluid_quadrature(fs, plate.beta, alpha_fluid, r);
    led.kinetic = q.kinetic;
    led.internal = q.internal;
    led.artificial_internal = q.artificial;
    led.df_rate = q.df;
    led.fd_eps_rate = q.fd_eps;

    const Vec w_cent = fs.p0_cent.transpose() * plate.beta;
    led.mass = weighted_mass(fs.grid, w_cent, r);
    led.entropy = entropy_functional(fs.grid, w_cent, r);
    return led;
}

FspIdentityReport fsp_energy_identity(const FspSystem& sys, const FspResult& run,
                                      const PlateTrajectory& plate_motion) {
    const auto& den = run.density;
    const std::size_t ns = den.times.size();
    if (ns < 2) throw SolverError("energy identity: too few snapshots");

    VelocityTrajectory vel;
    vel.times = run.times;
    vel.alpha = run.alpha;

    const auto k = static_cast<Eigen::Index>(sys.plate.size());
    const double hx = sys.grid.hx();
    const auto nx = sys.grid.nx, nz = sys.grid.nz;

    FspIdentityReport rep;
    double prev_rate = 0.0, prev_gv = 0.0, prev_gap = 0.0, prev_gwt = 0.0, prev_prod = 0.0;
    double prev_fw = 0.0;
    const bool forced = sys.par.fx != 0.0 || sys.par.fz != 0.0;
    Vec beta, gamma_pl;
    for (std::size_t s = 0; s < ns; ++s) {
        const double t = den.times[s];
        plate_motion.sample(t, beta, gamma_pl);
        const Vec alpha = vel.eval(t);
        const Vec vmod = alpha.tail(k);

        const FluidQuadTotals q = fluid_quadrature(sys, beta, alpha, den.r[s]);
        const CellFrameTotals cq = cell_frame_totals(sys, beta, den.r[s]);
        const double f = q.kinetic + cq.internal + cq.artificial;
        if (s == 0) rep.f_start = f;
        if (s + 1 == ns) rep.f_end = f;

        const double rate = q.df + cq.fd_eps;
        const double gv = vmod.squaredNorm();
        const double gap = (vmod - gamma_pl).squaredNorm();
        const double gwt = gamma_pl.squaredNorm();

        // boundary production, sampled the way the transport scheme sees it
        const Vec v_pts = sys.p0_cent.transpose() * vmod;
        const Vec wt_pts = sys.p0_cent.transpose() * gamma_pl;
        double prod = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const double rtop = (9.0 * den.r[s][Eigen::Index(sys.grid.idx(i, nz - 1))] -
                                 den.r[s][Eigen::Index(sys.grid.idx(i, nz - 2))]) /
                                8.0;
            prod += pressure_potential_of(sys.par, rtop) *
                    (v_pts[Eigen::Index(i)] - wt_pts[Eigen::Index(i)]);
        }
        prod *= hx;

        // body-force power in the same cell frame the load assembly uses
        double fw = 0.0;
        if (forced) {
            const Vec w_cent = sys.p0_cent.transpose() * beta;
            const auto nm = sys.fluid.size();
            for (std::size_t j = 0; j < nz; ++j)
                for (std::size_t i = 0; i < nx; ++i) {
                    const std::size_t p = i + nx * j;
                    double u0 = 0.0, u1 = 0.0;
                    for (std::size_t m = 0; m < nm; ++m) {
                        const double* v = sys.cent_tab.at(m, p);
                        u0 += alpha[Eigen::Index(m)] * v[0];
                        u1 += alpha[Eigen::Index(m)] * v[1];
                    }
                    fw += (1.0 + w_cent[Eigen::Index(i)]) *
                          den.r[s][Eigen::Index(sys.grid.idx(i, j))] *
                          (sys.par.fx * u0 + sys.par.fz * u1);
                }
            fw *= sys.grid.cell_area();
        }

        if (s > 0) {
            const double h = den.times[s] - den.times[s - 1];
            rep.dissipation += 0.5 * h * (prev_rate + rate);
            rep.trace_v += 0.5 * h * (prev_gv + gv);
            rep.trace_gap += 0.5 * h * (prev_gap + gap);
            rep.trace_wt += 0.5 * h * (prev_gwt + gwt);
            rep.production += 0.5 * h * (prev_prod + prod);
            rep.force_work += 0.5 * h * (prev_fw + fw);
        }
        prev_rate = rate;
        prev_gv = gv;
        prev_gap = gap;
        prev_gwt = gwt;
        prev_prod = prod;
        prev_fw = fw;
    }

    const double pw = 1.0 / (4.0 * sys.par.dt);
    rep.residual = rep.f_end + rep.dissipation + pw * (rep.trace_v + rep.trace_gap) +
                   rep.production - rep.f_start - pw * rep.trace_wt - rep.force_work;
    return rep;
}

TelescopeVerdict telescoped_bound_verdict(double e0_total, double v0_trace_sq, double cstar,
                                          double horizon, double dt,
                                          const std::vector<WindowEnergyTotals>& windows) {
    TelescopeVerdict verdict;
    const double base = e0_total + 0.25 * v0_trace_sq + cstar + horizon * std::sqrt(dt);
    double acc = 0.0, res = 0.0;
    verdict.min_margin = std::numeric_limits<double>::max();
    for (const auto& w : windows) {
        acc += w.sd + w.fd + w.pen_gap_ssp + w.pen_gap_fsp;
        res += std::abs(w.ssp_residual) + std::abs(w.fsp_residual);
        const double lhs = w.s_end + w.f_end + w.pen_v_end + acc;
        const double rhs = base + res;
        verdict.lhs.push_back(lhs);
        verdict.rhs.push_back(rhs);
        verdict.min_margin = std::min(verdict.min_margin, rhs - lhs);
        if (lhs > rhs) verdict.pass = false;
    }
    return verdict;
}

}  // namespace fsi
