#include "fsi/fsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

// shared linear interpolation over a sorted time grid; clamps at the ends
std::pair<std::size_t, double> locate(const std::vector<double>& times, double t) {
    if (times.size() < 2 || t <= times.front()) return {0, 0.0};
    if (t >= times.back()) return {times.size() - 2, 1.0};
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(it - times.begin()) - 1;
    return {i, (t - times[i]) / (times[i + 1] - times[i])};
}

}  // namespace

void PlateTrajectory::sample(double t, Vec& beta_out, Vec& gamma_out) const {
    const auto [i, f] = locate(times, t);
    beta_out = (1.0 - f) * beta[i] + f * beta[i + 1];
    gamma_out = (1.0 - f) * gamma[i] + f * gamma[i + 1];
}

PlateTrajectory PlateTrajectory::from(const SspWindowOutput& out) {
    PlateTrajectory tr;
    tr.times = out.times;
    tr.beta = out.beta;
    tr.gamma = out.gamma;
    return tr;
}

Vec VelocityTrajectory::eval(double t) const {
    const auto [i, f] = locate(times, t);
    return (1.0 - f) * alpha[i] + f * alpha[i + 1];
}

VelocityTrajectory VelocityTrajectory::constant(const Vec& a0, double t0, double t1) {
    VelocityTrajectory tr;
    tr.times = {t0, t1};
    tr.alpha = {a0, a0};
    return tr;
}

double pressure_of(const FspParams& p, double r) {
    return std::pow(r, p.gamma_exp) + p.delta * std::pow(r, p.a_exp);
}

double pressure_potential_of(const FspParams& p, double r) {
    return std::pow(r, p.gamma_exp) / (p.gamma_exp - 1.0) +
           p.delta * std::pow(r, p.a_exp) / (p.a_exp - 1.0);
}

FspSystem::FspSystem(const PlateBasis& plate_basis, const FluidBasis& fluid_basis,
                     const Grid2D& grid_in, const FspParams& params)
    : plate(plate_basis),
      fluid(fluid_basis),
      grid(grid_in),
      par(params),
      qx(params.quad_x, 0.0, grid_in.L),
      qz(params.quad_z, -1.0, 0.0),
      transport(grid_in, params.eps) {
    if (par.mu <= 0.0) throw ConfigError("fluid step: mu must be positive");
    if (par.lambda + 2.0 * par.mu / 3.0 <= 0.0)
        throw ConfigError("fluid step: lambda + 2 mu / 3 must be positive");
    if (par.gamma_exp <= 1.0) throw ConfigError("fluid step: adiabatic exponent must exceed 1");
    if (par.a_exp <= 1.0) throw ConfigError("fluid step: stiffened exponent must exceed 1");
    if (par.delta < 0.0) throw ConfigError("fluid step: delta must be nonnegative");
    if (par.dt <= 0.0) throw ConfigError("fluid step: window length must be positive");

    const auto k = plate.size();
    const auto ox = qx.size(), oz = qz.size();

    std::vector<double> X, Z;
    X.reserve(ox * oz);
    Z.reserve(ox * oz);
    for (std::size_t iz = 0; iz < oz; ++iz)
        for (std::size_t ix = 0; ix < ox; ++ix) {
            X.push_back(qx.x[ix]);
            Z.push_back(qz.x[iz]);
        }
    quad_tab.build(fluid, X, Z);

    X.clear();
    Z.clear();
    for (std::size_t j = 0; j < grid.nz; ++j)
        for (std::size_t i = 0; i <= grid.nx; ++i) {
            X.push_back(grid.xf(i));
            Z.push_back(grid.zc(j));
        }
    vert_tab.build(fluid, X, Z);

    X.clear();
    Z.clear();
    for (std::size_t j = 0; j <= grid.nz; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            X.push_back(grid.xc(i));
            Z.push_back(grid.zf(j));
        }
    horz_tab.build(fluid, X, Z);

    X.clear();
    Z.clear();
    for (std::size_t j = 0; j < grid.nz; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            X.push_back(grid.xc(i));
            Z.push_back(grid.zc(j));
        }
    cent_tab.build(fluid, X, Z);

    auto plate_table = [&](Mat& p0, Mat& p1, auto&& abscissa, std::size_t n) {
        p0 = Mat(k, n);
        p1 = Mat(k, n);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t p = 0; p < n; ++p) {
                p0(Eigen::Index(i), Eigen::Index(p)) = plate.eval(i, abscissa(p), 0);
                p1(Eigen::Index(i), Eigen::Index(p)) = plate.eval(i, abscissa(p), 1);
            }
    };
    plate_table(p0_quad, p1_quad, [&](std::size_t p) { return qx.x[p]; }, ox);
    plate_table(p0_face, p1_face, [&](std::size_t p) { return grid.xf(p); }, grid.nx + 1);
    plate_table(p0_cent, p1_cent, [&](std::size_t p) { return grid.xc(p); }, grid.nx);
}

void FspSystem::fill_transport(double t, const PlateTrajectory& plate_motion,
                               const VelocityTrajectory& velocity, TransportField& out) const {
    out.resize(grid);
    Vec beta, gamma;
    plate_motion.sample(t, beta, gamma);
    out.w_face = p0_face.transpose() * beta;
    out.wx_face = p1_face.transpose() * beta;
    out.wt_face = p0_face.transpose() * gamma;
    out.w_cent = p0_cent.transpose() * beta;
    out.wx_cent = p1_cent.transpose() * beta;
    out.wt_cent = p0_cent.transpose() * gamma;
    if (1.0 + out.w_face.minCoeff() <= par.collision_floor)
        throw DegenerateMapError("plate touches the bottom of the channel");

    const Vec a = velocity.eval(t);
    const auto nm = fluid.size();
    for (std::size_t j = 0; j < grid.nz; ++j)
        for (std::size_t i = 0; i <= grid.nx; ++i) {
            const std::size_t p = i + (grid.nx + 1) * j;
            double u1 = 0.0, u2 = 0.0;
            for (std::size_t g = 0; g < nm; ++g) {
                const double* v = vert_tab.at(g, p);
                u1 += a[Eigen::Index(g)] * v[0];
                u2 += a[Eigen::Index(g)] * v[1];
            }
            out.u1_vert(Eigen::Index(i), Eigen::Index(j)) = u1;
            out.u2_vert(Eigen::Index(i), Eigen::Index(j)) = u2;
        }
    for (std::size_t j = 0; j <= grid.nz; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const std::size_t p = i + grid.nx * j;
            double u1 = 0.0, u2 = 0.0;
            for (std::size_t g = 0; g < nm; ++g) {
                const double* v = horz_tab.at(g, p);
                u1 += a[Eigen::Index(g)] * v[0];
                u2 += a[Eigen::Index(g)] * v[1];
            }
            out.u1_horz(Eigen::Index(i), Eigen::Index(j)) = u1;
            out.u2_horz(Eigen::Index(i), Eigen::Index(j)) = u2;
        }
}

FieldProvider FspSystem::provider(const PlateTrajectory& plate_motion,
                                  const VelocityTrajectory& velocity) const {
    return [this, &plate_motion, &velocity](double t, TransportField& out) {
        fill_transport(t, plate_motion, velocity, out);
    };
}

MomentumMatrices assemble_momentum(const FspSystem& sys, const MomentumCoeffs& c) {
    const auto nm = sys.fluid.size();
    const auto n = static_cast<Eigen::Index>(nm);
    const auto k = sys.plate.size();
    const auto ox = sys.qx.size(), oz = sys.qz.size();
    const double mu = sys.par.mu, mulam = sys.par.mu + sys.par.lambda;

    MomentumMatrices out;
    out.mass = Mat::Zero(n, n);
    Mat ainrt = Mat::Zero(n, n);  // 1/2 d(Jr)/dt  g_i . g_j
    Mat avisc = Mat::Zero(n, n);
    Mat kconv = Mat::Zero(n, n);  // K(j,i) = 1/2 int J (b . grad g_i) . g_j
    out.load = Vec::Zero(n);
    out.min_weight = std::numeric_limits<double>::max();

    const Vec wq = sys.p0_quad.transpose() * c.beta;
    const Vec wxq = sys.p1_quad.transpose() * c.beta;
    const Vec wtq = sys.p0_quad.transpose() * c.gamma_pl;

    // per-mode transformed data at one quadrature point
    Mat sc(7, n);  // rows: val0 val1 Dx0 Dz0 Dx1 Dz1 div

    for (std::size_t iz = 0; iz < oz; ++iz) {
        const double z = sys.qz.x[iz], zp1 = z + 1.0;
        for (std::size_t ix = 0; ix < ox; ++ix) {
            const double X = sys.qx.x[ix];
            const double J = 1.0 + wq[Eigen::Index(ix)];
            if (J <= sys.par.collision_floor)
                throw DegenerateMapError("plate touches the bottom of the channel");
            const double slope = zp1 * wxq[Eigen::Index(ix)] / J;
            const double wgt = sys.qx.w[ix] * sys.qz.w[iz];
            const std::size_t p = ix + ox * iz;

            const double rv = bilinear_sample(sys.grid, c.r_mid, X, z);
            const double djr = bilinear_sample(sys.grid, c.djr_dt, X, z);
            out.min_weight = std::min(out.min_weight, J * rv);

            double ut1 = 0.0, ut2 = 0.0;  // transporting velocity, previous iterate
            for (std::size_t g = 0; g < nm; ++g) {
                const double* v = sys.quad_tab.at(g, p);
                const auto gi = Eigen::Index(g);
                ut1 += c.u_prev[gi] * v[0];
                ut2 += c.u_prev[gi] * v[1];
                sc(0, gi) = v[0];
                sc(1, gi) = v[1];
                sc(2, gi) = v[2] - slope * v[4];
                sc(3, gi) = v[4] / J;
                sc(4, gi) = v[3] - slope * v[5];
                sc(5, gi) = v[5] / J;
                sc(6, gi) = sc(2, gi) + sc(5, gi);
            }
            const double b1 = rv * ut1;
            const double b2 = rv * (ut2 - zp1 * wtq[Eigen::Index(ix)]);

            const double cm = wgt * J * rv;
            const double ci = wgt * 0.5 * djr;
            const double cv = wgt * J;

            for (Eigen::Index i = 0; i < n; ++i) {
                // convected derivative of mode i paired with mode j
                const double conv0 = b1 * sc(2, i) + b2 * sc(3, i);
                const double conv1 = b1 * sc(4, i) + b2 * sc(5, i);
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double dot = sc(0, i) * sc(0, j) + sc(1, i) * sc(1, j);
                    out.mass(i, j) += cm * dot;
                    ainrt(i, j) += ci * dot;
                    avisc(i, j) += cv * (mu * (sc(2, i) * sc(2, j) + sc(3, i) * sc(3, j) +
                                               sc(4, i) * sc(4, j) + sc(5, i) * sc(5, j)) +
                                         mulam * sc(6, i) * sc(6, j));
                    kconv(j, i) += cv * 0.5 * (conv0 * sc(0, j) + conv1 * sc(1, j));
                }
            }
        }
    }

    // pressure and body-force load live in the transport's cell frame so the
    // work they inject matches the cell-level internal energy algebra
    const Vec wc = sys.p0_cent.transpose() * c.beta;
    const Vec wxc = sys.p1_cent.transpose() * c.beta;
    const double area = sys.grid.cell_area();
    for (std::size_t j = 0; j < sys.grid.nz; ++j) {
        const double zp1 = sys.grid.zc(j) + 1.0;
        for (std::size_t i = 0; i < sys.grid.nx; ++i) {
            const double J = 1.0 + wc[Eigen::Index(i)];
            if (J <= sys.par.collision_floor)
                throw DegenerateMapError("plate touches the bottom of the channel");
            const double slope = zp1 * wxc[Eigen::Index(i)] / J;
            const double rv = c.r_mid[Eigen::Index(sys.grid.idx(i, j))];
            const double press = pressure_of(sys.par, rv);
            const std::size_t p = i + sys.grid.nx * j;
            for (Eigen::Index g = 0; g < n; ++g) {
                const double* v = sys.cent_tab.at(std::size_t(g), p);
                const double div = (v[2] - slope * v[4]) + v[5] / J;
                out.load[g] += area * J * (press * div +
                                           rv * (sys.par.fx * v[0] + sys.par.fz * v[1]));
            }
        }
    }

    out.drift = ainrt + (kconv - kconv.transpose()) + avisc;
    const double pen = 1.0 / (2.0 * sys.par.dt);
    for (std::size_t i = 0; i < k; ++i) {
        const auto gi = Eigen::Index(k + i);
        out.drift(gi, gi) += pen;
        out.load[gi] += pen * c.gamma_pl[Eigen::Index(i)];
    }
    return out;
}

MassMatrixInfo mass_matrix(const FspSystem& sys, const Vec& beta, const Field& r) {
    const auto n = static_cast<Eigen::Index>(sys.fluid.size());
    const auto ox = sys.qx.size(), oz = sys.qz.size();
    MassMatrixInfo out;
    out.m = Mat::Zero(n, n);
    out.min_weight = std::numeric_limits<double>::max();
    const Vec wq = sys.p0_quad.transpose() * beta;
    Vec v0(n), v1(n);
    for (std::size_t iz = 0; iz < oz; ++iz)
        for (std::size_t ix = 0; ix < ox; ++ix) {
            const double J = 1.0 + wq[Eigen::Index(ix)];
            if (J <= sys.par.collision_floor)
                throw DegenerateMapError("plate touches the bottom of the channel");
            const double rv = bilinear_sample(sys.grid, r, sys.qx.x[ix], sys.qz.x[iz]);
            out.min_weight = std::min(out.min_weight, J * rv);
            const double cw = sys.qx.w[ix] * sys.qz.w[iz] * J * rv;
            const std::size_t p = ix + ox * iz;
            for (Eigen::Index g = 0; g < n; ++g) {
                const double* v = sys.quad_tab.at(std::size_t(g), p);
                v0[g] = v[0];
                v1[g] = v[1];
            }
            out.m.noalias() += cw * (v0 * v0.transpose() + v1 * v1.transpose());
        }
    return out;
}

Mat velocity_gram(const FspSystem& sys) {
    const auto n = static_cast<Eigen::Index>(sys.fluid.size());
    const auto ox = sys.qx.size(), oz = sys.qz.size();
    Mat gram = Mat::Zero(n, n);
    Vec v0(n), v1(n);
    for (std::size_t iz = 0; iz < oz; ++iz)
        for (std::size_t ix = 0; ix < ox; ++ix) {
            const double cw = sys.qx.w[ix] * sys.qz.w[iz];
            const std::size_t p = ix + ox * iz;
            for (Eigen::Index g = 0; g < n; ++g) {
                const double* v = sys.quad_tab.at(std::size_t(g), p);
                v0[g] = v[0];
                v1[g] = v[1];
            }
            gram.noalias() += cw * (v0 * v0.transpose() + v1 * v1.transpose());
        }
    return gram;
}

FspResult fsp_step(const FspSystem& sys, const Field& r0, const Vec& alpha0,
                   const PlateTrajectory& plate_motion, double t0, double window,
                   std::size_t substeps, const PicardOptions& opt) {
    if (substeps == 0) throw ConfigError("fluid step: substeps == 0");
    if (opt.transport_substeps_per < 2 || opt.transport_substeps_per % 2 != 0)
        throw ConfigError("fluid step: transport_substeps_per must be even and >= 2");
    const double tau = window / static_cast<double>(substeps);
    const auto per = opt.transport_substeps_per;

    FspResult res;
    res.times.resize(substeps + 1);
    for (std::size_t m = 0; m <= substeps; ++m)
        res.times[m] = t0 + static_cast<double>(m) * tau;

    VelocityTrajectory guess = VelocityTrajectory::constant(alpha0, t0, t0 + window);
    std::vector<Vec> alpha(substeps + 1);

    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        const FieldProvider fields = sys.provider(plate_motion, guess);
        ContinuitySolver::Result density =
            sys.transport.advance(r0, t0, window, per * substeps, fields, opt.rannacher);

        alpha[0] = alpha0;
        for (std::size_t m = 0; m < substeps; ++m) {
            const double tm = t0 + (static_cast<double>(m) + 0.5) * tau;
            MomentumCoeffs mc;
            plate_motion.sample(tm, mc.beta, mc.gamma_pl);
            mc.r_mid = density.r[per * m + per / 2];
            mc.djr_dt = sys.transport.time_derivative(tm, mc.r_mid, fields);
            mc.u_prev = guess.eval(tm);
            const MomentumMatrices mm = assemble_momentum(sys, mc);

            Eigen::LLT<Mat> llt(mm.mass);
            if (llt.info() != Eigen::Success)
                throw SolverError("fluid step: inertia matrix is not positive definite");

            const Mat lhs = mm.mass + 0.5 * tau * mm.drift;
            const Vec rhs = (mm.mass - 0.5 * tau * mm.drift) * alpha[m] + tau * mm.load;
            Eigen::PartialPivLU<Mat> lu(lhs);
            alpha[m + 1] = lu.solve(rhs);
            const double resid = (lhs * alpha[m + 1] - rhs).norm();
            if (!(resid <= 1e-9 * (rhs.norm() + 1.0)))
                throw SolverError("fluid step: momentum solve did not converge");
        }

        double update = 0.0, scale = 1.0;
        for (std::size_t m = 0; m <= substeps; ++m) {
            update = std::max(update,
                              (alpha[m] - guess.eval(res.times[m])).cwiseAbs().maxCoeff());
            scale = std::max(scale, alpha[m].cwiseAbs().maxCoeff());
        }
        res.update_history.push_back(update);
        res.last_update = update;
        res.iterations = it + 1;

        guess.times = res.times;
        guess.alpha = alpha;

        if (update <= opt.tolerance * scale) {
            // rerun transport once against the accepted velocity so the
            // reported density matches the reported modes
            const FieldProvider final_fields = sys.provider(plate_motion, guess);
            res.density = sys.transport.advance(r0, t0, window, per * substeps, final_fields,
                                                opt.rannacher);
            res.alpha = alpha;
            return res;
        }
    }
    throw SolverError("fluid step: velocity fixed point did not converge");
}

}  // namespace fsi
