#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "fsi/energy.hpp"
#include "fsi/fsp.hpp"

using namespace fsi;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rig {
    PlateBasis plate;
    FluidBasis fluid;
    Grid2D grid;
    FspParams par;
    FspSystem sys;

    explicit Rig(double window)
        : plate(make_plate_basis(2, 1.0)),
          fluid(make_fluid_basis(2, 1.0, plate, 64)),
          grid(16, 8, 1.0),
          par(make_params(window)),
          sys(plate, fluid, grid, par) {}

    static FspParams make_params(double window) {
        FspParams p;
        p.dt = window;
        return p;
    }
};

Field cosine_density(const Grid2D& g, double amp) {
    Field r(Eigen::Index(g.cells()));
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            r[Eigen::Index(g.idx(i, j))] =
                1.0 + amp * std::cos(kPi * g.xc(i) / g.L) * std::cos(kPi * (g.zc(j) + 1.0));
    return r;
}

PlateTrajectory linear_motion(const Vec& b0, const Vec& g0, double t0, double t1) {
    PlateTrajectory traj;
    traj.times = {t0, t1};
    traj.beta = {b0, b0 + (t1 - t0) * g0};
    traj.gamma = {g0, g0};
    return traj;
}

}  // namespace

TEST_CASE("pressure law and its potential obey the Gibbs relation") {
    FspParams p;
    p.gamma_exp = 2.0;
    p.a_exp = 9.0;
    p.delta = 1e-3;
    for (double r : {0.4, 0.9, 1.0, 1.7}) {
        CHECK(pressure_of(p, r) ==
              doctest::Approx(std::pow(r, 2.0) + 1e-3 * std::pow(r, 9.0)).epsilon(1e-15));
        CHECK(pressure_potential_of(p, r) ==
              doctest::Approx(std::pow(r, 2.0) + 1e-3 * std::pow(r, 9.0) / 8.0).epsilon(1e-15));
        // r P'(r) - P(r) = p(r) ties the potential to the pressure
        const double h = 1e-6 * r;
        const double dP = (pressure_potential_of(p, r + h) - pressure_potential_of(p, r - h)) /
                          (2.0 * h);
        CHECK(r * dP - pressure_potential_of(p, r) ==
              doctest::Approx(pressure_of(p, r)).epsilon(1e-7));
    }
}

TEST_CASE("trajectory interpolators are exact on their nodes and lines") {
    Vec a0(2), a1(2);
    a0 << 0.3, -0.1;
    a1 << 0.5, 0.7;

    VelocityTrajectory v;
    v.times = {1.0, 1.5};
    v.alpha = {a0, a1};
    CHECK((v.eval(1.0) - a0).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((v.eval(1.5) - a1).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((v.eval(1.25) - 0.5 * (a0 + a1)).cwiseAbs().maxCoeff() < 1e-15);

    const auto c = VelocityTrajectory::constant(a0, 0.0, 1.0);
    CHECK((c.eval(0.77) - a0).cwiseAbs().maxCoeff() == 0.0);

    const auto traj = linear_motion(a0, a1, 0.0, 0.1);
    Vec b, g;
    traj.sample(0.05, b, g);
    CHECK((b - (a0 + 0.05 * a1)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((g - a1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("flat velocity gram has an orthonormal interior block") {
    Rig rig(0.05);
    const Mat G = velocity_gram(rig.sys);
    REQUIRE(G.rows() == 4);
    CHECK((G - G.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            CHECK(G(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
    // the full gram including lifts stays positive definite
    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("mass matrix is SPD and bounded below by the weighted gram") {
    Rig rig(0.05);
    Vec beta(2);
    beta << 0.04, -0.02;
    const Field r = cosine_density(rig.grid, 0.25);

    const auto mm = mass_matrix(rig.sys, beta, r);
    CHECK((mm.m - mm.m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mm.min_weight > 0.0);

    Eigen::SelfAdjointEigenSolver<Mat> em(mm.m);
    Eigen::SelfAdjointEigenSolver<Mat> eg(velocity_gram(rig.sys));
    CHECK(em.eigenvalues().minCoeff() >=
          mm.min_weight * eg.eigenvalues().minCoeff() - 1e-12);

    // uniform density over a flat plate collapses the matrix to c times the gram
    const Field flat = Field::Constant(Eigen::Index(rig.grid.cells()), 1.4);
    const auto mu = mass_matrix(rig.sys, Vec::Zero(2), flat);
    CHECK(mu.min_weight == doctest::Approx(1.4).epsilon(1e-12));
    CHECK((mu.m - 1.4 * velocity_gram(rig.sys)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fluid window over a resting plate converges and dissipates") {
    const double window = 0.05;
    Rig rig(window);

    const Field r0 = Field::Constant(Eigen::Index(rig.grid.cells()), 1.0);
    Vec alpha0 = Vec::Zero(4);
    alpha0[0] = 0.2;  // interior mode only, plate untouched

    const auto motion = linear_motion(Vec::Zero(2), Vec::Zero(2), 0.0, window);
    PicardOptions opt;
    opt.tolerance = 1e-11;
    opt.max_iterations = 50;

    const auto res = fsp_step(rig.sys, r0, alpha0, motion, 0.0, window, 8, opt);
    CHECK(res.iterations < opt.max_iterations);
    CHECK(res.last_update < 1e-8);
    REQUIRE(res.alpha.size() == 9);
    CHECK((res.alpha.front() - alpha0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.times.front() == 0.0);
    CHECK(res.times.back() == doctest::Approx(window).epsilon(1e-14));
    CHECK((res.density.r.front() - r0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.density.min_value > 0.0);

    // viscosity and the trace penalty can only drain a free oscillation
    CHECK(res.alpha.back().norm() < alpha0.norm());

    // the published density obeys the transport mass balance
    const double defect = res.density.mass_end - res.density.mass_start - res.density.production;
    CHECK(std::abs(defect) < 1e-13);
}

TEST_CASE("picard updates contract geometrically") {
    const double window = 0.05;
    Rig rig(window);

    const Field r0 = cosine_density(rig.grid, 0.2);
    Vec alpha0(4);
    alpha0 << 0.08, 0.0, 0.02, 0.0;

    Vec b0(2), g0(2);
    b0 << 0.03, -0.01;
    g0 << 0.12, 0.05;
    const auto motion = linear_motion(b0, g0, 0.0, window);

    PicardOptions opt;
    opt.tolerance = 1e-12;
    opt.max_iterations = 60;
    const auto res = fsp_step(rig.sys, r0, alpha0, motion, 0.0, window, 8, opt);

    REQUIRE(res.update_history.size() >= 3);
    for (std::size_t i = 1; i < res.update_history.size(); ++i)
        CHECK(res.update_history[i] < 0.9 * res.update_history[i - 1]);
    CHECK(res.iterations < opt.max_iterations);
}

TEST_CASE("energy identity residual is small on a smooth moving window") {
    const double window = 0.05;
    Rig rig(window);

    const Field r0 = cosine_density(rig.grid, 0.2);
    Vec alpha0(4);
    alpha0 << 0.08, 0.0, 0.0, 0.0;

    Vec b0(2), g0(2);
    b0 << 0.03, -0.01;
    g0 << 0.12, 0.05;
    const auto motion = linear_motion(b0, g0, 0.0, window);

    PicardOptions opt;
    opt.tolerance = 1e-12;
    opt.max_iterations = 60;
    const auto res = fsp_step(rig.sys, r0, alpha0, motion, 0.0, window, 16, opt);
    const auto rep = fsp_energy_identity(rig.sys, res, motion);

    CHECK(rep.f_start > 0.0);
    CHECK(rep.f_end > 0.0);
    CHECK(rep.dissipation >= 0.0);
    CHECK(rep.trace_gap >= 0.0);
    CHECK(rep.trace_v >= 0.0);
    CHECK(rep.trace_wt > 0.0);
    CHECK(rep.force_work == 0.0);
    CHECK(std::abs(rep.residual) < 5e-3 * (rep.f_start + 1.0));
}
