#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fsi/continuity.hpp"
#include "fsi/energy.hpp"
#include "fsi/fsp.hpp"
#include "fsi/ssp.hpp"

using namespace fsi;

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("korn-like constant is a valid pointwise witness") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);

    for (auto [mu, lambda] : {std::pair{1.0, 0.0}, {1.0, -0.5}, {2.0, 3.0}, {0.3, -0.1}}) {
        const double c = korn_like_lower_bound(mu, lambda);
        CHECK(c > 0.0);
        // a trace-free gradient realizes mu |G|^2, so c cannot beat mu
        CHECK(c <= mu + 1e-12);
        for (int trial = 0; trial < 200; ++trial) {
            double g11 = entry(rng), g12 = entry(rng), g21 = entry(rng), g22 = entry(rng);
            const double frob = g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22;
            const double div = g11 + g22;
            CHECK(mu * frob + (mu + lambda) * div * div >= c * frob - 1e-12);
        }
    }
}

TEST_CASE("entropy is the jacobian-weighted r log r cell sum and decays under diffusion") {
    const Grid2D g(24, 16, 1.0);

    Field r(Eigen::Index(g.cells()));
    Vec w_cent(Eigen::Index(g.nx));
    for (std::size_t i = 0; i < g.nx; ++i) w_cent[Eigen::Index(i)] = 0.05 * std::sin(g.xc(i));
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            r[Eigen::Index(g.idx(i, j))] =
                1.0 + 0.3 * std::cos(kPi * g.xc(i)) * std::cos(kPi * (g.zc(j) + 1.0));

    double want = 0.0;
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double v = r[Eigen::Index(g.idx(i, j))];
            want += g.cell_area() * (1.0 + w_cent[Eigen::Index(i)]) * v * std::log(v);
        }
    CHECK(entropy_functional(g, w_cent, r) == doctest::Approx(want).epsilon(1e-13));

    // rigid walls, no velocity: diffusion alone must not create entropy
    const ContinuitySolver solver(g, 0.5);
    FieldProvider rest = [g](double, TransportField& f) {
        f.resize(g);
        f.w_face.setZero();
        f.wx_face.setZero();
        f.wt_face.setZero();
        f.w_cent.setZero();
        f.wx_cent.setZero();
        f.wt_cent.setZero();
        f.u1_vert.setZero();
        f.u2_vert.setZero();
        f.u1_horz.setZero();
        f.u2_horz.setZero();
    };
    const auto res = solver.advance(r, 0.0, 0.5, 32, rest, true);
    const Vec flat = Vec::Zero(Eigen::Index(g.nx));
    const double h0 = entropy_functional(g, flat, res.r.front());
    double prev = h0;
    for (const auto& state : res.r) {
        const double h = entropy_functional(g, flat, state);
        CHECK(h <= prev + 1e-9);
        prev = h;
    }
    CHECK(entropy_functional(g, flat, res.r.back()) < h0 - 1e-4);
}

TEST_CASE("ledger reproduces closed forms on a uniform state") {
    const double L = 1.0;
    const std::size_t k = 2;
    const auto plate = make_plate_basis(k, L);
    const auto fluid = make_fluid_basis(k, L, plate, 64);
    const Grid2D grid(16, 8, L);

    FspParams par;  // gamma 2, a 9, delta 1e-3, mu 1, lambda 0
    par.dt = 0.05;
    const FspSystem fs(plate, fluid, grid, par);

    HeatBasis heat{L, k};
    const auto cm = assemble_coupled_matrices(plate, heat, 40);
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    const SspSystem ss(plate, heat, cm, nl, par.dt, par.delta, 30);

    PlateState rest;
    rest.beta = Vec::Zero(k);
    rest.gamma = Vec::Zero(k);
    rest.alpha = Vec::Zero(k);

    Vec alpha = Vec::Zero(2 * k);
    alpha[0] = 0.7;  // one interior rectangle eigenmode
    const Field r = Field::Constant(Eigen::Index(grid.cells()), 2.0);

    const auto led = compute_ledger(fs, ss, rest, alpha, r);

    // the mode is L2-normalized: kinetic = r |alpha|^2 / 2 over the unit box
    CHECK(led.kinetic == doctest::Approx(0.5 * 2.0 * 0.49).epsilon(1e-9));
    // internal = r^2/(2-1) * |Omega|, artificial = 1e-3 * 2^9/8
    CHECK(led.internal == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(led.artificial_internal == doctest::Approx(1e-3 * 64.0).epsilon(1e-12));
    CHECK(led.mass == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(led.entropy == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

    // Dirichlet eigenmode: int |grad phi|^2 = eigenvalue = 2 pi^2 and both
    // component choices give int (div g)^2 = pi^2, so the viscous rate is
    // alpha^2 (mu 2 pi^2 + (mu + lambda) pi^2)
    CHECK(led.df_rate == doctest::Approx(0.49 * 3.0 * kPi * kPi).epsilon(1e-8));
    CHECK(led.fd_eps_rate == 0.0);

    // plate at rest contributes nothing
    CHECK(led.plate_total() == 0.0);
    CHECK(led.ds_rate == 0.0);
    CHECK(led.plate_kinetic_half == 0.0);

    // the roll-up members are plain sums of the parts
    CHECK(led.fluid_total() ==
          doctest::Approx(led.kinetic + led.internal + led.artificial_internal).epsilon(1e-15));
    CHECK(led.total() == doctest::Approx(led.fluid_total() + led.plate_total()).epsilon(1e-15));
}

TEST_CASE("plate-side ledger entries match the structure energy") {
    const double L = 1.0;
    const std::size_t k = 2;
    const auto plate = make_plate_basis(k, L);
    const auto fluid = make_fluid_basis(k, L, plate, 64);
    const Grid2D grid(12, 6, L);
    FspParams par;
    par.dt = 0.05;
    const FspSystem fs(plate, fluid, grid, par);

    HeatBasis heat{L, k};
    const auto cm = assemble_coupled_matrices(plate, heat, 40);
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    const SspSystem ss(plate, heat, cm, nl, par.dt, par.delta, 40);

    PlateState s;
    s.beta = Vec::Zero(k);
    s.gamma = Vec::Zero(k);
    s.alpha = Vec::Zero(k);
    s.beta << 0.03, -0.01;
    s.gamma << 0.4, 0.1;
    s.alpha << 0.2, -0.05;

    const Vec a0 = Vec::Zero(2 * k);
    const Field r = Field::Constant(Eigen::Index(grid.cells()), 1.0);
    const auto led = compute_ledger(fs, ss, s, a0, r);

    CHECK(led.plate_kinetic_half == doctest::Approx(0.5 * s.gamma.squaredNorm()).epsilon(1e-14));
    CHECK(led.plate_kinetic_quarter ==
          doctest::Approx(0.25 * s.gamma.squaredNorm()).epsilon(1e-14));
    CHECK(led.heat == doctest::Approx(0.5 * s.alpha.squaredNorm()).epsilon(1e-14));
    CHECK(led.potential == doctest::Approx(ss.potential(s.beta)).epsilon(1e-12));

    // the quarter-weight roll-up is exactly the structure energy functional
    CHECK(led.plate_total() == doctest::Approx(ss.energy(s)).epsilon(1e-12));

    // heat dissipation rate is the Dirichlet form of the temperature modes
    CHECK(led.ds_rate ==
          doctest::Approx(s.alpha.dot(ss.xi_h.cwiseProduct(s.alpha))).epsilon(1e-12));
}

TEST_CASE("reference-domain kinetic energy equals the physical-domain integral") {
    const double L = 1.0;
    const std::size_t k = 2;
    const auto plate = make_plate_basis(k, L);
    const auto fluid = make_fluid_basis(k, L, plate, 128);
    const Grid2D grid(16, 8, L);
    FspParams par;
    par.dt = 0.05;
    const FspSystem fs(plate, fluid, grid, par);

    HeatBasis heat{L, k};
    const auto cm = assemble_coupled_matrices(plate, heat, 40);
    NonlinearitySpec nl;
    const SspSystem ss(plate, heat, cm, nl, par.dt, par.delta, 30);

    PlateState s;
    s.beta = Vec::Zero(k);
    s.gamma = Vec::Zero(k);
    s.alpha = Vec::Zero(k);
    s.beta << 0.06, -0.02;

    Vec alpha(2 * k);
    alpha << 0.3, -0.1, 0.2, 0.05;
    const double rv = 1.3;  // uniform density, so sampling is exact
    const Field r = Field::Constant(Eigen::Index(grid.cells()), rv);

    const auto led = compute_ledger(fs, ss, s, alpha, r);

    // integrate (r/2) |U|^2 over the moving subgraph domain directly; the
    // velocity transforms by composition with the inverse vertical map
    const GaussRule gx(40, 0.0, L);
    double phys = 0.0;
    double out[6];
    for (std::size_t qx = 0; qx < gx.size(); ++qx) {
        const double x = gx.x[qx];
        const double w = plate.field(s.beta, x);
        const GaussRule gy(40, -1.0, w);
        double col = 0.0;
        for (std::size_t qy = 0; qy < gy.size(); ++qy) {
            const double z = (gy.x[qy] - w) / (1.0 + w);  // inverse of (z+1)w + z
            double u0 = 0.0, u1 = 0.0;
            for (std::size_t g = 0; g < fluid.size(); ++g) {
                fluid.eval(g, x, z, out);
                u0 += alpha[Eigen::Index(g)] * out[0];
                u1 += alpha[Eigen::Index(g)] * out[1];
            }
            col += gy.w[qy] * 0.5 * rv * (u0 * u0 + u1 * u1);
        }
        phys += gx.w[qx] * col;
    }
    CHECK(led.kinetic == doctest::Approx(phys).epsilon(1e-9));
}

TEST_CASE("ledger functionals are stable under quadrature doubling") {
    const double L = 1.0;
    const std::size_t k = 2;
    const auto plate = make_plate_basis(k, L);
    const auto fluid = make_fluid_basis(k, L, plate, 128);
    const Grid2D grid(16, 8, L);

    HeatBasis heat{L, k};
    const auto cm = assemble_coupled_matrices(plate, heat, 40);
    NonlinearitySpec nl;

    PlateState s;
    s.beta = Vec::Zero(k);
    s.gamma = Vec::Zero(k);
    s.alpha = Vec::Zero(k);
    s.beta << 0.05, -0.015;
    s.gamma << 0.2, 0.1;

    Vec alpha(2 * k);
    alpha << 0.25, -0.1, 0.15, 0.05;
    const Field r = Field::Constant(Eigen::Index(grid.cells()), 1.2);

    auto ledger_at = [&](std::size_t qx, std::size_t qz) {
        FspParams par;
        par.dt = 0.05;
        par.quad_x = qx;
        par.quad_z = qz;
        const FspSystem fs(plate, fluid, grid, par);
        const SspSystem ss(plate, heat, cm, nl, par.dt, par.delta, 30);
        return compute_ledger(fs, ss, s, alpha, r);
    };

    const auto base = ledger_at(26, 20);
    const auto fine = ledger_at(52, 40);
    auto rel = [](double a, double b) { return std::abs(a - b) / (std::abs(b) + 1e-300); };
    CHECK(rel(base.kinetic, fine.kinetic) < 1e-10);
    CHECK(rel(base.internal, fine.internal) < 1e-12);
    // the viscous rate integrates gradients of the lifting profiles, which are
    // resolved on a finite vertical grid; that representation, not the Gauss
    // order, sets the floor here (about 4e-8 at the default 128 intervals)
    CHECK(rel(base.df_rate, fine.df_rate) < 1e-7);
    // cell-sum quantities do not see the quadrature at all
    CHECK(base.mass == fine.mass);
    CHECK(base.entropy == fine.entropy);
}

TEST_CASE("telescoped verdict accepts a dissipative ledger and flags a jump") {
    const double dt = 0.05, horizon = 0.4;
    const std::size_t n = 8;
    std::vector<WindowEnergyTotals> windows(n);
    for (std::size_t m = 0; m < n; ++m) {
        auto& w = windows[m];
        const double decay = double(n - m) / double(n);
        w.s_end = 0.01 * decay;
        w.f_end = 0.02 * decay;
        w.sd = 1e-3;
        w.fd = 1e-3;
        w.pen_gap_ssp = 1e-4;
        w.pen_gap_fsp = 1e-4;
        w.pen_v_end = 1e-4;
        w.production = 1e-6;
        w.ssp_residual = 1e-10;
        w.fsp_residual = 1e-10;
    }

    const auto ok = telescoped_bound_verdict(1.0, 0.1, 0.5, horizon, dt, windows);
    CHECK(ok.pass);
    CHECK(ok.min_margin > 0.0);
    REQUIRE(ok.lhs.size() == n);
    REQUIRE(ok.rhs.size() == n);
    for (std::size_t m = 0; m < n; ++m) CHECK(ok.lhs[m] <= ok.rhs[m]);

    // inject an energy jump no allowance can absorb
    windows[5].f_end = 25.0;
    const auto bad = telescoped_bound_verdict(1.0, 0.1, 0.5, horizon, dt, windows);
    CHECK(!bad.pass);
    CHECK(bad.min_margin < 0.0);
}
