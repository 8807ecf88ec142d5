#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fsi/bases.hpp"
#include "fsi/gauss.hpp"
#include "fsi/ssp.hpp"

using namespace fsi;

namespace {

struct Rig {
    PlateBasis plate;
    HeatBasis heat;
    CoupledMatrices cm;
    SspSystem sys;

    Rig(std::size_t k, NonlinearitySpec nl, double dt, double delta)
        : plate(make_plate_basis(k, 1.0)),
          heat{1.0, k},
          cm(assemble_coupled_matrices(plate, heat, 60)),
          sys(plate, heat, cm, nl, dt, delta, 44) {}
};

// modest amplitudes: the cubic term stiffens the plate quartically, and the
// explicit window integrator must stay inside its stability region
Vec some_beta(std::size_t k) {
    Vec b(k);
    for (std::size_t i = 0; i < k; ++i)
        b[Eigen::Index(i)] = 0.02 / double(1 + i * i) * (i % 2 ? -1 : 1);
    return b;
}

}  // namespace

TEST_CASE("cubic nonlinearity and potential match an independent quadrature") {
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    Rig rig(3, nl, 0.05, 1e-3);
    const Vec beta = some_beta(3);

    const GaussRule rule(300, 0.0, 1.0);
    auto w2 = [&](double x) { return rig.plate.field(beta, x, 2); };

    const Vec F = rig.sys.nonlinearity(beta);
    for (std::size_t j = 0; j < 3; ++j) {
        const double want = rule.integrate([&](double x) {
            const double c = w2(x);
            return c * c * c * rig.plate.eval(j, x, 2);
        });
        CHECK(F[Eigen::Index(j)] == doctest::Approx(want).epsilon(1e-9));
    }
    const double pi_want = 0.25 * rule.integrate([&](double x) {
        const double c = w2(x);
        return c * c * c * c;
    });
    CHECK(rig.sys.potential(beta) == doctest::Approx(pi_want).epsilon(1e-9));
}

TEST_CASE("berger nonlinearity reduces to its closed form") {
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::berger_type;
    nl.q1 = 1.7;
    nl.q2 = 0.45;
    Rig rig(3, nl, 0.05, 1e-3);
    const Vec beta = some_beta(3);

    const GaussRule rule(300, 0.0, 1.0);
    const double stretch = rule.integrate([&](double x) {
        const double d = rig.plate.field(beta, x, 1);
        return d * d;
    });
    const Vec F = rig.sys.nonlinearity(beta);
    for (std::size_t j = 0; j < 3; ++j) {
        const double want = (nl.q1 * stretch - nl.q2) * rule.integrate([&](double x) {
            return rig.plate.field(beta, x, 1) * rig.plate.eval(j, x, 1);
        });
        CHECK(F[Eigen::Index(j)] == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(rig.sys.potential(beta) ==
          doctest::Approx(0.25 * nl.q1 * stretch * stretch - 0.5 * nl.q2 * stretch)
              .epsilon(1e-10));
}

TEST_CASE("nonlinearity is the gradient of the potential") {
    for (auto kind : {NonlinearitySpec::Kind::cubic_quasilinear,
                      NonlinearitySpec::Kind::berger_type}) {
        NonlinearitySpec nl;
        nl.kind = kind;
        nl.q1 = 1.2;
        nl.q2 = 0.3;
        Rig rig(3, nl, 0.05, 1e-3);
        const Vec beta = some_beta(3);

        const double h = 1e-6;
        const Vec F = rig.sys.nonlinearity(beta);
        for (Eigen::Index j = 0; j < 3; ++j) {
            Vec bp = beta, bm = beta;
            bp[j] += h;
            bm[j] -= h;
            const double fd = (rig.sys.potential(bp) - rig.sys.potential(bm)) / (2.0 * h);
            CHECK(F[j] == doctest::Approx(fd).epsilon(5e-6));
        }
    }
}

TEST_CASE("coercivity witness keeps the shifted potential nonnegative") {
    const auto plate = make_plate_basis(3, 1.0);
    const GaussRule rule(200, 0.0, 1.0);
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);

    for (auto kind : {NonlinearitySpec::Kind::linear_zero,
                      NonlinearitySpec::Kind::cubic_quasilinear,
                      NonlinearitySpec::Kind::berger_type}) {
        NonlinearitySpec nl;
        nl.kind = kind;
        nl.q1 = 0.8;
        nl.q2 = 1.5;  // negative potential dips exercise the shift
        const auto wit = coercivity_witness(nl);
        CHECK(wit.kappa >= 0.0);
        CHECK(wit.cstar >= 0.0);

        Rig rig(3, nl, 0.05, 1e-3);
        for (int trial = 0; trial < 50; ++trial) {
            Vec beta(3);
            for (Eigen::Index j = 0; j < 3; ++j) beta[j] = amp(rng);
            const double bend = rule.integrate([&](double x) {
                const double c = plate.field(beta, x, 2);
                return c * c;
            });
            CHECK(wit.kappa * bend + rig.sys.potential(beta) + wit.cstar >= -1e-12);
        }
    }
}

TEST_CASE("trace history interpolates linear data exactly") {
    TraceHistory h;
    h.t0 = 2.0;
    h.dt_sample = 0.25;
    for (int s = 0; s < 5; ++s) {
        Vec v(2);
        const double t = h.t0 + 0.25 * s;
        v << 1.0 + 3.0 * t, -2.0 * t;
        h.samples.push_back(v);
    }
    for (double t : {2.0, 2.1, 2.4, 2.625, 3.0}) {
        const Vec v = h.eval(t);
        CHECK(v[0] == doctest::Approx(1.0 + 3.0 * t).epsilon(1e-14));
        CHECK(v[1] == doctest::Approx(-2.0 * t).epsilon(1e-14));
    }

    Vec v0(2);
    v0 << 0.7, -0.1;
    const auto c = TraceHistory::constant(v0, 0.0, 1.0);
    CHECK((c.eval(0.42) - v0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("without the penalty the window dissipates plate plus heat energy") {
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    Rig rig(3, nl, 0.05, 1e-3);
    rig.sys.penalty = false;

    PlateState init;
    init.beta = some_beta(3);
    init.gamma = Vec::Zero(3);
    init.gamma << 0.1, -0.02, 0.01;
    init.alpha = Vec::Zero(3);
    init.alpha << 0.1, 0.0, 0.0;
    init.t = 0.0;

    const auto trace = TraceHistory::constant(Vec::Zero(3), 0.0, 0.05);
    const auto out = ssp_step(rig.sys, init, trace, 0.05, 128);

    // S' = -||grad theta||^2 <= 0, so energy decays monotonically up to
    // integrator error
    for (std::size_t s = 0; s + 1 < out.energy.size(); ++s)
        CHECK(out.energy[s + 1] <= out.energy[s] + 1e-9);
    CHECK(out.energy.front() == doctest::Approx(rig.sys.energy(init)).epsilon(1e-14));
    CHECK(out.energy.back() < out.energy.front());
    CHECK(out.dissipation.back() > 0.0);

    // the identity residual is pure integrator error: halving the step cuts
    // it by the classical factor 16
    const auto coarse = ssp_step(rig.sys, init, trace, 0.05, 64);
    REQUIRE(coarse.max_abs_residual > 0.0);
    CHECK(out.max_abs_residual < coarse.max_abs_residual / 10.0);
    CHECK(coarse.max_abs_residual < 1e-3 * (coarse.energy.front() + 1.0));
}

TEST_CASE("window integrator shows fourth order steps") {
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::cubic_quasilinear;
    Rig rig(2, nl, 0.05, 1e-3);

    PlateState init;
    init.beta = some_beta(2);
    init.gamma = Vec::Zero(2);
    init.gamma << 0.2, -0.05;
    init.alpha = Vec::Zero(2);
    init.t = 0.0;

    Vec v0(2);
    v0 << 0.1, 0.02;
    const auto trace = TraceHistory::constant(v0, 0.0, 0.05);

    const Vec ref = ssp_step(rig.sys, init, trace, 0.05, 1024).beta_end();
    std::vector<double> errs;
    for (std::size_t n : {16, 32, 64}) {
        const Vec got = ssp_step(rig.sys, init, trace, 0.05, n).beta_end();
        errs.push_back((got - ref).cwiseAbs().maxCoeff());
    }
    REQUIRE(errs[0] > 0.0);
    const double order = std::log2(errs[0] / errs[1]);
    const double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order > 3.6);
    CHECK(order2 > 3.5);
}

TEST_CASE("penalty drives the plate velocity toward the forcing trace") {
    NonlinearitySpec nl;
    nl.kind = NonlinearitySpec::Kind::linear_zero;
    const double dt = 0.02;  // strong penalty 1/dt
    Rig rig(2, nl, dt, 0.0);

    PlateState init;
    init.beta = Vec::Zero(2);
    init.gamma = Vec::Zero(2);
    init.alpha = Vec::Zero(2);
    init.t = 0.0;

    Vec v0(2);
    v0 << 1.0, 0.0;
    const auto trace = TraceHistory::constant(v0, 0.0, dt);
    const auto out = ssp_step(rig.sys, init, trace, dt, 64);

    // after one window the gap |gamma - v| shrinks to O(exp(-1)) of the jump
    const double gap0 = (init.gamma - v0).norm();
    const double gap1 = (out.gamma.back() - v0).norm();
    CHECK(gap1 < 0.6 * gap0);
    CHECK(out.pen_gap > 0.0);
    CHECK(out.pen_forcing == doctest::Approx(dt * v0.squaredNorm()).epsilon(1e-12));
}
