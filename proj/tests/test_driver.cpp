#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "fsi/driver.hpp"
#include "fsi/output.hpp"

using namespace fsi;

namespace {

// small but non-trivial configuration that keeps each window cheap
RunConfig small_config() {
    RunConfig c;
    c.k = 2;
    c.nx = 12;
    c.nz = 6;
    c.T = 0.08;
    c.N = 2;
    c.fsp_substeps = 4;
    c.lifting_intervals = 64;
    c.quad_x = 18;
    c.quad_z = 14;
    c.nonlin_quad = 30;
    c.pair_quad = 24;
    c.init_beta = {0.01, -0.005};
    c.init_gamma = {0.05, 0.02};
    c.init_theta = {0.01};
    c.init_velocity = {0.1, 0.0, 0.05, 0.0};
    c.init_density_wiggle = 0.1;
    validate_config(c);
    return c;
}

}  // namespace

TEST_CASE("small run completes with coherent window bookkeeping") {
    const RunConfig cfg = small_config();
    const RunOutput out = run(cfg);

    CHECK(out.status == RunStatus::completed);
    REQUIRE(out.windows.size() == cfg.N);
    CHECK(out.dt == doctest::Approx(cfg.dt()).epsilon(1e-15));
    CHECK(out.horizon_reached == doctest::Approx(cfg.T).epsilon(1e-12));
    CHECK(out.e0_total > 0.0);
    CHECK(!out.ledger.empty());
    CHECK(out.telescope.pass);

    double t_prev = 0.0;
    for (std::size_t m = 0; m < out.windows.size(); ++m) {
        const auto& w = out.windows[m];
        CHECK(w.index == m);
        CHECK(w.t_end > t_prev);
        t_prev = w.t_end;
        CHECK(w.min_j > 0.0);
        CHECK(w.picard_iterations >= 1);
        // the transport mass balance is exact within each window
        CHECK(std::abs(w.mass_end - w.mass_start - w.production) <
              1e-12 * (std::abs(w.mass_start) + 1.0));
        CHECK(w.gap_sq >= 0.0);
        CHECK(w.sd >= 0.0);
        CHECK(w.fd >= 0.0);
    }
    // windows hand the density off without touching it
    for (std::size_t m = 0; m + 1 < out.windows.size(); ++m)
        CHECK(out.windows[m + 1].mass_start ==
              doctest::Approx(out.windows[m].mass_end).epsilon(1e-14));

    CHECK(out.plate_final.beta.size() == Eigen::Index(cfg.k));
    CHECK(out.alpha_final.size() == Eigen::Index(2 * cfg.k));
    CHECK(out.r_final.size() == Eigen::Index(cfg.nx * cfg.nz));
    CHECK(out.r_final.minCoeff() > 0.0);
}

TEST_CASE("repeat runs are bitwise identical") {
    const RunConfig cfg = small_config();
    const RunOutput a = run(cfg);
    const RunOutput b = run(cfg);

    CHECK(!handoff_mismatch(a.r_final, b.r_final).has_value());
    CHECK(!handoff_mismatch(a.alpha_final, b.alpha_final).has_value());
    CHECK(!handoff_mismatch(a.plate_final.beta, b.plate_final.beta).has_value());
    CHECK(!handoff_mismatch(a.plate_final.gamma, b.plate_final.gamma).has_value());

    // the serialized artifacts agree byte for byte
    CHECK(ledger_csv(a.ledger) == ledger_csv(b.ledger));
    CHECK(windows_csv(a.windows) == windows_csv(b.windows));
}

TEST_CASE("handoff mismatch reports the first differing index") {
    Vec a(4), b(4);
    a << 1.0, 2.0, 3.0, 4.0;
    b = a;
    CHECK(!handoff_mismatch(a, b).has_value());

    b[2] = std::nextafter(b[2], 10.0);
    const auto hit = handoff_mismatch(a, b);
    REQUIRE(hit.has_value());
    CHECK(*hit == 2);

    Vec c(3);
    c << 1.0, 2.0, 3.0;
    CHECK(handoff_mismatch(a, c).has_value());
}

TEST_CASE("buckling plate reaches the collision floor and stops cleanly") {
    RunConfig cfg = small_config();
    cfg.T = 0.6;
    cfg.N = 12;
    cfg.nonlinearity = "berger";
    cfg.q1 = 0.05;
    cfg.q2 = 60.0;  // destabilizing compression overwhelms the bending stiffness
    cfg.init_beta = {-0.3, 0.0};
    cfg.init_gamma = {-1.5, 0.0};
    cfg.init_velocity = {};
    validate_config(cfg);

    const RunOutput out = run(cfg);
    CHECK(out.status == RunStatus::collision);
    CHECK(out.windows.size() < cfg.N);
    CHECK(out.horizon_reached < cfg.T);
    // the offending window is named in a warning, whichever guard fired
    bool mentioned = false;
    for (const auto& w : out.warnings) mentioned = mentioned || w.find("window") != std::string::npos;
    CHECK(mentioned);
}

TEST_CASE("symmetric start stays in the symmetric sector and sheds energy") {
    // a uniformly pressurized channel under a flat lid is not an equilibrium
    // (the pressure deflects the plate), but mirror symmetry about L/2 and
    // total-energy decay survive the whole run
    RunConfig cfg = small_config();
    cfg.init_beta = {};
    cfg.init_gamma = {};
    cfg.init_theta = {};
    cfg.init_velocity = {};
    cfg.init_density_wiggle = 0.0;
    validate_config(cfg);

    const RunOutput out = run(cfg);
    REQUIRE(out.status == RunStatus::completed);

    // beam mode 1 and heat mode 1 are odd about the midpoint; symmetric data
    // can never excite them
    CHECK(std::abs(out.plate_final.beta[1]) < 1e-8);
    CHECK(std::abs(out.plate_final.gamma[1]) < 1e-8);
    CHECK(std::abs(out.plate_final.alpha[1]) < 1e-8);

    // a symmetric flow carries an odd horizontal velocity, so the even
    // horizontal interior mode stays empty while the vertical one may move
    const auto fluid = make_fluid_basis(cfg.k, cfg.L, make_plate_basis(cfg.k, cfg.L),
                                        cfg.lifting_intervals);
    for (std::size_t g = 0; g < cfg.k; ++g)
        if (fluid.interior[g].component == 0 && fluid.interior[g].m % 2 == 1)
            CHECK(std::abs(out.alpha_final[Eigen::Index(g)]) < 1e-8);
    // the odd lift mode stays empty too
    CHECK(std::abs(out.alpha_final[Eigen::Index(cfg.k + 1)]) < 1e-8);

    // closed dissipative system: no ledger row may exceed the initial total
    REQUIRE(out.ledger.size() >= 2);
    for (const auto& row : out.ledger)
        CHECK(row.total() <= out.ledger.front().total() + 1e-9);
    CHECK(out.telescope.pass);
}

TEST_CASE("continuation schedule follows the quartic clearance recurrence") {
    const double c_of_e0 = 2.0;
    auto inc = [&](double clearance) {
        const double q = clearance / (2.0 * c_of_e0);
        return (q * q) * (q * q);
    };

    // the schedule leads with the base horizon, then one entry per extension
    const auto full = continuation_schedule({0.5, 0.4, 0.3}, c_of_e0, 1.0);
    REQUIRE(full.size() == 4);
    CHECK(full[0] == 1.0);
    CHECK(full[1] == 1.0 + inc(0.5));
    CHECK(full[2] == full[1] + inc(0.4));
    CHECK(full[3] == full[2] + inc(0.3));

    // a nonpositive clearance ends the extension immediately
    const auto stopped = continuation_schedule({0.5, 0.0, 0.3}, c_of_e0, 1.0);
    CHECK(stopped.size() == 2);
    const auto none = continuation_schedule({-0.1, 0.5}, c_of_e0, 1.0);
    CHECK(none.size() == 1);
}

TEST_CASE("output cadence controls ledger rows and field dumps") {
    RunConfig cfg = small_config();
    cfg.N = 4;
    cfg.T = 0.16;
    cfg.fields_every = 2;
    cfg.ledger_every = 2;
    validate_config(cfg);

    const RunOutput out = run(cfg);
    REQUIRE(out.status == RunStatus::completed);
    CHECK(!out.field_dumps.empty());
    for (std::size_t d = 0; d + 1 < out.field_dumps.size(); ++d)
        CHECK(out.field_dumps[d].first < out.field_dumps[d + 1].first);
    for (const auto& [idx, field] : out.field_dumps) {
        CHECK(idx < cfg.N);
        CHECK(field.size() == Eigen::Index(cfg.nx * cfg.nz));
    }

    RunConfig dense = cfg;
    dense.ledger_every = 1;
    const RunOutput fine = run(dense);
    CHECK(fine.ledger.size() > out.ledger.size());
}
