#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "fsi/ale.hpp"
#include "fsi/errors.hpp"
#include "fsi/grid.hpp"

using namespace fsi;

TEST_CASE("reference map, inverse, and jacobian round trip") {
    const double w = 0.3;
    for (double z : {-1.0, -0.6, -0.25, 0.0}) {
        const auto p = ale_map_point(w, 0.4, z);
        CHECK(p[0] == 0.4);
        CHECK(p[1] == doctest::Approx((z + 1.0) * w + z).epsilon(1e-15));
        CHECK(ale_inverse_z(w, p[1]) == doctest::Approx(z).epsilon(1e-14));
    }
    // endpoints are fixed: the bottom wall never moves, the top follows w
    CHECK(ale_map_point(w, 0.0, -1.0)[1] == -1.0);
    CHECK(ale_map_point(w, 0.0, 0.0)[1] == doctest::Approx(w));

    CHECK(ale_jacobian(w, 1e-6) == doctest::Approx(1.0 + w).epsilon(1e-16));
    CHECK_THROWS_AS(ale_jacobian(-1.0 + 1e-9, 1e-6), DegenerateMapError);
}

TEST_CASE("domain velocity is linear in depth") {
    const double wt = 0.7;
    CHECK(ale_velocity(wt, -1.0)[1] == 0.0);
    CHECK(ale_velocity(wt, 0.0)[1] == doctest::Approx(wt));
    CHECK(ale_velocity(wt, -0.5)[1] == doctest::Approx(0.5 * wt));
    CHECK(ale_velocity(wt, -0.5)[0] == 0.0);
}

TEST_CASE("modal slice matches pointwise synthesis") {
    const auto plate = make_plate_basis(3, 1.0);
    Vec beta(3), gamma(3);
    beta << 0.05, -0.02, 0.01;
    gamma << 0.4, 0.1, -0.3;

    const std::vector<double> stations = {0.1, 0.37, 0.5, 0.82};
    const auto slice = make_ale_slice(plate, beta, gamma, stations, 1e-6);
    REQUIRE(slice.size() == stations.size());
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const double x = stations[i];
        CHECK(slice.x[i] == x);
        CHECK(slice.w[i] == doctest::Approx(plate.field(beta, x)).epsilon(1e-14));
        CHECK(slice.wx[i] == doctest::Approx(plate.field(beta, x, 1)).epsilon(1e-14));
        CHECK(slice.wt[i] == doctest::Approx(plate.field(gamma, x)).epsilon(1e-14));
        CHECK(slice.J[i] == doctest::Approx(1.0 + slice.w[i]).epsilon(1e-16));
        CHECK(slice.S[i] ==
              doctest::Approx(std::sqrt(1.0 + slice.wx[i] * slice.wx[i])).epsilon(1e-14));
    }

    // deep enough displacement trips the collision guard
    Vec crash = beta;
    crash[0] = -1.0;
    CHECK_THROWS_AS(make_ale_slice(plate, crash, gamma, stations, 1e-6), DegenerateMapError);
}

namespace {

// max-norm error of fd_dx / fd_dz against an analytic derivative
std::array<double, 2> fd_errors(std::size_t nx, std::size_t nz, int order) {
    const Grid2D g(nx, nz, 1.0);
    Field f(g.cells()), dx_want(g.cells()), dz_want(g.cells());
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double X = g.xc(i), z = g.zc(j);
            const auto p = Eigen::Index(g.idx(i, j));
            f[p] = std::sin(2.0 * X) * std::cos(3.0 * z);
            dx_want[p] = 2.0 * std::cos(2.0 * X) * std::cos(3.0 * z);
            dz_want[p] = -3.0 * std::sin(2.0 * X) * std::sin(3.0 * z);
        }
    const Field dx_got = fd_dx(g, f, order);
    const Field dz_got = fd_dz(g, f, order);
    return {(dx_got - dx_want).cwiseAbs().maxCoeff(), (dz_got - dz_want).cwiseAbs().maxCoeff()};
}

}  // namespace

TEST_CASE("grid derivatives converge at their nominal orders") {
    for (int order : {2, 4}) {
        const auto coarse = fd_errors(24, 24, order);
        const auto fine = fd_errors(48, 48, order);
        const double want = order == 2 ? 4.0 : 16.0;
        for (int c = 0; c < 2; ++c) {
            const double ratio = coarse[c] / fine[c];
            CHECK(ratio > 0.7 * want);
            CHECK(ratio < 1.5 * want);
        }
    }
}

TEST_CASE("transformed divergence of the domain velocity is exact") {
    // u = (0, (z+1) wt(x)) has div^w u = wt / J; the z-profile is linear so
    // the finite difference is exact and only the geometry factors remain
    const auto plate = make_plate_basis(2, 1.0);
    Vec beta(2), gamma(2);
    beta << 0.08, -0.03;
    gamma << 0.5, 0.2;

    const Grid2D g(16, 12, 1.0);
    std::vector<double> stations(g.nx);
    for (std::size_t i = 0; i < g.nx; ++i) stations[i] = g.xc(i);
    const auto centers = make_ale_slice(plate, beta, gamma, stations, 1e-6);

    Field u1 = Field::Zero(g.cells()), u2(g.cells());
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            u2[Eigen::Index(g.idx(i, j))] = (g.zc(j) + 1.0) * centers.wt[i];

    const Field div = transformed_divergence(g, u1, u2, centers, 2);
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            CHECK(div[Eigen::Index(g.idx(i, j))] ==
                  doctest::Approx(centers.wt[i] / centers.J[i]).epsilon(1e-12));
}

TEST_CASE("transformed gradient matches the chain rule") {
    const auto plate = make_plate_basis(2, 1.0);
    Vec beta(2), gamma = Vec::Zero(2);
    beta << 0.1, -0.04;

    auto sample = [&](std::size_t nx, std::size_t nz) {
        const Grid2D g(nx, nz, 1.0);
        std::vector<double> stations(g.nx);
        for (std::size_t i = 0; i < g.nx; ++i) stations[i] = g.xc(i);
        const auto centers = make_ale_slice(plate, beta, gamma, stations, 1e-6);

        Field f(g.cells());
        for (std::size_t j = 0; j < g.nz; ++j)
            for (std::size_t i = 0; i < g.nx; ++i)
                f[Eigen::Index(g.idx(i, j))] = std::sin(2.0 * g.xc(i)) * std::exp(0.5 * g.zc(j));

        Field gx, gz;
        transformed_gradient(g, f, centers, 4, gx, gz);

        double worst = 0.0;
        for (std::size_t j = 0; j < g.nz; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) {
                const double X = g.xc(i), z = g.zc(j);
                const double fX = 2.0 * std::cos(2.0 * X) * std::exp(0.5 * z);
                const double fz = 0.5 * std::sin(2.0 * X) * std::exp(0.5 * z);
                const double J = centers.J[i], wx = centers.wx[i];
                const double want_x = fX - (z + 1.0) * wx / J * fz;
                const double want_z = fz / J;
                const auto p = Eigen::Index(g.idx(i, j));
                worst = std::max(worst, std::abs(gx[p] - want_x));
                worst = std::max(worst, std::abs(gz[p] - want_z));
            }
        return worst;
    };

    const double coarse = sample(20, 16);
    const double fine = sample(40, 32);
    CHECK(coarse < 1e-4);
    // fourth order stencils: halving h divides the error by about 16
    CHECK(coarse / fine > 10.0);
}
