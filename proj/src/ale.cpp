#include "fsi/ale.hpp"

#include <cmath>

#include "fsi/errors.hpp"

namespace fsi {

AleSlice make_ale_slice(const PlateBasis& plate, const Vec& beta, const Vec& gamma,
                        const std::vector<double>& stations, double collision_floor) {
    AleSlice s;
    s.x = stations;
    const std::size_t n = stations.size();
    s.w.resize(n);
    s.wx.resize(n);
    s.wt.resize(n);
    s.J.resize(n);
    s.S.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        s.w[p] = plate.field(beta, stations[p], 0);
        s.wx[p] = plate.field(beta, stations[p], 1);
        s.wt[p] = plate.field(gamma, stations[p], 0);
        s.J[p] = ale_jacobian(s.w[p], collision_floor);
        s.S[p] = std::sqrt(1.0 + s.wx[p] * s.wx[p]);
    }
    return s;
}

std::array<double, 2> ale_map_point(double w_at_X, double X, double z) {
    return {X, (z + 1.0) * w_at_X + z};
}

double ale_inverse_z(double w_at_X, double z_phys) {
    return (z_phys - w_at_X) / (1.0 + w_at_X);
}

double ale_jacobian(double w_at_X, double collision_floor) {
    const double J = 1.0 + w_at_X;
    if (!(J > collision_floor))
        throw DegenerateMapError("ale_jacobian: 1 + w = " + std::to_string(J) +
                                 " at or below the collision floor " +
                                 std::to_string(collision_floor));
    return J;
}

std::array<double, 2> ale_velocity(double dwdt_at_X, double z) {
    return {0.0, (z + 1.0) * dwdt_at_X};
}

namespace {

// 1D differentiation along one line of samples, order 2 or 4
void diff_line(const double* f, double* df, std::size_t n, std::size_t stride, double h,
               int order) {
    auto F = [&](std::size_t i) { return f[i * stride]; };
    if (order == 2) {
        if (n < 3) throw ConfigError("fd: need at least 3 cells for order 2");
        df[0] = (-3.0 * F(0) + 4.0 * F(1) - F(2)) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) df[i * stride] = (F(i + 1) - F(i - 1)) / (2.0 * h);
        df[(n - 1) * stride] = (3.0 * F(n - 1) - 4.0 * F(n - 2) + F(n - 3)) / (2.0 * h);
        return;
    }
    if (order == 4) {
        if (n < 5) throw ConfigError("fd: need at least 5 cells for order 4");
        df[0] = (-25.0 * F(0) + 48.0 * F(1) - 36.0 * F(2) + 16.0 * F(3) - 3.0 * F(4)) / (12.0 * h);
        df[stride] = (-3.0 * F(0) - 10.0 * F(1) + 18.0 * F(2) - 6.0 * F(3) + F(4)) / (12.0 * h);
        for (std::size_t i = 2; i + 2 < n; ++i)
            df[i * stride] =
                (-F(i + 2) + 8.0 * F(i + 1) - 8.0 * F(i - 1) + F(i - 2)) / (12.0 * h);
        df[(n - 2) * stride] =
            (3.0 * F(n - 1) + 10.0 * F(n - 2) - 18.0 * F(n - 3) + 6.0 * F(n - 4) - F(n - 5)) /
            (12.0 * h);
        df[(n - 1) * stride] =
            (25.0 * F(n - 1) - 48.0 * F(n - 2) + 36.0 * F(n - 3) - 16.0 * F(n - 4) +
             3.0 * F(n - 5)) /
            (12.0 * h);
        return;
    }
    throw ConfigError("fd: differencing order must be 2 or 4");
}

}  // namespace

Field fd_dx(const Grid2D& g, const Field& f, int order) {
    Field d(f.size());
    for (std::size_t j = 0; j < g.nz; ++j)
        diff_line(f.data() + g.idx(0, j), d.data() + g.idx(0, j), g.nx, 1, g.hx(), order);
    return d;
}

Field fd_dz(const Grid2D& g, const Field& f, int order) {
    Field d(f.size());
    for (std::size_t i = 0; i < g.nx; ++i)
        diff_line(f.data() + g.idx(i, 0), d.data() + g.idx(i, 0), g.nz, g.nx, g.hz(), order);
    return d;
}

void transformed_gradient(const Grid2D& g, const Field& f, const AleSlice& centers,
                          int fd_order, Field& gx, Field& gz) {
    if (centers.size() != g.nx)
        throw ConfigError("transformed_gradient: slice must hold the nx cell centers");
    Field fX = fd_dx(g, f, fd_order);
    Field fz = fd_dz(g, f, fd_order);
    gx.resize(f.size());
    gz.resize(f.size());
    for (std::size_t j = 0; j < g.nz; ++j) {
        const double zp1 = g.zc(j) + 1.0;
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t c = g.idx(i, j);
            gx[c] = fX[c] - zp1 * centers.wx[i] / centers.J[i] * fz[c];
            gz[c] = fz[c] / centers.J[i];
        }
    }
}

Field transformed_divergence(const Grid2D& g, const Field& u1, const Field& u2,
                             const AleSlice& centers, int fd_order) {
    Field g1x, g1z, g2x, g2z;
    transformed_gradient(g, u1, centers, fd_order, g1x, g1z);
    transformed_gradient(g, u2, centers, fd_order, g2x, g2z);
    Field div(u1.size());
    for (Eigen::Index c = 0; c < div.size(); ++c) div[c] = g1x[c] + g2z[c];
    return div;
}

}  // namespace fsi
