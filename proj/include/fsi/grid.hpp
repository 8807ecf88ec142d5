#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace fsi {

// Cell-centered tensor grid on the reference rectangle (0,L) x (-1,0).
// nx, nz count cells; cell (i,j) has center (xc(i), zc(j)) and the density
// field is stored column-major-in-x: index(i,j) = i + nx*j, j=0 at the bottom.
struct Grid2D {
    std::size_t nx = 0;
    std::size_t nz = 0;
    double L = 1.0;

    Grid2D() = default;
    Grid2D(std::size_t nx_, std::size_t nz_, double L_) : nx(nx_), nz(nz_), L(L_) {}

    double hx() const { return L / double(nx); }
    double hz() const { return 1.0 / double(nz); }
    double xc(std::size_t i) const { return (double(i) + 0.5) * hx(); }
    double zc(std::size_t j) const { return -1.0 + (double(j) + 0.5) * hz(); }
    // x-face i (between cells i-1 and i) sits at i*hx, i = 0..nx
    double xf(std::size_t i) const { return double(i) * hx(); }
    // z-face j sits at -1 + j*hz, j = 0..nz
    double zf(std::size_t j) const { return -1.0 + double(j) * hz(); }
    std::size_t cells() const { return nx * nz; }
    std::size_t idx(std::size_t i, std::size_t j) const { return i + nx * j; }
    double cell_area() const { return hx() * hz(); }
};

using Field = Eigen::VectorXd;  // grid field, Grid2D::cells() entries

// bilinear interpolation between cell centers, constant beyond the outermost
// centers (matches the homogeneous Neumann data); preserves positivity
inline double bilinear_sample(const Grid2D& g, const Field& f, double X, double z) {
    double sx = X / g.hx() - 0.5;
    double sz = (z + 1.0) / g.hz() - 0.5;
    sx = std::min(std::max(sx, 0.0), double(g.nx - 1));
    sz = std::min(std::max(sz, 0.0), double(g.nz - 1));
    const auto i0 = std::min(static_cast<std::size_t>(sx), g.nx - 2);
    const auto j0 = std::min(static_cast<std::size_t>(sz), g.nz - 2);
    const double fx = sx - double(i0), fz = sz - double(j0);
    const double b = (1.0 - fx) * f[Eigen::Index(g.idx(i0, j0))] +
                     fx * f[Eigen::Index(g.idx(i0 + 1, j0))];
    const double t = (1.0 - fx) * f[Eigen::Index(g.idx(i0, j0 + 1))] +
                     fx * f[Eigen::Index(g.idx(i0 + 1, j0 + 1))];
    return (1.0 - fz) * b + fz * t;
}

}  // namespace fsi
