#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "fsi/beam.hpp"
#include "fsi/gauss.hpp"

namespace fsi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// structure bases on Gamma = (0,L)
// ---------------------------------------------------------------------------

// L2-orthonormal clamped-beam modes; xi[i] = mu_i^4 so that s'''' = xi s.
struct PlateBasis {
    double L = 1.0;
    std::vector<ClampedBeamMode> modes;

    std::size_t size() const { return modes.size(); }
    double eval(std::size_t i, double x, int deriv = 0) const {
        return clamped_beam_eval(modes[i], x, deriv);
    }
    double xi(std::size_t i) const { return modes[i].xi; }
    // w(x) = sum_i c_i s_i^{(deriv)}(x)
    double field(const Vec& c, double x, int deriv = 0) const;
};

PlateBasis make_plate_basis(std::size_t k, double L);

// L2-orthonormal Dirichlet sine modes; xi[i] = (i pi / L)^2 so that -h'' = xi h.
struct HeatBasis {
    double L = 1.0;
    std::size_t k = 0;

    double eval(std::size_t i, double x, int deriv = 0) const;
    double xi(std::size_t i) const;
};

// L2(Gamma) projection of f onto the first k plate (or heat) modes.
Vec project_plate(const PlateBasis& b, const std::vector<double>& fx, const GaussRule& rule);

// ---------------------------------------------------------------------------
// harmonic lifting on Omega = (0,L) x (-1,0)
// ---------------------------------------------------------------------------

// Solves  Laplace r = 0,  r = data on Gamma x {0},  r = 0 on the other sides,
// as a sine expansion of the top data sampled on the uniform grid
// x_j = j L / M (j = 1..M-1):
//
//   r(X,z) = sum_m d_m sin(m pi X / L) sinh(m pi (z+1)/L) / sinh(m pi / L)
//
// The vertical factors are evaluated in the overflow-free form
// e^{a z} (1 - e^{-2a(z+1)}) / (1 - e^{-2a}), a = m pi / L, and the mode sum is
// truncated per depth where the exponential tail drops below roundoff.
struct SineExtension {
    double L = 1.0;
    std::vector<double> coef;  // d_m, m = 1..M-1 (coef[0] is m=1)

    double value(double X, double z) const;
    double dX(double X, double z) const;
    double dz(double X, double z) const;

  private:
    std::size_t cutoff(double z) const;
};

// DST-I analysis of top samples at x_j = j L / M, j = 1..M-1.
SineExtension harmonic_extension(const std::vector<double>& top_samples, double L);

// convenience: lift a callable top trace with M sampling intervals
template <class F>
SineExtension harmonic_extension_of(F&& f, double L, std::size_t M) {
    std::vector<double> samples(M - 1);
    for (std::size_t j = 1; j < M; ++j) samples[j - 1] = f(double(j) * L / double(M));
    return harmonic_extension(samples, L);
}

// ---------------------------------------------------------------------------
// fluid velocity basis on Omega
// ---------------------------------------------------------------------------

// 2k vector functions:
//   g_0 .. g_{k-1}   : scalar Dirichlet eigenfunctions of the rectangle,
//                      phi_mn = (2/sqrt(L)) sin(m pi X/L) sin(n pi (z+1)),
//                      eigenvalue pi^2 (m^2/L^2 + n^2), promoted to (phi,0) and
//                      (0,phi) and taken in ascending-eigenvalue order;
//   g_k .. g_{2k-1}  : liftings Ext[s_i] = (0, r_i) of the plate modes, so the
//                      top trace of the span is exactly span{s_i} e_z.
struct FluidMode {
    int m = 0, n = 0;    // sine frequencies (interior modes)
    int component = 0;   // 0: (phi,0), 1: (0,phi)
    double eigenvalue = 0.0;
};

struct FluidBasis {
    double L = 1.0;
    std::size_t k = 0;                 // modes per block; total size is 2k
    std::vector<FluidMode> interior;   // k entries
    std::vector<SineExtension> lift;   // k entries, lift[i] = Ext[s_i]
    std::vector<ClampedBeamMode> trace;  // exact top traces of the lift block

    std::size_t size() const { return 2 * k; }
    bool is_lift(std::size_t g) const { return g >= k; }

    // value and reference-domain partials of basis function g at (X,z);
    // out[0..1] = value, out[2..3] = d/dX, out[4..5] = d/dz
    void eval(std::size_t g, double X, double z, double out[6]) const;
};

FluidBasis make_fluid_basis(std::size_t k, double L, const PlateBasis& plate,
                            std::size_t lifting_intervals);

// Precomputed basis values at a fixed point set (quadrature nodes, cell
// centers, faces). Layout: tab[g][p*6 + c].
struct FluidBasisTable {
    std::size_t npts = 0;
    std::vector<std::vector<double>> tab;

    void build(const FluidBasis& basis, const std::vector<double>& X,
               const std::vector<double>& Z);
    const double* at(std::size_t g, std::size_t p) const { return &tab[g][p * 6]; }
};

// ---------------------------------------------------------------------------
// coupled structure matrices
// ---------------------------------------------------------------------------

// heat_plate[i][j] = int h_i' s_j'   (heat row, plate column; the plate
//   equation uses the transpose so the two coupling powers cancel exactly),
// third_grad[i][j] = int s_i''' s_j''' (plate regularizer Gram).
struct CoupledMatrices {
    Mat heat_plate;
    Mat third_grad;
    // max entry change when the assembly quadrature order is doubled;
    // callers surface this as an under-resolution warning
    double quadrature_drift = 0.0;
};

CoupledMatrices assemble_coupled_matrices(const PlateBasis& plate, const HeatBasis& heat,
                                          std::size_t quad_points);

}  // namespace fsi
