#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "fsi/bases.hpp"
#include "fsi/grid.hpp"

namespace fsi {

// Geometry and velocity data at one time instant, sampled where the finite
// volume fluxes need them. Plate quantities are sampled at cell-face and
// cell-center abscissae; velocity components at vertical faces (xf_i, zc_j)
// and horizontal faces (xc_i, zf_j).
struct TransportField {
    Vec w_face, wx_face, wt_face;  // size nx+1
    Vec w_cent, wx_cent, wt_cent;  // size nx
    Mat u1_vert, u2_vert;          // (nx+1) x nz
    Mat u1_horz, u2_horz;          // nx x (nz+1)

    void resize(const Grid2D& g);
};

using FieldProvider = std::function<void(double t, TransportField& out)>;

// int J r over the reference box, J = 1 + w
double weighted_mass(const Grid2D& g, const Vec& w_cent, const Field& r);

// Damped mass transport in flattened coordinates, conservative flux form on a
// cell-centered grid:
//
//   d/dt (J r) + dX[ J r U1 - eps J dX r ]
//              + dz[ r (U2 - (z+1) wx U1 - (z+1) wt) - eps J dz r ] = 0
//
// Side and bottom fluxes vanish (no-penetration velocity plus homogeneous
// Neumann data for r); the top face carries the physical exchange flux
// r_top (v - wt) with r_top quadratically extrapolated through the zero-slope
// condition. Total mass therefore obeys the exact discrete balance
//   mass(end) - mass(start) = accumulated top production,
// which collapses to conservation whenever the top trace is matched.
//
// Time stepping is Crank-Nicolson; the first step of a window may be replaced
// by two implicit Euler half-steps to damp the CN startup transient.
class ContinuitySolver {
  public:
    ContinuitySolver(const Grid2D& grid, double epsilon);

    struct Result {
        std::vector<double> times;  // substep boundaries, t0 .. t0 + window
        std::vector<Field> r;       // states at those times
        double mass_start = 0.0;
        double mass_end = 0.0;
        double production = 0.0;  // time-integrated top flux contribution
        double min_value = 0.0;   // extrema over every state the stepper
        double max_value = 0.0;   // produced, startup half-steps included
    };

    Result advance(const Field& r0, double t0, double window, std::size_t substeps,
                   const FieldProvider& fields, bool rannacher_start) const;

    // mass rate through the top face, d/dt int J r = production_rate
    double production_rate(double t, const Field& r, const FieldProvider& fields) const;

    // cellwise d/dt (J r) implied by the semidiscrete flux balance at time t,
    // i.e. minus the discrete flux divergence applied to r
    Field time_derivative(double t, const Field& r, const FieldProvider& fields) const;

    const Grid2D& grid() const { return grid_; }
    double epsilon() const { return eps_; }

  private:
    using SpMat = Eigen::SparseMatrix<double>;

    // d/dt (D_J r) = A r, with D_J = diag(J at cell centers)
    struct Operator {
        SpMat A;
        Vec jdiag;
    };
    Operator assemble(double t, const FieldProvider& fields) const;

    Grid2D grid_;
    double eps_;
};

}  // namespace fsi
