#pragma once

#include <cstddef>
#include <vector>

#include "fsi/bases.hpp"
#include "fsi/continuity.hpp"
#include "fsi/grid.hpp"
#include "fsi/ssp.hpp"

namespace fsi {

// Plate motion over one window as seen by the fluid: dense samples of the
// displacement and velocity modes with linear interpolation in time.
struct PlateTrajectory {
    std::vector<double> times;
    std::vector<Vec> beta, gamma;

    void sample(double t, Vec& beta_out, Vec& gamma_out) const;
    static PlateTrajectory from(const SspWindowOutput& out);
};

// Fluid velocity modes at substep boundaries, linearly interpolated.
struct VelocityTrajectory {
    std::vector<double> times;
    std::vector<Vec> alpha;

    Vec eval(double t) const;
    static VelocityTrajectory constant(const Vec& a0, double t0, double t1);
};

struct FspParams {
    double mu = 1.0;        // shear viscosity
    double lambda = 0.0;    // second viscosity, needs lambda + 2 mu / 3 > 0
    double gamma_exp = 2.0; // adiabatic exponent, > 1
    double a_exp = 9.0;     // stiffened-pressure exponent, >= 9
    double delta = 1e-3;    // stiffened-pressure weight
    double eps = 0.05;      // mass damping
    double dt = 0.1;        // window length, sets the trace penalty 1/(2 dt)
    double fx = 0.0, fz = 0.0;  // constant body force
    double collision_floor = 1e-6;
    std::size_t quad_x = 26, quad_z = 20;
};

double pressure_of(const FspParams& p, double r);             // r^g + delta r^a
double pressure_potential_of(const FspParams& p, double r);   // r^g/(g-1) + d r^a/(a-1)

// Everything the fluid step reuses across windows: quadrature grid, basis
// tables at quadrature nodes and at the transport-grid faces, plate tables
// at the matching abscissae, and the transport solver itself.
struct FspSystem {
    FspSystem(const PlateBasis& plate_basis, const FluidBasis& fluid_basis,
              const Grid2D& grid_in, const FspParams& params);

    PlateBasis plate;
    FluidBasis fluid;
    Grid2D grid;
    FspParams par;

    GaussRule qx, qz;  // tensor quadrature over (0,L) x (-1,0)
    FluidBasisTable quad_tab, vert_tab, horz_tab, cent_tab;
    Mat p0_quad, p1_quad;  // plate values/slopes at quadrature abscissae, k x ox
    Mat p0_face, p1_face;  // at x-faces, k x (nx+1)
    Mat p0_cent, p1_cent;  // at x-centers, k x nx

    ContinuitySolver transport;

    // geometry + velocity sampler for the transport solver; the returned
    // callable keeps references to the trajectories, use within their scope
    FieldProvider provider(const PlateTrajectory& plate_motion,
                           const VelocityTrajectory& velocity) const;

    void fill_transport(double t, const PlateTrajectory& plate_motion,
                        const VelocityTrajectory& velocity, TransportField& out) const;
};

// coefficient snapshot for one momentum midpoint
struct MomentumCoeffs {
    Vec beta, gamma_pl;  // plate modes
    Field r_mid;         // density at the midpoint
    Field djr_dt;        // cellwise d/dt (J r) at the midpoint
    Vec u_prev;          // transporting velocity modes (previous iterate)
};

// modal momentum system  M alpha' = -A alpha + c
struct MomentumMatrices {
    Mat mass;    // inertia, int J r g_i . g_j; symmetric positive definite
    Mat drift;   // inertia correction + skew convection + viscosity + penalty
    Vec load;    // pressure + trace penalty + body force
    double min_weight = 0.0;  // min over quadrature nodes of J r
};

MomentumMatrices assemble_momentum(const FspSystem& sys, const MomentumCoeffs& c);

// inertia matrix alone (solvability diagnostics)
struct MassMatrixInfo {
    Mat m;
    double min_weight = 0.0;
};
MassMatrixInfo mass_matrix(const FspSystem& sys, const Vec& beta, const Field& r);

// plain velocity Gram matrix on the same quadrature (no J, no r); its
// smallest eigenvalue scales the solvability bound min_weight * lambda_min
Mat velocity_gram(const FspSystem& sys);

struct PicardOptions {
    std::size_t max_iterations = 40;
    double tolerance = 1e-10;            // sup-norm update, relative to state size
    std::size_t transport_substeps_per = 2;  // transport steps per velocity step
    bool rannacher = true;
};

struct FspResult {
    std::vector<double> times;  // velocity substep boundaries
    std::vector<Vec> alpha;
    ContinuitySolver::Result density;  // transport run of the last iterate
    std::size_t iterations = 0;
    double last_update = 0.0;
    std::vector<double> update_history;
};

// One window of the fluid sub-problem: iterate transport and momentum to a
// fixed point of the transporting velocity. Momentum is stepped by the
// implicit midpoint rule; the midpoint density is read off the transport
// snapshots and d/dt (J r) is substituted from the transport flux balance.
FspResult fsp_step(const FspSystem& sys, const Field& r0, const Vec& alpha0,
                   const PlateTrajectory& plate_motion, double t0, double window,
                   std::size_t substeps, const PicardOptions& opt);

}  // namespace fsi
