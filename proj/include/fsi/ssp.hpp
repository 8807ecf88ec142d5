#pragma once

#include <cstddef>
#include <vector>

#include "fsi/bases.hpp"

namespace fsi {

// Plate nonlinearity F(w) and its potential Pi(w), realized on Gamma = (0,L):
//   linear_zero       : F = 0, Pi = 0
//   cubic_quasilinear : F_j = int (w'')^3 s_j'',      Pi = 1/4 int (w'')^4
//   berger_type       : F_j = (q1 int (w')^2 - q2) int w' s_j',
//                       Pi = q1/4 (int (w')^2)^2 - q2/2 int (w')^2
struct NonlinearitySpec {
    enum class Kind { linear_zero, cubic_quasilinear, berger_type };
    Kind kind = Kind::linear_zero;
    double q1 = 1.0, q2 = 0.0;
};

// (kappa, C*) with kappa ||D^2 w||^2 + Pi(w) + C* >= 0 for all w
struct CoercivityWitness {
    double kappa = 0.0;
    double cstar = 0.0;
};
CoercivityWitness coercivity_witness(const NonlinearitySpec& nl);

// Sampled trace forcing over one window, with linear interpolation between
// uniformly spaced samples. The driver hands the SSP a history whose eval(t)
// already realizes the shift T_dt v(t) (on window 0: the constant v(0)).
struct TraceHistory {
    double t0 = 0.0;
    double dt_sample = 1.0;
    std::vector<Vec> samples;  // modal coefficients in the plate basis

    Vec eval(double t) const;
    static TraceHistory constant(const Vec& v0, double t0, double t1);
};

struct PlateState {
    Vec beta;   // displacement modes
    Vec gamma;  // velocity modes
    Vec alpha;  // temperature modes
    double t = 0.0;
};

// Everything the plate ODE needs; plate-basis derivative tables at the
// nonlinearity quadrature nodes are precomputed at construction.
struct SspSystem {
    SspSystem(const PlateBasis& plate, const HeatBasis& heat, const CoupledMatrices& cm,
              const NonlinearitySpec& nl, double dt, double delta,
              std::size_t nonlin_quad_points);

    std::size_t k = 0;
    double dt = 0.0;      // penalty scale (window length)
    double delta = 0.0;   // third-gradient regularizer coefficient
    bool penalty = true;  // unit tests disable to check the conservative core
    NonlinearitySpec nl;

    Vec xi_s, xi_h;   // spectra
    Mat plate_heat;   // (int s_i' h_j') = heat_plate^T, plate equation side
    Mat heat_plate;   // (int h_i' s_j'), heat equation side
    Mat third_grad;   // E_k

    GaussRule rule;   // nonlinearity quadrature
    Mat tab_d1, tab_d2;  // k x nq plate derivative tables at rule nodes

    // modal nonlinearity and potential
    Vec nonlinearity(const Vec& beta) const;
    double potential(const Vec& beta) const;

    // S(t) = 1/4 |gamma|^2 + 1/2 beta^T Xi_s beta + Pi + 1/2 |alpha|^2
    //        + delta/2 beta^T E beta
    double energy(const PlateState& s) const;

    // time derivatives (beta_dot, gamma_dot, alpha_dot) given the shifted trace
    void rhs(double t, const Vec& beta, const Vec& gamma, const Vec& alpha,
             const TraceHistory& shifted_trace, Vec& db, Vec& dg, Vec& da) const;
};

// One window of the structure sub-problem, integrated by classical RK4 with
// `substeps` steps; state samples are recorded at every substep boundary.
// The four penalty/dissipation integrals of the energy identity ride along as
// extra ODE components so the whole identity residual carries the integrator
// order (the identity is exact for the interpolated forcing, so the residual
// isolates integrator error).
struct SspWindowOutput {
    std::vector<double> times;
    std::vector<Vec> beta, gamma, alpha;
    std::vector<double> energy;        // S at samples
    std::vector<double> dissipation;   // int_{t0}^t ||grad theta||^2
    std::vector<double> residual;      // identity residual at samples
    double max_abs_residual = 0.0;
    double pen_gap = 0.0;      // int over the window of ||dt w - T v||^2
    double pen_gamma = 0.0;    // int ||dt w||^2
    double pen_forcing = 0.0;  // int ||T v||^2

    const Vec& beta_end() const { return beta.back(); }
};

SspWindowOutput ssp_step(const SspSystem& sys, const PlateState& initial,
                         const TraceHistory& shifted_trace, double window,
                         std::size_t substeps);

}  // namespace fsi
