#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fsi/bases.hpp"
#include "fsi/grid.hpp"

namespace fsi {

// Deformation-dependent geometry along a set of horizontal stations.
// The moving domain is the subgraph of 1 + w over Gamma; the reference map is
//   A_w(X,z) = (X, (z+1) w(X) + z),  J = det grad A_w = 1 + w,
//   S = sqrt(1 + (dx w)^2)  (surface line element of the top boundary).
struct AleSlice {
    std::vector<double> x;   // stations on Gamma
    std::vector<double> w;   // displacement
    std::vector<double> wx;  // dx w (spectral, from the modal representation)
    std::vector<double> wt;  // dt w
    std::vector<double> J;   // 1 + w
    std::vector<double> S;   // surface jacobian

    std::size_t size() const { return x.size(); }
};

// Build the slice from modal plate data; throws DegenerateMapError if
// 1 + w <= collision_floor anywhere on the stations.
AleSlice make_ale_slice(const PlateBasis& plate, const Vec& beta, const Vec& gamma,
                        const std::vector<double>& stations, double collision_floor);

// A_w evaluated at one point.
std::array<double, 2> ale_map_point(double w_at_X, double X, double z);

// inverse vertical coordinate: z such that A_w(X,z) = (X, z_phys)
double ale_inverse_z(double w_at_X, double z_phys);

// J = 1 + w with the degeneracy guard.
double ale_jacobian(double w_at_X, double collision_floor);

// ALE domain velocity at reference (X,z): (0, (z+1) dt w).
std::array<double, 2> ale_velocity(double dwdt_at_X, double z);

// Reference-domain partial derivatives of a cell-centered grid field by
// central differences (order 2 or 4; one-sided stencils of matching order at
// the boundary cells).
Field fd_dx(const Grid2D& g, const Field& f, int order);
Field fd_dz(const Grid2D& g, const Field& f, int order);

// Transformed (moving-domain) gradient of a scalar grid field:
//   grad^w f = ( dX f - ((z+1) wx / J) dz f ,  dz f / J ).
// The slice must hold the cell-center stations of g.
void transformed_gradient(const Grid2D& g, const Field& f, const AleSlice& centers,
                          int fd_order, Field& gx, Field& gz);

// trace of the transformed gradient of a vector grid field (u1, u2)
Field transformed_divergence(const Grid2D& g, const Field& u1, const Field& u2,
                             const AleSlice& centers, int fd_order);

}  // namespace fsi
