#pragma once

#include <cstddef>
#include <vector>

namespace fsi {

// Eigenfunctions of s'''' = xi s on (0,L) with clamped ends
// s(0)=s'(0)=s(L)=s'(L)=0:
//
//   s_i(x) = A_i [ cosh(mu_i x) - cos(mu_i x) - sigma_i (sinh(mu_i x) - sin(mu_i x)) ]
//   cos(mu_i L) cosh(mu_i L) = 1,   sigma_i = (cosh - cos)/(sinh - sin) at mu_i L
//   xi_i = mu_i^4
//
// Evaluated in the exponentially-scaled form
//   cosh(mu x) - sigma sinh(mu x) = ((1-sigma) e^{mu x} + (1+sigma) e^{-mu x})/2
// with 1 - sigma = (cos(muL) - sin(muL) - e^{-muL}) / (sinh(muL) - sin(muL)),
// which avoids the cosh/sinh cancellation that costs ~mu L / ln 10 digits in the
// textbook form (at mu_8 L ~ 26.7 the naive evaluation is only good to ~1e-5).
// A_i normalizes ||s_i||_{L2(0,L)} = 1.

struct ClampedBeamMode {
    double mu = 0.0;        // frequency, mu_i
    double sigma = 0.0;     // shape constant at mu_i L
    double one_minus_sigma = 0.0;
    double amp = 1.0;       // L2 normalization factor
    double xi = 0.0;        // eigenvalue mu^4
};

// Solve cos(t) cosh(t) = 1 for the i-th positive root (i >= 1), as
// cos(t) - sech(t) = 0 to stay bounded. Bisection bracketing around
// (2i+1)pi/2 followed by Newton polishing.
double clamped_beam_root(std::size_t i);

// Build the first k modes on (0,L). The returned amp normalizes with the
// n-point Gauss rule used internally (n scales with mu_k L).
std::vector<ClampedBeamMode> clamped_beam_modes(std::size_t k, double L);

// Evaluate the deriv-th derivative (0..4) of mode m at x in [0,L].
double clamped_beam_eval(const ClampedBeamMode& m, double x, int deriv);

}  // namespace fsi
