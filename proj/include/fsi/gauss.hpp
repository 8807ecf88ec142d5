#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace fsi {

// Gauss-Legendre rule on [a, b]. Nodes are the Legendre roots obtained by
// Newton iteration from the Chebyshev-like initial guess; exact for
// polynomials of degree 2n-1, spectrally convergent for the smooth
// trigonometric/exponential integrands used throughout.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;

    GaussRule() = default;

    GaussRule(std::size_t n, double a, double b) : x(n), w(n) {
        const double pi = 3.14159265358979323846;
        for (std::size_t i = 0; i < n; ++i) {
            // root of P_n in (-1,1), ascending
            double t = std::cos(pi * (double(n - i) - 0.25) / (double(n) + 0.5));
            double p0 = 0.0, p1 = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                p0 = 1.0;
                p1 = t;
                for (std::size_t k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / double(k);
                    p0 = p1;
                    p1 = p2;
                }
                double dp = double(n) * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            // recompute derivative at the converged node for the weight
            p0 = 1.0;
            p1 = t;
            for (std::size_t k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            double dp = double(n) * (t * p1 - p0) / (t * t - 1.0);
            double wi = 2.0 / ((1.0 - t * t) * dp * dp);
            x[i] = 0.5 * (b - a) * t + 0.5 * (a + b);
            w[i] = 0.5 * (b - a) * wi;
        }
    }

    std::size_t size() const { return x.size(); }

    // integrate a callable f(x)
    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
        return s;
    }
};

}  // namespace fsi
