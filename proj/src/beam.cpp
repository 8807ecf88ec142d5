#include "fsi/beam.hpp"

#include <cmath>
#include <stdexcept>

#include "fsi/errors.hpp"
#include "fsi/gauss.hpp"

namespace fsi {

namespace {
constexpr double kPi = 3.14159265358979323846;

double characteristic(double t) {
    // cos(t) - sech(t); same roots as cos(t)cosh(t) - 1, bounded for large t
    return std::cos(t) - 1.0 / std::cosh(t);
}

double characteristic_deriv(double t) {
    double sech = 1.0 / std::cosh(t);
    return -std::sin(t) + sech * std::tanh(t);
}
}  // namespace

double clamped_beam_root(std::size_t i) {
    if (i == 0) throw ConfigError("clamped_beam_root: mode index starts at 1");
    double center = (2.0 * double(i) + 1.0) * kPi / 2.0;
    double lo = center - 0.4, hi = center + 0.4;
    double flo = characteristic(lo), fhi = characteristic(hi);
    // widen defensively; the root sits within 0.02 of center for i >= 1
    for (int tries = 0; flo * fhi > 0.0 && tries < 6; ++tries) {
        lo -= 0.2;
        hi += 0.2;
        flo = characteristic(lo);
        fhi = characteristic(hi);
    }
    if (flo * fhi > 0.0) throw SolverError("clamped_beam_root: bracketing failed");
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = characteristic(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo < 1e-12) break;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        double d = characteristic(t) / characteristic_deriv(t);
        t -= d;
        if (std::abs(d) < 1e-15 * t) break;
    }
    return t;
}

std::vector<ClampedBeamMode> clamped_beam_modes(std::size_t k, double L) {
    if (L <= 0.0) throw ConfigError("clamped_beam_modes: L must be positive");
    std::vector<ClampedBeamMode> modes(k);
    for (std::size_t i = 0; i < k; ++i) {
        double t = clamped_beam_root(i + 1);  // mu L
        if (t > 700.0) throw ConfigError("clamped_beam_modes: mode frequency overflows");
        ClampedBeamMode m;
        m.mu = t / L;
        double sh = std::sinh(t), sn = std::sin(t), cs = std::cos(t);
        m.sigma = (std::cosh(t) - cs) / (sh - sn);
        // stable small difference: sinh - cosh = -exp(-t)
        m.one_minus_sigma = (cs - sn - std::exp(-t)) / (sh - sn);
        m.xi = m.mu * m.mu * m.mu * m.mu;
        m.amp = 1.0;
        // normalize ||s||_{L2} = 1; integrand oscillates at ~mu L, rule sized to it
        std::size_t n = std::size_t(4.0 * t / kPi) + 16;
        GaussRule rule(n, 0.0, L);
        double nrm2 = rule.integrate([&](double x) {
            double v = clamped_beam_eval(m, x, 0);
            return v * v;
        });
        m.amp = 1.0 / std::sqrt(nrm2);
        modes[i] = m;
    }
    return modes;
}

double clamped_beam_eval(const ClampedBeamMode& m, double x, int deriv) {
    const double u = m.mu * x;
    const double ep = std::exp(u), en = std::exp(-u);
    const double Ep = 0.5 * (m.one_minus_sigma * ep + (1.0 + m.sigma) * en);
    const double Em = 0.5 * (m.one_minus_sigma * ep - (1.0 + m.sigma) * en);
    const double c = std::cos(u), s = std::sin(u);
    double v;
    switch (deriv) {
        case 0: v = Ep - c + m.sigma * s; break;
        case 1: v = m.mu * (Em + s + m.sigma * c); break;
        case 2: v = m.mu * m.mu * (Ep + c - m.sigma * s); break;
        case 3: v = m.mu * m.mu * m.mu * (Em - s - m.sigma * c); break;
        case 4: v = m.xi * (Ep - c + m.sigma * s); break;
        default: throw ConfigError("clamped_beam_eval: derivative order must be 0..4");
    }
    return m.amp * v;
}

}  // namespace fsi
