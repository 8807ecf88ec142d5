#include "fsi/bases.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/errors.hpp"

namespace fsi {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// plate / heat bases
// ---------------------------------------------------------------------------

double PlateBasis::field(const Vec& c, double x, int deriv) const {
    double v = 0.0;
    for (std::size_t i = 0; i < size() && i < std::size_t(c.size()); ++i)
        v += c[i] * eval(i, x, deriv);
    return v;
}

PlateBasis make_plate_basis(std::size_t k, double L) {
    PlateBasis b;
    b.L = L;
    b.modes = clamped_beam_modes(k, L);
    return b;
}

double HeatBasis::eval(std::size_t i, double x, int deriv) const {
    const double a = double(i + 1) * kPi / L;
    const double amp = std::sqrt(2.0 / L);
    switch (deriv) {
        case 0: return amp * std::sin(a * x);
        case 1: return amp * a * std::cos(a * x);
        case 2: return -amp * a * a * std::sin(a * x);
        default: throw ConfigError("HeatBasis::eval: derivative order must be 0..2");
    }
}

double HeatBasis::xi(std::size_t i) const {
    const double a = double(i + 1) * kPi / L;
    return a * a;
}

Vec project_plate(const PlateBasis& b, const std::vector<double>& fx, const GaussRule& rule) {
    if (fx.size() != rule.size())
        throw ConfigError("project_plate: sample count must match the quadrature rule");
    Vec c = Vec::Zero(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
            s += rule.w[q] * fx[q] * b.eval(i, rule.x[q], 0);
        c[i] = s;  // basis is L2-orthonormal
    }
    return c;
}

// ---------------------------------------------------------------------------
// harmonic lifting
// ---------------------------------------------------------------------------

namespace {
// sinh(a(z+1))/sinh(a) and its z-derivative, overflow-free for a >> 1, z in [-1,0]
inline double vert_ratio(double a, double z) {
    return std::exp(a * z) * (1.0 - std::exp(-2.0 * a * (z + 1.0))) / (1.0 - std::exp(-2.0 * a));
}
inline double vert_ratio_dz(double a, double z) {
    return a * std::exp(a * z) * (1.0 + std::exp(-2.0 * a * (z + 1.0))) /
           (1.0 - std::exp(-2.0 * a));
}
}  // namespace

SineExtension harmonic_extension(const std::vector<double>& top_samples, double L) {
    const std::size_t M = top_samples.size() + 1;
    if (M < 2) throw ConfigError("harmonic_extension: need at least one interior sample");
    SineExtension ext;
    ext.L = L;
    ext.coef.assign(M - 1, 0.0);
    // DST-I: d_m = (2/M) sum_j f_j sin(pi m j / M); exact inverse of the sine
    // interpolant through the samples, so the top trace is matched at the nodes.
    for (std::size_t m = 1; m < M; ++m) {
        double s = 0.0;
        for (std::size_t j = 1; j < M; ++j)
            s += top_samples[j - 1] * std::sin(kPi * double(m) * double(j) / double(M));
        ext.coef[m - 1] = 2.0 * s / double(M);
    }
    return ext;
}

std::size_t SineExtension::cutoff(double z) const {
    if (z >= -1e-12) return coef.size();
    double dmax = 1e-30;
    for (double d : coef) dmax = std::max(dmax, std::abs(d));
    // keep modes until d_max e^{m pi z / L} < 1e-18
    double mstar = std::log(dmax * 1e18) * L / (kPi * (-z));
    if (mstar >= double(coef.size())) return coef.size();
    return std::max<std::size_t>(2, std::size_t(mstar) + 1);
}

double SineExtension::value(double X, double z) const {
    const std::size_t M = cutoff(z);
    double s = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        double a = double(m) * kPi / L;
        s += coef[m - 1] * std::sin(a * X) * vert_ratio(a, z);
    }
    return s;
}

double SineExtension::dX(double X, double z) const {
    const std::size_t M = cutoff(z);
    double s = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        double a = double(m) * kPi / L;
        s += coef[m - 1] * a * std::cos(a * X) * vert_ratio(a, z);
    }
    return s;
}

double SineExtension::dz(double X, double z) const {
    const std::size_t M = cutoff(z);
    double s = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        double a = double(m) * kPi / L;
        s += coef[m - 1] * std::sin(a * X) * vert_ratio_dz(a, z);
    }
    return s;
}

// ---------------------------------------------------------------------------
// fluid basis
// ---------------------------------------------------------------------------

void FluidBasis::eval(std::size_t g, double X, double z, double out[6]) const {
    for (int c = 0; c < 6; ++c) out[c] = 0.0;
    if (g < k) {
        const FluidMode& fm = interior[g];
        const double ax = double(fm.m) * kPi / L;
        const double az = double(fm.n) * kPi;
        const double amp = 2.0 / std::sqrt(L);
        const double sx = std::sin(ax * X), cx = std::cos(ax * X);
        const double sz = std::sin(az * (z + 1.0)), cz = std::cos(az * (z + 1.0));
        const int c = fm.component;
        out[0 + c] = amp * sx * sz;
        out[2 + c] = amp * ax * cx * sz;
        out[4 + c] = amp * az * sx * cz;
    } else {
        const SineExtension& e = lift[g - k];
        if (z == 0.0) {
            // the top trace is the plate mode itself by construction; bypass
            // the sine series there so boundary coupling terms stay exact
            out[1] = clamped_beam_eval(trace[g - k], X, 0);
            out[3] = clamped_beam_eval(trace[g - k], X, 1);
            out[5] = e.dz(X, z);
            return;
        }
        out[1] = e.value(X, z);
        out[3] = e.dX(X, z);
        out[5] = e.dz(X, z);
    }
}

FluidBasis make_fluid_basis(std::size_t k, double L, const PlateBasis& plate,
                            std::size_t lifting_intervals) {
    if (plate.size() < k) throw ConfigError("make_fluid_basis: plate basis too small");
    FluidBasis b;
    b.L = L;
    b.k = k;

    // enumerate scalar modes by ascending eigenvalue, two vector promotions each
    std::vector<FluidMode> pool;
    const int mmax = int(k) + 2;
    for (int m = 1; m <= mmax; ++m)
        for (int n = 1; n <= mmax; ++n) {
            FluidMode fm;
            fm.m = m;
            fm.n = n;
            fm.eigenvalue = kPi * kPi * (double(m) * double(m) / (L * L) + double(n) * double(n));
            pool.push_back(fm);
        }
    std::sort(pool.begin(), pool.end(), [](const FluidMode& a, const FluidMode& b2) {
        if (a.eigenvalue != b2.eigenvalue) return a.eigenvalue < b2.eigenvalue;
        if (a.m != b2.m) return a.m < b2.m;
        return a.n < b2.n;
    });
    for (const FluidMode& fm : pool) {
        for (int c = 0; c < 2 && b.interior.size() < k; ++c) {
            FluidMode v = fm;
            v.component = c;
            b.interior.push_back(v);
        }
        if (b.interior.size() == k) break;
    }

    b.lift.reserve(k);
    b.trace.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        b.lift.push_back(harmonic_extension_of(
            [&](double x) { return plate.eval(i, x, 0); }, L, lifting_intervals));
        b.trace.push_back(plate.modes[i]);
    }
    return b;
}

void FluidBasisTable::build(const FluidBasis& basis, const std::vector<double>& X,
                            const std::vector<double>& Z) {
    if (X.size() != Z.size()) throw ConfigError("FluidBasisTable: point list size mismatch");
    npts = X.size();
    tab.assign(basis.size(), std::vector<double>(npts * 6, 0.0));
    for (std::size_t g = 0; g < basis.size(); ++g)
        for (std::size_t p = 0; p < npts; ++p) basis.eval(g, X[p], Z[p], &tab[g][p * 6]);
}

// ---------------------------------------------------------------------------
// coupled matrices
// ---------------------------------------------------------------------------

namespace {
CoupledMatrices assemble_at_order(const PlateBasis& plate, const HeatBasis& heat,
                                  std::size_t n) {
    const std::size_t k = plate.size();
    CoupledMatrices cm;
    cm.heat_plate = Mat::Zero(k, k);
    cm.third_grad = Mat::Zero(k, k);
    GaussRule rule(n, 0.0, plate.L);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double x = rule.x[q], w = rule.w[q];
        std::vector<double> s1(k), s3(k), h1(k);
        for (std::size_t i = 0; i < k; ++i) {
            s1[i] = plate.eval(i, x, 1);
            s3[i] = plate.eval(i, x, 3);
            h1[i] = heat.eval(i, x, 1);
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                cm.heat_plate(i, j) += w * h1[i] * s1[j];
                cm.third_grad(i, j) += w * s3[i] * s3[j];
            }
    }
    return cm;
}
}  // namespace

CoupledMatrices assemble_coupled_matrices(const PlateBasis& plate, const HeatBasis& heat,
                                          std::size_t quad_points) {
    CoupledMatrices cm = assemble_at_order(plate, heat, quad_points);
    CoupledMatrices fine = assemble_at_order(plate, heat, 2 * quad_points);
    double drift = (fine.heat_plate - cm.heat_plate).cwiseAbs().maxCoeff();
    drift = std::max(drift, (fine.third_grad - cm.third_grad).cwiseAbs().maxCoeff() /
                                std::max(1.0, fine.third_grad.cwiseAbs().maxCoeff()));
    cm.quadrature_drift = drift;
    return cm;
}

}  // namespace fsi
