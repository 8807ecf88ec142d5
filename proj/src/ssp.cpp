#include "fsi/ssp.hpp"

#include <cmath>
#include <stdexcept>

#include "fsi/errors.hpp"

namespace fsi {

CoercivityWitness coercivity_witness(const NonlinearitySpec& nl) {
    switch (nl.kind) {
        case NonlinearitySpec::Kind::linear_zero:
        case NonlinearitySpec::Kind::cubic_quasilinear:
            // potentials are nonnegative as written
            return {0.0, 0.0};
        case NonlinearitySpec::Kind::berger_type: {
            // q1/4 X^2 - q2/2 X >= -q2^2/(4 q1) over X >= 0
            if (nl.q1 <= 0.0) throw ConfigError("berger_type needs q1 > 0");
            return {0.0, nl.q2 > 0.0 ? nl.q2 * nl.q2 / (4.0 * nl.q1) : 0.0};
        }
    }
    return {0.0, 0.0};
}

Vec TraceHistory::eval(double t) const {
    if (samples.empty()) throw std::logic_error("TraceHistory: no samples");
    if (samples.size() == 1) return samples[0];
    double s = (t - t0) / dt_sample;
    if (s <= 0.0) return samples.front();
    const double smax = static_cast<double>(samples.size() - 1);
    if (s >= smax) return samples.back();
    const auto i = static_cast<std::size_t>(s);
    const double f = s - static_cast<double>(i);
    return (1.0 - f) * samples[i] + f * samples[i + 1];
}

TraceHistory TraceHistory::constant(const Vec& v0, double t0, double t1) {
    TraceHistory h;
    h.t0 = t0;
    h.dt_sample = t1 - t0;
    h.samples = {v0, v0};
    return h;
}

SspSystem::SspSystem(const PlateBasis& plate, const HeatBasis& heat, const CoupledMatrices& cm,
                     const NonlinearitySpec& nl_, double dt_, double delta_,
                     std::size_t nonlin_quad_points)
    : k(plate.size()),
      dt(dt_),
      delta(delta_),
      nl(nl_),
      rule(nonlin_quad_points, 0.0, plate.L) {
    if (heat.k != k) throw std::logic_error("SspSystem: basis size mismatch");
    xi_s = Vec(k);
    xi_h = Vec(k);
    for (std::size_t i = 0; i < k; ++i) {
        xi_s[static_cast<Eigen::Index>(i)] = plate.xi(i);
        xi_h[static_cast<Eigen::Index>(i)] = heat.xi(i);
    }
    heat_plate = cm.heat_plate;
    plate_heat = cm.heat_plate.transpose();
    third_grad = cm.third_grad;

    const auto nq = rule.size();
    tab_d1 = Mat(k, nq);
    tab_d2 = Mat(k, nq);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t q = 0; q < nq; ++q) {
            tab_d1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) =
                plate.eval(i, rule.x[q], 1);
            tab_d2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) =
                plate.eval(i, rule.x[q], 2);
        }
}

Vec SspSystem::nonlinearity(const Vec& beta) const {
    Vec F = Vec::Zero(static_cast<Eigen::Index>(k));
    switch (nl.kind) {
        case NonlinearitySpec::Kind::linear_zero:
            break;
        case NonlinearitySpec::Kind::cubic_quasilinear: {
            const Vec wxx = tab_d2.transpose() * beta;  // w'' at nodes
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double c = rule.w[q] * std::pow(wxx[static_cast<Eigen::Index>(q)], 3);
                F += c * tab_d2.col(static_cast<Eigen::Index>(q));
            }
            break;
        }
        case NonlinearitySpec::Kind::berger_type: {
            const Vec wx = tab_d1.transpose() * beta;
            double stretch = 0.0;
            Vec mix = Vec::Zero(static_cast<Eigen::Index>(k));
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double wq = wx[static_cast<Eigen::Index>(q)];
                stretch += rule.w[q] * wq * wq;
                mix += (rule.w[q] * wq) * tab_d1.col(static_cast<Eigen::Index>(q));
            }
            F = (nl.q1 * stretch - nl.q2) * mix;
            break;
        }
    }
    return F;
}

double SspSystem::potential(const Vec& beta) const {
    switch (nl.kind) {
        case NonlinearitySpec::Kind::linear_zero:
            return 0.0;
        case NonlinearitySpec::Kind::cubic_quasilinear: {
            const Vec wxx = tab_d2.transpose() * beta;
            double s = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q)
                s += rule.w[q] * std::pow(wxx[static_cast<Eigen::Index>(q)], 4);
            return 0.25 * s;
        }
        case NonlinearitySpec::Kind::berger_type: {
            const Vec wx = tab_d1.transpose() * beta;
            double stretch = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double wq = wx[static_cast<Eigen::Index>(q)];
                stretch += rule.w[q] * wq * wq;
            }
            return 0.25 * nl.q1 * stretch * stretch - 0.5 * nl.q2 * stretch;
        }
    }
    return 0.0;
}

double SspSystem::energy(const PlateState& s) const {
    return 0.25 * s.gamma.squaredNorm() + 0.5 * s.beta.dot(xi_s.cwiseProduct(s.beta)) +
           potential(s.beta) + 0.5 * s.alpha.squaredNorm() +
           0.5 * delta * s.beta.dot(third_grad * s.beta);
}

void SspSystem::rhs(double t, const Vec& beta, const Vec& gamma, const Vec& alpha,
                    const TraceHistory& shifted_trace, Vec& db, Vec& dg, Vec& da) const {
    db = gamma;
    dg = -2.0 * xi_s.cwiseProduct(beta) + 2.0 * (plate_heat * alpha) -
         2.0 * nonlinearity(beta) - 2.0 * delta * (third_grad * beta);
    if (penalty) dg -= (gamma - shifted_trace.eval(t)) / dt;
    da = -xi_h.cwiseProduct(alpha) - heat_plate * gamma;
}

namespace {

// packed ODE state: beta | gamma | alpha | four running integrals
//   acc0 = int |gamma - V|^2   acc1 = int |gamma|^2
//   acc2 = int |V|^2           acc3 = int alpha^T Xi_h alpha
struct Packed {
    const SspSystem& sys;
    const TraceHistory& trace;
    Eigen::Index k;

    void deriv(double t, const Vec& y, Vec& dy) const {
        const Vec beta = y.segment(0, k);
        const Vec gamma = y.segment(k, k);
        const Vec alpha = y.segment(2 * k, k);
        Vec db, dg, da;
        sys.rhs(t, beta, gamma, alpha, trace, db, dg, da);
        dy.resize(3 * k + 4);
        dy.segment(0, k) = db;
        dy.segment(k, k) = dg;
        dy.segment(2 * k, k) = da;
        const Vec V = trace.eval(t);
        dy[3 * k + 0] = (gamma - V).squaredNorm();
        dy[3 * k + 1] = gamma.squaredNorm();
        dy[3 * k + 2] = V.squaredNorm();
        dy[3 * k + 3] = alpha.dot(sys.xi_h.cwiseProduct(alpha));
    }
};

}  // namespace

SspWindowOutput ssp_step(const SspSystem& sys, const PlateState& initial,
                         const TraceHistory& shifted_trace, double window,
                         std::size_t substeps) {
    if (substeps == 0) throw std::logic_error("ssp_step: substeps == 0");
    const auto k = static_cast<Eigen::Index>(sys.k);
    Packed ode{sys, shifted_trace, k};

    Vec y(3 * k + 4);
    y.segment(0, k) = initial.beta;
    y.segment(k, k) = initial.gamma;
    y.segment(2 * k, k) = initial.alpha;
    y.tail(4).setZero();

    const double h = window / static_cast<double>(substeps);
    const double s0 = sys.energy(initial);

    SspWindowOutput out;
    out.times.reserve(substeps + 1);
    out.beta.reserve(substeps + 1);

    auto record = [&](double t) {
        PlateState s;
        s.beta = y.segment(0, k);
        s.gamma = y.segment(k, k);
        s.alpha = y.segment(2 * k, k);
        s.t = t;
        const double e = sys.energy(s);
        const double diss = y[3 * k + 3];
        double r;
        if (sys.penalty) {
            const double pen = (y[3 * k + 0] + y[3 * k + 1] - y[3 * k + 2]) / (4.0 * sys.dt);
            r = pen + e + diss - s0;
        } else {
            r = e + diss - s0;
        }
        out.times.push_back(t);
        out.beta.push_back(s.beta);
        out.gamma.push_back(s.gamma);
        out.alpha.push_back(s.alpha);
        out.energy.push_back(e);
        out.dissipation.push_back(diss);
        out.residual.push_back(r);
        out.max_abs_residual = std::max(out.max_abs_residual, std::abs(r));
    };

    record(initial.t);
    Vec k1, k2, k3, k4, tmp;
    for (std::size_t n = 0; n < substeps; ++n) {
        const double t = initial.t + static_cast<double>(n) * h;
        ode.deriv(t, y, k1);
        tmp = y + 0.5 * h * k1;
        ode.deriv(t + 0.5 * h, tmp, k2);
        tmp = y + 0.5 * h * k2;
        ode.deriv(t + 0.5 * h, tmp, k3);
        tmp = y + h * k3;
        ode.deriv(t + h, tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        record(initial.t + static_cast<double>(n + 1) * h);
    }
    out.pen_gap = y[3 * k + 0];
    out.pen_gamma = y[3 * k + 1];
    out.pen_forcing = y[3 * k + 2];
    return out;
}

}  // namespace fsi
