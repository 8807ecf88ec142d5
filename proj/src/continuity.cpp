#include "fsi/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fsi/errors.hpp"

namespace fsi {

void TransportField::resize(const Grid2D& g) {
    const auto nx = static_cast<Eigen::Index>(g.nx);
    const auto nz = static_cast<Eigen::Index>(g.nz);
    w_face = Vec::Zero(nx + 1);
    wx_face = Vec::Zero(nx + 1);
    wt_face = Vec::Zero(nx + 1);
    w_cent = Vec::Zero(nx);
    wx_cent = Vec::Zero(nx);
    wt_cent = Vec::Zero(nx);
    u1_vert = Mat::Zero(nx + 1, nz);
    u2_vert = Mat::Zero(nx + 1, nz);
    u1_horz = Mat::Zero(nx, nz + 1);
    u2_horz = Mat::Zero(nx, nz + 1);
}

double weighted_mass(const Grid2D& g, const Vec& w_cent, const Field& r) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.nz; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            m += (1.0 + w_cent[static_cast<Eigen::Index>(i)]) *
                 r[static_cast<Eigen::Index>(g.idx(i, j))];
    return m * g.cell_area();
}

ContinuitySolver::ContinuitySolver(const Grid2D& grid, double epsilon)
    : grid_(grid), eps_(epsilon) {
    if (grid_.nx < 2 || grid_.nz < 2)
        throw ConfigError("continuity grid needs at least 2 cells per direction");
    if (eps_ <= 0.0) throw ConfigError("continuity damping epsilon must be positive");
}

ContinuitySolver::Operator ContinuitySolver::assemble(double t,
                                                      const FieldProvider& fields) const {
    const auto& g = grid_;
    const auto nx = g.nx, nz = g.nz;
    const double hx = g.hx(), hz = g.hz();
    const auto n = static_cast<Eigen::Index>(g.cells());

    TransportField f;
    f.resize(g);
    fields(t, f);

    Operator op;
    op.jdiag = Vec(n);
    for (std::size_t j = 0; j < nz; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            op.jdiag[static_cast<Eigen::Index>(g.idx(i, j))] =
                1.0 + f.w_cent[static_cast<Eigen::Index>(i)];

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 9);

    auto id = [&](std::size_t i, std::size_t j) { return static_cast<int>(g.idx(i, j)); };

    // seed the full 5-point pattern so it never varies with the coefficients
    for (std::size_t j = 0; j < nz; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            trips.emplace_back(id(i, j), id(i, j), 0.0);
            if (i > 0) trips.emplace_back(id(i, j), id(i - 1, j), 0.0);
            if (i + 1 < nx) trips.emplace_back(id(i, j), id(i + 1, j), 0.0);
            if (j > 0) trips.emplace_back(id(i, j), id(i, j - 1), 0.0);
            if (j + 1 < nz) trips.emplace_back(id(i, j), id(i, j + 1), 0.0);
        }

    // interior vertical faces: flux = a (rL + rR)/2 - d (rR - rL)
    for (std::size_t fi = 1; fi < nx; ++fi) {
        const double jf = 1.0 + f.w_face[static_cast<Eigen::Index>(fi)];
        const double d = eps_ * jf / hx;
        for (std::size_t j = 0; j < nz; ++j) {
            const double a =
                jf * f.u1_vert(static_cast<Eigen::Index>(fi), static_cast<Eigen::Index>(j));
            const double cl = 0.5 * a + d;  // weight of the left cell in the flux
            const double cr = 0.5 * a - d;
            const int L = id(fi - 1, j), R = id(fi, j);
            trips.emplace_back(L, L, -cl / hx);
            trips.emplace_back(L, R, -cr / hx);
            trips.emplace_back(R, L, cl / hx);
            trips.emplace_back(R, R, cr / hx);
        }
    }

    // interior horizontal faces with the relative transport velocity
    for (std::size_t fj = 1; fj < nz; ++fj) {
        const double zp1 = g.zf(fj) + 1.0;
        for (std::size_t i = 0; i < nx; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(fj);
            const double V = f.u2_horz(ii, jj) -
                             zp1 * (f.wx_cent[ii] * f.u1_horz(ii, jj) + f.wt_cent[ii]);
            const double d = eps_ * (1.0 + f.w_cent[ii]) / hz;
            const double cb = 0.5 * V + d;
            const double ct = 0.5 * V - d;
            const int B = id(i, fj - 1), T = id(i, fj);
            trips.emplace_back(B, B, -cb / hz);
            trips.emplace_back(B, T, -ct / hz);
            trips.emplace_back(T, B, cb / hz);
            trips.emplace_back(T, T, ct / hz);
        }
    }

    // top face: exchange flux r_top (v - wt), r_top = (9 r_J - r_{J-1})/8
    for (std::size_t i = 0; i < nx; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jt = static_cast<Eigen::Index>(nz);
        const double vtop =
            f.u2_horz(ii, jt) - f.wx_cent[ii] * f.u1_horz(ii, jt) - f.wt_cent[ii];
        const int C = id(i, nz - 1), D = id(i, nz - 2);
        trips.emplace_back(C, C, -vtop * (9.0 / 8.0) / hz);
        trips.emplace_back(C, D, vtop * (1.0 / 8.0) / hz);
    }

    op.A.resize(n, n);
    op.A.setFromTriplets(trips.begin(), trips.end());
    return op;
}

double ContinuitySolver::production_rate(double t, const Field& r,
                                         const FieldProvider& fields) const {
    const Operator op = assemble(t, fields);
    return grid_.cell_area() * (op.A * r).sum();
}

Field ContinuitySolver::time_derivative(double t, const Field& r,
                                        const FieldProvider& fields) const {
    const Operator op = assemble(t, fields);
    return op.A * r;
}

ContinuitySolver::Result ContinuitySolver::advance(const Field& r0, double t0, double window,
                                                   std::size_t substeps,
                                                   const FieldProvider& fields,
                                                   bool rannacher_start) const {
    if (substeps == 0) throw ConfigError("continuity advance: substeps == 0");
    if (r0.size() != static_cast<Eigen::Index>(grid_.cells()))
        throw ConfigError("continuity advance: state size does not match grid");

    const double tau = window / static_cast<double>(substeps);
    const double area = grid_.cell_area();

    Eigen::SparseLU<SpMat> lu;
    bool analyzed = false;

    Result out;
    out.times.reserve(substeps + 1);
    out.r.reserve(substeps + 1);
    out.times.push_back(t0);
    out.r.push_back(r0);
    out.min_value = r0.minCoeff();
    out.max_value = r0.maxCoeff();

    Field r = r0;
    Operator op_a = assemble(t0, fields);
    out.mass_start = area * op_a.jdiag.dot(r);

    auto track = [&](const Field& s) {
        out.min_value = std::min(out.min_value, s.minCoeff());
        out.max_value = std::max(out.max_value, s.maxCoeff());
    };

    // one theta-step from (ta, op_a, r) to tb; returns the new operator
    auto step_to = [&](double tb, double theta, double dt) {
        Operator op_b = assemble(tb, fields);
        Vec rhs = op_a.jdiag.cwiseProduct(r);
        if (theta < 1.0) {
            rhs += (dt * (1.0 - theta)) * (op_a.A * r);
            out.production += dt * (1.0 - theta) * area * (op_a.A * r).sum();
        }
        SpMat lhs = op_b.A * (-theta * dt);
        for (Eigen::Index c = 0; c < lhs.cols(); ++c) lhs.coeffRef(c, c) += op_b.jdiag[c];
        if (!analyzed) {
            lu.analyzePattern(lhs);
            analyzed = true;
        }
        lu.factorize(lhs);
        if (lu.info() != Eigen::Success)
            throw SolverError("continuity step: sparse factorization failed");
        r = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw SolverError("continuity step: sparse solve failed");
        out.production += dt * theta * area * (op_b.A * r).sum();
        track(r);
        op_a = std::move(op_b);
    };

    std::size_t first_cn = 0;
    if (rannacher_start) {
        step_to(t0 + 0.5 * tau, 1.0, 0.5 * tau);
        step_to(t0 + tau, 1.0, 0.5 * tau);
        out.times.push_back(t0 + tau);
        out.r.push_back(r);
        first_cn = 1;
    }
    for (std::size_t m = first_cn; m < substeps; ++m) {
        step_to(t0 + static_cast<double>(m + 1) * tau, 0.5, tau);
        out.times.push_back(t0 + static_cast<double>(m + 1) * tau);
        out.r.push_back(r);
    }

    out.mass_end = area * op_a.jdiag.dot(r);
    return out;
}

}  // namespace fsi
