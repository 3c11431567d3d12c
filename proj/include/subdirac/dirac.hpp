#pragma once

#include <array>
#include <string>
#include <vector>

#include "clifford.hpp"
#include "geometry.hpp"

namespace subdirac::dirac {

using clifford::CliffordRep;

/// Spinor-valued grid field. Fields living in a twisted bundle over a
/// periodic chart pick up a sign when a stencil crosses the seam; the signs
/// are part of the field.
struct SpinorField {
    Field<CVec> values;
    std::array<double, 2> seam_sign{1.0, 1.0};
};

enum class OperatorKind { curve, surface_E4, intrinsic_conformal };

/// Discretized Dirac operator. Only the coefficient fields for the active
/// kind are populated. The mean-curvature potential carries the global 1/2
/// fixed by the zero-mode tests; traces are stored with the (normal . second
/// derivative) sign convention, so the potential term reads
/// -potential_factor * trace * gamma(normal).
struct DiracOperator {
    OperatorKind kind = OperatorKind::curve;
    CliffordRep rep;
    Grid grid;
    static constexpr double potential_factor = 0.5;

    // curve
    Field<double> inv_sqrt_g;
    std::vector<Field<double>> curvature_trace;

    // surface_E4
    Field<cx> p_c;

    // intrinsic_conformal
    Field<double> rho;
};

inline DiracOperator build_curve_dirac(const Chart& c, const ShapeData& s) {
    if (c.k != 1 || (c.n != 2 && c.n != 3))
        throw UnsupportedCaseError("curve operator requires k=1, n in {2,3}");
    if (c.n == 3 && !s.frame.parallel)
        throw FrameError("curve operator in E^3 requires the parallel normal frame");
    DiracOperator op;
    op.kind = OperatorKind::curve;
    op.rep = clifford::build_clifford(c.n);
    op.grid = c.grid;
    op.inv_sqrt_g = Field<double>(c.grid, 0.0);
    op.inv_sqrt_g.for_each([&](int i, int j, double& v) {
        v = 1.0 / std::sqrt(s.metric.g.at(i, j)(0, 0));
    });
    for (int nd = 0; nd < c.codim(); ++nd) op.curvature_trace.push_back(s.mean_trace[static_cast<size_t>(nd)]);
    return op;
}

/// Complex mean-curvature potential of the four-space surface operator,
/// from the stored curvature traces of an oriented frame.
inline cx surface_potential(double sqrt_rho, double t3, double t4) {
    return cx(-0.25, 0.0) * sqrt_rho * cx(t3, t4);
}

inline DiracOperator build_surface_dirac_E4(const Chart& c, const ShapeData& s,
                                            const ConformalData& conf) {
    if (c.k != 2 || (c.n != 3 && c.n != 4))
        throw UnsupportedCaseError("surface operator requires k=2, n in {3,4}");
    DiracOperator op;
    op.kind = OperatorKind::surface_E4;
    op.rep = clifford::build_clifford(4);
    op.grid = c.grid;
    op.p_c = Field<cx>(c.grid, cx{});
    op.p_c.for_each([&](int i, int j, cx& p) {
        const double t3 = s.mean_trace[0].at(i, j);
        const double t4 = (c.codim() == 2) ? s.mean_trace[1].at(i, j) : 0.0;
        p = surface_potential(std::sqrt(conf.rho.at(i, j)), t3, t4);
    });
    if (c.n == 3) {
        double worst = 0.0;
        op.p_c.for_each([&](int, int, const cx& p) { worst = std::max(worst, std::abs(p.imag())); });
        if (worst > 1e-10)
            throw ValidationError("surface operator: potential not real on an E^3 chart");
    }
    return op;
}

inline DiracOperator build_intrinsic_conformal_dirac(const Grid& grid, const ConformalData& conf) {
    DiracOperator op;
    op.kind = OperatorKind::intrinsic_conformal;
    op.rep = clifford::build_clifford(2);
    op.grid = grid;
    op.rho = conf.rho;
    bool bad = false;
    op.rho.for_each([&](int, int, const double& r) { bad = bad || r <= 0.0; });
    if (bad) throw ValidationError("intrinsic operator: conformal factor must be positive");
    return op;
}

namespace detail {

inline CVec cvec_zero(int dim) { return CVec(static_cast<size_t>(dim), cx{}); }

} // namespace detail

/// Applies the operator by second-order differences. Linear in the field;
/// one-sided stencils serve open boundaries, so residual checks trim to the
/// interior.
inline SpinorField apply_dirac(const DiracOperator& op, const SpinorField& field) {
    const Grid& g = op.grid;
    if (field.values.grid.count() != g.count() || field.values.grid.dim != g.dim)
        throw DimensionError("apply_dirac: field grid does not match operator grid");
    const int dim = op.rep.spinor_dim;

    SpinorField out;
    out.values = Field<CVec>(g, detail::cvec_zero(dim));
    out.seam_sign = field.seam_sign;

    if (op.kind == OperatorKind::curve) {
        const CMat& gamma_t = op.rep.gamma(1);
        out.values.for_each([&](int i, int j, CVec& o) {
            const CVec dpsi = stencil::d1(field.values, i, j, 0, cx(field.seam_sign[0], 0.0));
            o = mat_vec(gamma_t, dpsi) * cx(op.inv_sqrt_g.at(i, j), 0.0);
            for (size_t nd = 0; nd < op.curvature_trace.size(); ++nd) {
                const double coeff = -DiracOperator::potential_factor * op.curvature_trace[nd].at(i, j);
                o = o + mat_vec(op.rep.gamma(2 + static_cast<int>(nd)), field.values.at(i, j)) *
                            cx(coeff, 0.0);
            }
        });
        return out;
    }

    if (op.kind == OperatorKind::surface_E4) {
        out.values.for_each([&](int i, int j, CVec& o) {
            const CVec dx = stencil::d1(field.values, i, j, 0, cx(field.seam_sign[0], 0.0));
            const CVec dy = stencil::d1(field.values, i, j, 1, cx(field.seam_sign[1], 0.0));
            const CVec& psi = field.values.at(i, j);
            auto del = [&](int comp) {
                return 0.5 * (dx[static_cast<size_t>(comp)] - cx(0, 1) * dy[static_cast<size_t>(comp)]);
            };
            auto dbar = [&](int comp) {
                return 0.5 * (dx[static_cast<size_t>(comp)] + cx(0, 1) * dy[static_cast<size_t>(comp)]);
            };
            const cx p = op.p_c.at(i, j);
            const cx pbar = std::conj(p);
            o[0] = 2.0 * (pbar * psi[2] + del(3));
            o[1] = 2.0 * (dbar(2) - p * psi[3]);
            o[2] = 2.0 * (p * psi[0] + del(1));
            o[3] = 2.0 * (dbar(0) - pbar * psi[1]);
        });
        return out;
    }

    // intrinsic conformal: rho^{-1} sigma^a d_a rho^{1/2}
    Field<CVec> chi(g, detail::cvec_zero(dim));
    chi.for_each([&](int i, int j, CVec& v) {
        v = field.values.at(i, j) * cx(std::sqrt(op.rho.at(i, j)), 0.0);
    });
    const CMat& g1 = op.rep.gamma(1);
    const CMat& g2 = op.rep.gamma(2);
    out.values.for_each([&](int i, int j, CVec& o) {
        const CVec dx = stencil::d1(chi, i, j, 0, cx(field.seam_sign[0], 0.0));
        o = mat_vec(g1, dx);
        if (g.dim == 2) {
            const CVec dy = stencil::d1(chi, i, j, 1, cx(field.seam_sign[1], 0.0));
            o = o + mat_vec(g2, dy);
        }
        o = o * cx(1.0 / op.rho.at(i, j), 0.0);
    });
    return out;
}

inline double max_residual(const SpinorField& f, int margin = 1) {
    double m = 0.0;
    f.values.for_each([&](int i, int j, const CVec& v) {
        if (!f.values.grid.interior(i, j, margin)) return;
        m = std::max(m, max_abs(v));
    });
    return m;
}

inline double l2_residual(const SpinorField& f, int margin = 1) {
    double s = 0.0;
    int count = 0;
    f.values.for_each([&](int i, int j, const CVec& v) {
        if (!f.values.grid.interior(i, j, margin)) return;
        for (const auto& c : v) s += std::norm(c);
        ++count;
    });
    return count ? std::sqrt(s / count) : 0.0;
}

/// Numerical content of the measure conjugation: differencing the tubular
/// density at small normal offsets must reproduce minus one half of the
/// curvature trace (paper-orientation) per normal direction.
struct SaTransformReport {
    std::vector<double> max_error; // per normal direction
    double delta = 0.0;
};

inline SaTransformReport sa_transform_check(const Chart& c, const ShapeData& s, double delta = 1e-4) {
    const int codim = c.codim();
    SaTransformReport rep;
    rep.delta = delta;
    rep.max_error.assign(static_cast<size_t>(codim), 0.0);
    for (int nd = 0; nd < codim; ++nd) {
        RVec qp(static_cast<size_t>(codim), 0.0), qm(static_cast<size_t>(codim), 0.0);
        qp[static_cast<size_t>(nd)] = delta;
        qm[static_cast<size_t>(nd)] = -delta;
        TubularMetric tp = tubular_metric(c, s, qp);
        TubularMetric tm = tubular_metric(c, s, qm);
        double worst = 0.0;
        tp.rho_exact.for_each([&](int i, int j, const double& rp) {
            const double drho = (rp - tm.rho_exact.at(i, j)) / (2.0 * delta);
            const double conj_term = -0.25 * drho;
            const double expected = 0.5 * s.mean_trace[static_cast<size_t>(nd)].at(i, j);
            worst = std::max(worst, std::abs(conj_term - expected));
        });
        rep.max_error[static_cast<size_t>(nd)] = worst;
    }
    return rep;
}

} // namespace subdirac::dirac
