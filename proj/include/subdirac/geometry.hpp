#pragma once

#include <string>
#include <vector>

#include "chart.hpp"
#include "grid.hpp"

namespace subdirac {

/// First and second derivative fields of a chart: the analytic jet when the
/// chart carries one, second-order finite differences of the samples
/// otherwise.
struct JetFields {
    std::array<Field<RVec>, 2> d1;
    std::array<Field<RVec>, 3> d2;
};

inline JetFields jet_fields(const Chart& c) {
    JetFields out;
    if (c.analytic_jet) {
        for (int a = 0; a < c.k; ++a) out.d1[static_cast<size_t>(a)] = c.jet1[static_cast<size_t>(a)];
        for (int s = 0; s < c.d2_count(); ++s) out.d2[static_cast<size_t>(s)] = c.jet2[static_cast<size_t>(s)];
        return out;
    }
    const RVec zero(static_cast<size_t>(c.n), 0.0);
    for (int a = 0; a < c.k; ++a) out.d1[static_cast<size_t>(a)] = Field<RVec>(c.grid, zero);
    for (int s = 0; s < c.d2_count(); ++s) out.d2[static_cast<size_t>(s)] = Field<RVec>(c.grid, zero);
    c.x.for_each([&](int i, int j, const RVec&) {
        for (int a = 0; a < c.k; ++a)
            out.d1[static_cast<size_t>(a)].at(i, j) = stencil::d1(c.x, i, j, a);
        if (c.k == 1) {
            out.d2[0].at(i, j) = stencil::d2(c.x, i, j, 0);
        } else {
            out.d2[0].at(i, j) = stencil::d2(c.x, i, j, 0);
            out.d2[1].at(i, j) = stencil::d1d1(c.x, i, j);
            out.d2[2].at(i, j) = stencil::d2(c.x, i, j, 1);
        }
    });
    return out;
}

struct MetricData {
    Field<RMat> g;
    Field<RMat> g_inv;
    Field<double> det_g;
    double min_singular_value = 0.0;
};

inline RMat invert_small(const RMat& g) {
    if (g.rows() == 1) {
        RMat inv(1, 1);
        inv(0, 0) = 1.0 / g(0, 0);
        return inv;
    }
    const double d = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    RMat inv(2, 2);
    inv(0, 0) = g(1, 1) / d;
    inv(1, 1) = g(0, 0) / d;
    inv(0, 1) = -g(0, 1) / d;
    inv(1, 0) = -g(1, 0) / d;
    return inv;
}

inline double min_eig_sym(const RMat& g) {
    if (g.rows() == 1) return g(0, 0);
    const double tr = g(0, 0) + g(1, 1);
    const double dt = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
    return 0.5 * (tr - disc);
}

inline MetricData induced_metric(const Chart& c, const JetFields& jets) {
    MetricData m;
    m.g = Field<RMat>(c.grid, RMat(c.k, c.k));
    m.g_inv = Field<RMat>(c.grid, RMat(c.k, c.k));
    m.det_g = Field<double>(c.grid, 0.0);
    double min_sv = 1e300;
    int bad_i = -1, bad_j = -1;
    m.g.for_each([&](int i, int j, RMat& gij) {
        for (int a = 0; a < c.k; ++a)
            for (int b = 0; b < c.k; ++b)
                gij(a, b) = dot(jets.d1[static_cast<size_t>(a)].at(i, j),
                                jets.d1[static_cast<size_t>(b)].at(i, j));
        const double lmin = min_eig_sym(gij);
        const double sv = std::sqrt(std::max(0.0, lmin));
        if (sv < min_sv) {
            min_sv = sv;
            if (sv <= 1e-8) {
                bad_i = i;
                bad_j = j;
            }
        }
        m.g_inv.at(i, j) = invert_small(gij);
        m.det_g.at(i, j) = (c.k == 1) ? gij(0, 0) : gij(0, 0) * gij(1, 1) - gij(0, 1) * gij(1, 0);
    });
    m.min_singular_value = min_sv;
    if (bad_i >= 0)
        throw GeometryError("rank-deficient Jacobian at sample (" + std::to_string(bad_i) + "," +
                            std::to_string(bad_j) + ")");
    return m;
}

inline MetricData induced_metric(const Chart& c) { return induced_metric(c, jet_fields(c)); }

enum class FrameMode {
    oriented,    // codimension-1 oriented complement / per-sample construction
    propagated,  // base Gram-Schmidt + neighbor projection transport
};

struct NormalFrame {
    std::vector<Field<RVec>> normals; // codim fields of unit vectors
    bool parallel = false;
};

namespace detail {

inline RVec normalize_or_throw(RVec v, const std::string& what) {
    const double n = norm(v);
    if (n < 1e-10) throw FrameError("degenerate vector while building " + what);
    return v * (1.0 / n);
}

/// Projects seed out of the span of the given unit vectors.
inline RVec project_out(RVec v, const std::vector<RVec>& basis) {
    for (const auto& b : basis) v = v - b * dot(v, b);
    return v;
}

/// Gram-Schmidt complement of the tangent space at one sample, seeded by the
/// ambient axes in fixed order, skipping near-degenerate seeds.
inline std::vector<RVec> gs_complement(int n, const std::vector<RVec>& tangents, int want) {
    std::vector<RVec> basis = tangents;
    std::vector<RVec> out;
    for (int axis = 0; axis < n && static_cast<int>(out.size()) < want; ++axis) {
        RVec seed(static_cast<size_t>(n), 0.0);
        seed[static_cast<size_t>(axis)] = 1.0;
        RVec v = project_out(seed, basis);
        if (norm(v) < 0.35) continue; // near-degenerate seed, skip
        v = v * (1.0 / norm(v));
        basis.push_back(v);
        out.push_back(v);
    }
    if (static_cast<int>(out.size()) < want) throw FrameError("Gram-Schmidt breakdown: all seeds degenerate");
    return out;
}

/// Determinant of the full frame [tangent-unit columns | normal columns].
inline double frame_det(const std::vector<RVec>& tangents, const std::vector<RVec>& normals) {
    const int n = static_cast<int>(tangents.front().size());
    RMat m(n, n);
    int col = 0;
    for (const auto& t : tangents) {
        RVec u = t * (1.0 / norm(t));
        for (int i = 0; i < n; ++i) m(i, col) = u[static_cast<size_t>(i)];
        ++col;
    }
    for (const auto& nv : normals) {
        for (int i = 0; i < n; ++i) m(i, col) = nv[static_cast<size_t>(i)];
        ++col;
    }
    return det(m);
}

} // namespace detail

/// Orthonormal normal frame. Codimension-1 frames are the oriented
/// complement (positively oriented with the tangents). Codimension-2 frames
/// are propagated from a base-point Gram-Schmidt frame by projection
/// transport, which also realizes the parallel (connection-killing) frame
/// along curves. All frames are normalized to positive orientation.
inline NormalFrame normal_frame(const Chart& c, const JetFields& jets, FrameMode mode) {
    const int codim = c.codim();
    NormalFrame frame;
    frame.normals.assign(static_cast<size_t>(codim), Field<RVec>(c.grid, RVec(static_cast<size_t>(c.n), 0.0)));

    auto tangents_at = [&](int i, int j) {
        std::vector<RVec> t;
        for (int a = 0; a < c.k; ++a) t.push_back(jets.d1[static_cast<size_t>(a)].at(i, j));
        // orthonormalize tangents for projection purposes
        std::vector<RVec> out;
        for (auto& v : t) {
            RVec w = detail::project_out(v, out);
            out.push_back(detail::normalize_or_throw(w, "tangent frame"));
        }
        return out;
    };

    if (codim == 1) {
        frame.normals[0].for_each([&](int i, int j, RVec& nv) {
            const auto tan = tangents_at(i, j);
            if (c.n == 2) {
                nv = {-tan[0][1], tan[0][0]};
            } else {
                const RVec& a = tan[0];
                const RVec& b = tan[1];
                nv = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
                nv = detail::normalize_or_throw(nv, "cross-product normal");
            }
        });
        frame.parallel = (c.k == 1); // single normal along a curve transports itself
        return frame;
    }

    if (mode == FrameMode::oriented) {
        // Per-sample Gram-Schmidt with fixed seed order; deterministic but
        // only continuous away from seed degeneracies.
        frame.normals[0].for_each([&](int i, int j, RVec&) {
            const auto tan = tangents_at(i, j);
            auto ns = detail::gs_complement(c.n, tan, codim);
            if (detail::frame_det(tan, ns) < 0.0) ns.back() = ns.back() * -1.0;
            for (int a = 0; a < codim; ++a) frame.normals[static_cast<size_t>(a)].at(i, j) = ns[static_cast<size_t>(a)];
        });
        frame.parallel = false;
        return frame;
    }

    // Propagated frame: base sample by Gram-Schmidt, then projection
    // transport row-major; predecessor of (i, 0) is (i-1, 0), predecessor of
    // (i, j>0) is (i, j-1).
    const int n0 = c.grid.size(0);
    const int n1 = c.grid.dim == 2 ? c.grid.size(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const auto tan = tangents_at(i, j);
            std::vector<RVec> ns;
            if (i == 0 && j == 0) {
                ns = detail::gs_complement(c.n, tan, codim);
                if (detail::frame_det(tan, ns) < 0.0) ns.back() = ns.back() * -1.0;
            } else {
                const int pi = (j == 0) ? i - 1 : i;
                const int pj = (j == 0) ? 0 : j - 1;
                std::vector<RVec> basis = tan;
                for (int a = 0; a < codim; ++a) {
                    RVec v = detail::project_out(frame.normals[static_cast<size_t>(a)].at(pi, pj), basis);
                    v = detail::normalize_or_throw(v, "propagated normal frame");
                    basis.push_back(v);
                    ns.push_back(v);
                }
            }
            for (int a = 0; a < codim; ++a) frame.normals[static_cast<size_t>(a)].at(i, j) = ns[static_cast<size_t>(a)];
        }
    }

    // Along a curve the transported pair still carries a small systematic
    // rotation per step. Measure the residual connection and integrate the
    // rotation that kills it, leaving a second-order-accurate parallel frame.
    if (c.k == 1 && codim == 2) {
        const int count = c.grid.size(0);
        const double h = c.grid.step(0);
        std::vector<double> conn(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i)
            conn[static_cast<size_t>(i)] =
                dot(frame.normals[1].at(i), stencil::d1(frame.normals[0], i, 0, 0));
        std::vector<double> phi(static_cast<size_t>(count), 0.0);
        for (int i = 1; i < count; ++i)
            phi[static_cast<size_t>(i)] = phi[static_cast<size_t>(i - 1)] -
                                          0.5 * h * (conn[static_cast<size_t>(i - 1)] + conn[static_cast<size_t>(i)]);
        for (int i = 0; i < count; ++i) {
            const double cph = std::cos(phi[static_cast<size_t>(i)]);
            const double sph = std::sin(phi[static_cast<size_t>(i)]);
            const RVec n0 = frame.normals[0].at(i);
            const RVec n1 = frame.normals[1].at(i);
            frame.normals[0].at(i) = n0 * cph + n1 * sph;
            frame.normals[1].at(i) = n1 * cph - n0 * sph;
        }
    }
    frame.parallel = (c.k == 1);
    return frame;
}

struct ShapeData {
    MetricData metric;
    NormalFrame frame;
    std::vector<Field<RMat>> second_fundamental; // per normal: h_ab = e . d2x
    std::vector<Field<RMat>> weingarten;         // h g^{-1}
    std::vector<Field<double>> mean_trace;       // tr(h g^{-1})
    // Normal connection e_second . d_alpha e_first for codimension 2, one
    // field per tangential axis; empty in codimension 1.
    std::vector<Field<double>> normal_connection;
};

struct ShapeOptions {
    bool parallel_frame = false;
    bool strict = false;
};

inline ShapeData shape_data(const Chart& c, const ShapeOptions& opt = {}) {
    if (!c.analytic_jet && opt.strict) {
        const double hmax = std::max(c.grid.step(0), c.grid.dim == 2 ? c.grid.step(1) : 0.0);
        if (hmax > 0.5)
            throw AccuracyError("finite-difference jet on a grid with step " + std::to_string(hmax) +
                                " > 0.5");
    }
    if (opt.parallel_frame && c.k != 1) throw FrameError("parallel_frame is a curve-only option");

    JetFields jets = jet_fields(c);
    ShapeData s;
    s.metric = induced_metric(c, jets);

    FrameMode mode = FrameMode::oriented;
    if (c.codim() >= 2 && (opt.parallel_frame || c.k == 2)) mode = FrameMode::propagated;
    s.frame = normal_frame(c, jets, mode);
    if (opt.parallel_frame && !s.frame.parallel)
        throw FrameError("requested parallel frame could not be built");

    const int codim = c.codim();
    s.second_fundamental.assign(static_cast<size_t>(codim), Field<RMat>(c.grid, RMat(c.k, c.k)));
    s.weingarten.assign(static_cast<size_t>(codim), Field<RMat>(c.grid, RMat(c.k, c.k)));
    s.mean_trace.assign(static_cast<size_t>(codim), Field<double>(c.grid, 0.0));

    for (int nd = 0; nd < codim; ++nd) {
        auto& h_f = s.second_fundamental[static_cast<size_t>(nd)];
        auto& w_f = s.weingarten[static_cast<size_t>(nd)];
        auto& t_f = s.mean_trace[static_cast<size_t>(nd)];
        h_f.for_each([&](int i, int j, RMat& h) {
            const RVec& e = s.frame.normals[static_cast<size_t>(nd)].at(i, j);
            for (int a = 0; a < c.k; ++a)
                for (int b = 0; b < c.k; ++b)
                    h(a, b) = dot(e, jets.d2[static_cast<size_t>(Chart::d2_slot(a, b))].at(i, j));
            RMat w = h * s.metric.g_inv.at(i, j);
            w_f.at(i, j) = w;
            double tr = 0.0;
            for (int a = 0; a < c.k; ++a) tr += w(a, a);
            t_f.at(i, j) = tr;
        });
    }

    if (codim == 2) {
        s.normal_connection.assign(static_cast<size_t>(c.k), Field<double>(c.grid, 0.0));
        for (int axis = 0; axis < c.k; ++axis) {
            auto& conn = s.normal_connection[static_cast<size_t>(axis)];
            conn.for_each([&](int i, int j, double& v) {
                const RVec d_first = stencil::d1(s.frame.normals[0], i, j, axis);
                v = dot(s.frame.normals[1].at(i, j), d_first);
            });
        }
    }
    return s;
}

/// Tubular metric data at a fixed normal offset q, together with the
/// quadratic expansion of the area-density factor.
struct TubularMetric {
    RVec q;
    Field<RMat> g_q;
    Field<double> rho_exact;
    Field<double> rho_expansion;
    std::vector<Field<double>> order1;              // per normal
    std::vector<std::vector<Field<double>>> order2; // per normal pair
};

/// Largest curvature magnitude over samples and normals (spectral norm of
/// the shape operator), used for the focal-radius guard.
inline double max_principal_curvature(const ShapeData& s) {
    double cmax = 0.0;
    for (const auto& wf : s.weingarten) {
        wf.for_each([&](int, int, const RMat& w) {
            if (w.rows() == 1) {
                cmax = std::max(cmax, std::abs(w(0, 0)));
            } else {
                // spectral norm via the symmetric product w^T w
                RMat m = w.transpose() * w;
                const double tr = m(0, 0) + m(1, 1);
                const double dt = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
                const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
                cmax = std::max(cmax, std::sqrt(std::max(0.0, 0.5 * (tr + disc))));
            }
        });
    }
    return cmax;
}

inline TubularMetric tubular_metric(const Chart& c, const ShapeData& s, const RVec& q) {
    if (static_cast<int>(q.size()) != c.codim())
        throw DimensionError("tubular_metric: offset must have one component per normal");
    const double qn = norm(q);
    const double cmax = max_principal_curvature(s);
    if (qn * cmax >= 0.5)
        throw FocalRadiusError("offset " + std::to_string(qn) + " exceeds focal bound (max curvature " +
                               std::to_string(cmax) + ")");

    JetFields jets = jet_fields(c);
    TubularMetric t;
    t.q = q;
    t.g_q = Field<RMat>(c.grid, RMat(c.k, c.k));
    t.rho_exact = Field<double>(c.grid, 0.0);
    t.rho_expansion = Field<double>(c.grid, 0.0);
    const int codim = c.codim();
    t.order1.assign(static_cast<size_t>(codim), Field<double>(c.grid, 0.0));
    t.order2.assign(static_cast<size_t>(codim), std::vector<Field<double>>(
                                                    static_cast<size_t>(codim), Field<double>(c.grid, 0.0)));

    t.rho_exact.for_each([&](int i, int j, double& rho) {
        // paper-convention Weingarten coefficients: derivative of the frame,
        // the negative of the stored (e . d2x) g^{-1} matrix
        std::vector<RMat> gam;
        for (int nd = 0; nd < codim; ++nd) gam.push_back(s.weingarten[static_cast<size_t>(nd)].at(i, j) * -1.0);

        std::vector<RVec> E;
        for (int a = 0; a < c.k; ++a) {
            RVec e = jets.d1[static_cast<size_t>(a)].at(i, j);
            for (int nd = 0; nd < codim; ++nd)
                for (int b = 0; b < c.k; ++b)
                    e = e + q[static_cast<size_t>(nd)] * gam[static_cast<size_t>(nd)](a, b) *
                            jets.d1[static_cast<size_t>(b)].at(i, j);
            E.push_back(e);
        }
        RMat gq(c.k, c.k);
        for (int a = 0; a < c.k; ++a)
            for (int b = 0; b < c.k; ++b) gq(a, b) = dot(E[static_cast<size_t>(a)], E[static_cast<size_t>(b)]);
        t.g_q.at(i, j) = gq;
        const double det_gq = (c.k == 1) ? gq(0, 0) : gq(0, 0) * gq(1, 1) - gq(0, 1) * gq(1, 0);
        rho = det_gq / s.metric.det_g.at(i, j);

        double expansion = 1.0;
        for (int nd = 0; nd < codim; ++nd) {
            double tr1 = 0.0;
            for (int a = 0; a < c.k; ++a) tr1 += gam[static_cast<size_t>(nd)](a, a);
            t.order1[static_cast<size_t>(nd)].at(i, j) = 2.0 * tr1;
            expansion += 2.0 * tr1 * q[static_cast<size_t>(nd)];
        }
        for (int nd = 0; nd < codim; ++nd)
            for (int md = 0; md < codim; ++md) {
                double tr_a = 0.0, tr_b = 0.0;
                for (int a = 0; a < c.k; ++a) {
                    tr_a += gam[static_cast<size_t>(nd)](a, a);
                    tr_b += gam[static_cast<size_t>(md)](a, a);
                }
                RMat prod = gam[static_cast<size_t>(nd)] * gam[static_cast<size_t>(md)];
                double tr_prod = 0.0;
                for (int a = 0; a < c.k; ++a) tr_prod += prod(a, a);
                const double coeff = 2.0 * tr_a * tr_b - tr_prod;
                t.order2[static_cast<size_t>(nd)][static_cast<size_t>(md)].at(i, j) = coeff;
                expansion += coeff * q[static_cast<size_t>(nd)] * q[static_cast<size_t>(md)];
            }
        t.rho_expansion.at(i, j) = expansion;
    });
    return t;
}

struct ConformalData {
    Field<double> rho;
    double conformality_residual = 0.0;
};

inline double default_conformal_tolerance(const Chart& c) {
    if (c.analytic_jet) return 1e-6;
    const double h = std::max(c.grid.step(0), c.grid.dim == 2 ? c.grid.step(1) : 0.0);
    return 10.0 * h * h;
}

inline ConformalData conformal_data(const Chart& c, const MetricData& m, double tolerance = -1.0,
                                    bool allow_nonconformal = false) {
    if (c.k != 2) throw UnsupportedCaseError("conformal_data requires a surface chart");
    if (tolerance < 0.0) tolerance = default_conformal_tolerance(c);
    ConformalData out;
    out.rho = Field<double>(c.grid, 0.0);
    double worst = 0.0;
    out.rho.for_each([&](int i, int j, double& rho) {
        const RMat& g = m.g.at(i, j);
        rho = 0.5 * (g(0, 0) + g(1, 1));
        const double res = (std::abs(g(0, 0) - g(1, 1)) + 2.0 * std::abs(g(0, 1))) / rho;
        worst = std::max(worst, res);
    });
    out.conformality_residual = worst;
    if (!allow_nonconformal && worst > tolerance)
        throw ConformalityError("conformality residual " + std::to_string(worst) + " exceeds tolerance " +
                                std::to_string(tolerance));
    return out;
}

/// H^2 - K for a surface in E^3; equals the squared half-difference of the
/// principal curvatures, hence nonnegative.
inline Field<double> schrodinger_potential_E3(const Chart& c, const ShapeData& s) {
    if (c.k != 2 || c.n != 3)
        throw UnsupportedCaseError("schrodinger_potential_E3 requires k=2, n=3");
    Field<double> out(c.grid, 0.0);
    out.for_each([&](int i, int j, double& v) {
        const RMat& w = s.weingarten[0].at(i, j);
        const double H = 0.5 * s.mean_trace[0].at(i, j);
        const double K = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
        v = H * H - K;
    });
    return out;
}

} // namespace subdirac
