#pragma once

#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "fit.hpp"
#include "report.hpp"
#include "weierstrass.hpp"

namespace subdirac::suites {

struct ShapeSpec {
    std::string name;
    std::map<std::string, double> params;
};

struct SuiteConfig {
    std::string suite = "all";
    std::vector<ShapeSpec> shapes;
    std::vector<int> grids = {16, 32, 64};
    std::string jet = "analytic";
    std::map<std::string, double> tolerances; // per-check overrides
    std::string output;
    bool strict = false;
    unsigned seed = 20240801;
};

inline void validate_config(const SuiteConfig& cfg) {
    static const std::set<std::string> known{"algebra", "geometry", "dirac", "weierstrass", "all"};
    if (!known.count(cfg.suite)) throw ConfigError("unknown suite '" + cfg.suite + "'");
    if (cfg.grids.empty()) throw ConfigError("at least one grid size is required");
    for (int g : cfg.grids)
        if (g < 8) throw ConfigError("grid sizes must be >= 8, got " + std::to_string(g));
    if (cfg.jet != "analytic" && cfg.jet != "finite_difference")
        throw ConfigError("jet must be 'analytic' or 'finite_difference'");
    if (cfg.suite != "algebra" && cfg.shapes.empty())
        throw ConfigError("geometry-dependent suites need at least one shape");
    for (const auto& s : cfg.shapes) make_shape(s.name, s.params, 8, true); // existence probe
}

inline std::vector<ShapeSpec> default_shapes() {
    return {{"plane", {}},
            {"circle", {{"R", 2.0}}},
            {"helix", {{"R", 1.0}, {"c", 0.25}}},
            {"sphere", {{"R", 1.0}}},
            {"catenoid", {{"a", 1.0}}},
            {"enneper", {}},
            {"product_torus", {{"r1", 1.0}, {"r2", 1.0}}},
            {"graph:saddle", {{"a", 0.5}}}};
}

class Checks {
public:
    Checks(Report& rep, const std::map<std::string, double>& overrides)
        : rep_(rep), overrides_(overrides) {}

    double tol(const std::string& name, double dflt) const {
        auto it = overrides_.find(name);
        return it == overrides_.end() ? dflt : it->second;
    }

    void residual(const std::string& name, const std::string& ref, double value, double tolerance,
                  const std::string& note = "", double l2 = 0.0) {
        CheckRecord c;
        c.name = name;
        c.ref = ref;
        c.max_abs_residual = value;
        c.l2_residual = l2;
        c.tolerance = tol(name, tolerance);
        c.pass = value <= c.tolerance;
        c.note = note;
        rep_.checks.push_back(c);
    }

    /// Order-fit check; `abs_bound` additionally constrains the finest-grid
    /// residual when positive. Errors at roundoff scale count as exact.
    void order(const std::string& name, const std::string& ref, const std::vector<double>& hs,
               const std::vector<double>& errs, double lo, double hi, double abs_bound = -1.0,
               double scale = 1.0) {
        CheckRecord c;
        c.name = name;
        c.ref = ref;
        c.max_abs_residual = errs.back();
        c.order_min = lo;
        c.order_max = hi;
        c.tolerance = abs_bound > 0.0 ? tol(name, abs_bound) : 0.0;
        if (all_roundoff(errs, scale)) {
            c.convergence_order = 0.0;
            c.pass = true;
            c.note = "exact to roundoff";
        } else {
            const double p = convergence_order(hs, errs);
            c.convergence_order = p;
            c.pass = p >= lo && p <= hi;
            if (abs_bound > 0.0 && errs.back() > c.tolerance) c.pass = false;
        }
        std::ostringstream os;
        os << c.note << (c.note.empty() ? "" : "; ") << "errors:";
        for (double e : errs) os << " " << e;
        c.note = os.str();
        rep_.checks.push_back(c);
    }

    void annotate_operator(const std::string& kind, const std::vector<int>& grids,
                           const std::vector<double>& hs) {
        CheckRecord& c = rep_.checks.back();
        c.operator_kind = kind;
        c.grid_sizes = grids;
        c.h_values = hs;
    }

    void expect_error(const std::string& name, const std::string& ref, bool threw,
                      const std::string& note) {
        CheckRecord c;
        c.name = name;
        c.ref = ref;
        c.max_abs_residual = threw ? 0.0 : 1.0;
        c.tolerance = 0.0;
        c.pass = threw;
        c.note = note;
        rep_.checks.push_back(c);
    }

private:
    Report& rep_;
    const std::map<std::string, double>& overrides_;
};

// -------------------------------------------------------------------------
// algebra
// -------------------------------------------------------------------------

inline void run_algebra(Checks& ck, unsigned seed) {
    using namespace clifford;
    double anti = 0.0, herm = 0.0, frame_id = 0.0;
    for (int n = 1; n <= 8; ++n) {
        CliffordRep rep = build_clifford(n);
        const CMat id = CMat::identity(rep.spinor_dim);
        for (int i = 1; i <= n; ++i) {
            herm = std::max(herm, (rep.gamma(i) - rep.gamma(i).adjoint()).max_abs());
            herm = std::max(herm, (rep.gamma(i) * rep.gamma(i).adjoint() - id).max_abs());
            for (int j = 1; j <= n; ++j) {
                CMat a = rep.gamma(i) * rep.gamma(j) + rep.gamma(j) * rep.gamma(i);
                CMat want = (i == j) ? id * cx(2, 0) : CMat(rep.spinor_dim, rep.spinor_dim);
                anti = std::max(anti, (a - want).max_abs());
            }
        }
        auto pairs = frame_spinors(rep);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                const cx v = pair_with(pairs[static_cast<size_t>(a - 1)].psi_bar, rep.gamma(b),
                                       pairs[static_cast<size_t>(a - 1)].psi);
                frame_id = std::max(frame_id, std::abs(v - cx(a == b ? 1.0 : 0.0, 0)));
            }
    }
    ck.residual("algebra.anticommutation", "anticommutation", anti, 1e-12);
    ck.residual("algebra.generator_hermitian_unitary", "generator-normalization", herm, 1e-12);
    ck.residual("algebra.frame_spinor_identity", "frame-spinor-identity", frame_id, 1e-12);

    double incl = 0.0;
    const std::vector<std::pair<int, int>> pairs{{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
    for (auto [k, n] : pairs) {
        CliffordRep rk = build_clifford(k);
        CliffordRep rn = build_clifford(n);
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j) {
                CMat lhs = tau_inclusion(k, n, rk, rn, WordSum{{{i, j}, cx(1, 0)}});
                CMat rhs = iota_inclusion(k, n, rk, rn, rk.gamma(i)) *
                           iota_inclusion(k, n, rk, rn, rk.gamma(j));
                incl = std::max(incl, (lhs - rhs).max_abs());
            }
    }
    ck.residual("algebra.inclusion_even_agreement", "inclusion-consistency", incl, 1e-12);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double lift_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        CliffordRep rep = build_clifford(n);
        RMat w(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                w(i, j) = dist(rng);
                w(j, i) = -w(i, j);
            }
        const double bound = w.frobenius() / std::sqrt(2.0);
        if (bound > kPi * 0.99) w *= (kPi * 0.99) / bound;
        RMat r = extract_rotation(rep, spin_exp(rep, w));
        lift_err = std::max(lift_err, (r - expm(w)).max_abs());
    }
    ck.residual("algebra.spin_lift_roundtrip", "double-cover", lift_err, 1e-10);

    ck.residual("algebra.constant_frame_identities", "constant-frame-bilinears",
                weier::constant_frames().max_identity_error, 1e-12);
}

// -------------------------------------------------------------------------
// shared pipelines
// -------------------------------------------------------------------------

struct SurfacePipeline {
    Chart chart; // embedded in E^4
    ShapeData shape;
    ConformalData conf;
    dirac::DiracOperator op;
    weier::WeierstrassSpinors spinors;
};

inline SurfacePipeline surface_pipeline(const Chart& base) {
    SurfacePipeline p{(base.n == 3) ? embed_in_E4(base) : base, {}, {}, {}, {}};
    p.shape = shape_data(p.chart);
    p.conf = conformal_data(p.chart, p.shape.metric);
    p.op = dirac::build_surface_dirac_E4(p.chart, p.shape, p.conf);
    p.spinors = weier::spinors_from_immersion_E4(p.chart, p.shape, p.conf);
    return p;
}

/// Candidate curve zero modes: columns of the lift of the transposed frame
/// field, antiperiodic across a closed parameter axis.
inline dirac::SpinorField curve_lift_modes(const Chart& c, const ShapeData& s, int column) {
    JetFields jets = jet_fields(c);
    auto rots = weier::detail::frame_rotation_field(c, jets, s, /*transpose=*/true);
    const auto rep = clifford::build_clifford(c.n);
    auto lift = clifford::spin_lift_field(rep, rots, c.grid.count());
    dirac::SpinorField psi;
    psi.values = Field<CVec>(c.grid, CVec(static_cast<size_t>(rep.spinor_dim), cx{}));
    psi.values.for_each([&](int i, int j, CVec& v) {
        const CMat& m = lift[static_cast<size_t>(c.grid.flat(i, j))].matrix;
        for (int r = 0; r < rep.spinor_dim; ++r) v[static_cast<size_t>(r)] = m(r, column);
    });
    if (c.grid.periodic(0)) psi.seam_sign[0] = weier::detail::seam_sign(rep, c.grid, lift, rots, 0);
    return psi;
}

inline double curve_zero_mode_residual(const Chart& c) {
    ShapeData s = shape_data(c, {.parallel_frame = c.codim() >= 2});
    dirac::DiracOperator op = dirac::build_curve_dirac(c, s);
    double worst = 0.0;
    for (int col = 0; col < op.rep.spinor_dim; ++col) {
        dirac::SpinorField psi = curve_lift_modes(c, s, col);
        dirac::SpinorField res = dirac::apply_dirac(op, psi);
        worst = std::max(worst, dirac::max_residual(res, 2));
    }
    return worst;
}

// -------------------------------------------------------------------------
// geometry
// -------------------------------------------------------------------------

inline void run_geometry(Checks& ck, const SuiteConfig& cfg) {
    const bool analytic = cfg.jet == "analytic";
    const int N = cfg.grids.back();

    // generic per-shape metric sanity
    for (const auto& spec : cfg.shapes) {
        Chart c = make_shape(spec.name, spec.params, N, analytic);
        MetricData m = induced_metric(c);
        double bad = 0.0;
        m.g.for_each([&](int, int, const RMat& g) {
            if (c.k == 2) bad = std::max(bad, std::abs(g(0, 1) - g(1, 0)));
            bad = std::max(bad, std::max(0.0, -min_eig_sym(g)));
        });
        ck.residual("geometry.metric_symmetry_spd." + spec.name, "induced-metric", bad, 1e-12);
        if (c.k == 2 && c.n == 3) {
            ShapeData s = shape_data(c);
            double neg = 0.0;
            schrodinger_potential_E3(c, s).for_each(
                [&](int, int, const double& v) { neg = std::max(neg, -v); });
            ck.residual("geometry.potential_nonnegative." + spec.name, "umbilic-potential", neg, 1e-10);
        }
    }

    // analytic conformal factors
    {
        Chart c = make_sphere(1.0, N);
        MetricData m = induced_metric(c);
        ConformalData conf = conformal_data(c, m);
        double err = 0.0;
        conf.rho.for_each([&](int i, int j, const double& rho) {
            const double u = c.grid.coord(0, i), v = c.grid.coord(1, j);
            const double want = 4.0 / std::pow(1.0 + u * u + v * v, 2.0);
            err = std::max(err, std::abs(rho - want));
        });
        ck.residual("geometry.conformal_factor.sphere", "stereographic-factor", err, 1e-10,
                    "rho vs 4/(1+|s|^2)^2");
        ck.residual("geometry.conformal_residual.sphere", "conformality", conf.conformality_residual,
                    1e-10);
    }
    {
        Chart c = make_product_torus(1.0, 1.0, N);
        MetricData m = induced_metric(c);
        ConformalData conf = conformal_data(c, m);
        double err = 0.0;
        conf.rho.for_each([&](int, int, const double& rho) { err = std::max(err, std::abs(rho - 1.0)); });
        ck.residual("geometry.conformal_factor.product_torus", "flat-torus-factor", err, 1e-12);
        double gerr = 0.0;
        m.g.for_each([&](int, int, const RMat& g) {
            gerr = std::max({gerr, std::abs(g(0, 0) - 1.0), std::abs(g(1, 1) - 1.0), std::abs(g(0, 1))});
        });
        ck.residual("geometry.metric_identity.product_torus", "induced-metric", gerr, 1e-12);
    }
    {
        bool threw = false;
        try {
            Chart c = make_graph("saddle", 0.5, 16);
            MetricData m = induced_metric(c);
            conformal_data(c, m);
        } catch (const ConformalityError&) {
            threw = true;
        }
        ck.expect_error("geometry.nonconformal_rejection.graph_saddle", "conformality", threw,
                        "saddle graph must be rejected");
    }

    // finite differences converge to the analytic jet
    {
        std::vector<double> hs, g_err, h_err;
        for (int n : cfg.grids) {
            Chart cf = make_sphere(1.0, n, 1.2, false);
            Chart ca = make_sphere(1.0, n, 1.2, true);
            ShapeData sf = shape_data(cf);
            ShapeData sa = shape_data(ca);
            double ge = 0.0, he = 0.0;
            sf.metric.g.for_each([&](int i, int j, const RMat& g) {
                if (!cf.grid.interior(i, j, 2)) return;
                ge = std::max(ge, (g - sa.metric.g.at(i, j)).max_abs());
                he = std::max(he, (sf.second_fundamental[0].at(i, j) -
                                   sa.second_fundamental[0].at(i, j))
                                      .max_abs());
            });
            hs.push_back(cf.grid.step(0));
            g_err.push_back(ge);
            h_err.push_back(he);
        }
        ck.order("geometry.fd_metric_convergence.sphere", "jet-consistency", hs, g_err, 1.7, 2.6);
        ck.order("geometry.fd_shape_convergence.sphere", "jet-consistency", hs, h_err, 1.7, 2.6);
    }

    // tubular density expansion
    auto tubular_check = [&](const std::string& name, const Chart& c) {
        ShapeData s = shape_data(c);
        std::vector<double> qs{0.1, 0.05, 0.025}, errs;
        double scale = 0.0;
        for (double q0 : qs) {
            RVec q(static_cast<size_t>(c.codim()), 0.0);
            q[0] = q0;
            TubularMetric t = tubular_metric(c, s, q);
            double e = 0.0;
            t.rho_exact.for_each([&](int i, int j, const double& rho) {
                e = std::max(e, std::abs(rho - t.rho_expansion.at(i, j)));
                scale = std::max(scale, std::abs(rho));
            });
            errs.push_back(e);
        }
        ck.order("geometry.tubular_expansion." + name, "density-expansion", qs, errs, 2.7, 4.5, -1.0,
                 scale);
    };
    tubular_check("sphere1", make_sphere(1.0, 24));
    tubular_check("circle2", make_circle(2.0, 64));

    // assembled tubular block determinant
    {
        Chart c = make_sphere(1.0, 24);
        ShapeData s = shape_data(c);
        RVec q{0.2};
        TubularMetric t = tubular_metric(c, s, q);
        double err = 0.0;
        t.g_q.for_each([&](int i, int j, const RMat& gq) {
            RMat full(c.n, c.n);
            for (int a = 0; a < c.k; ++a)
                for (int b = 0; b < c.k; ++b) full(a, b) = gq(a, b);
            for (int a = c.k; a < c.n; ++a) full(a, a) = 1.0;
            const double det_full = det(full);
            const double det_gq = gq(0, 0) * gq(1, 1) - gq(0, 1) * gq(1, 0);
            err = std::max(err, std::abs(det_full - det_gq));
            (void)i;
            (void)j;
        });
        ck.residual("geometry.tubular_block.sphere1", "block-structure", err, 1e-12);
    }

    // focal radius guard
    {
        bool threw = false;
        try {
            Chart c = make_sphere(1.0, 16);
            ShapeData s = shape_data(c);
            tubular_metric(c, s, RVec{0.6});
        } catch (const FocalRadiusError&) {
            threw = true;
        }
        ck.expect_error("geometry.focal_bound.sphere1", "focal-radius", threw,
                        "offset beyond the focal bound must be rejected");
    }

    // curvature diagnostics
    {
        Chart c = make_sphere(1.0, N);
        ShapeData s = shape_data(c);
        Field<double> pot = schrodinger_potential_E3(c, s);
        double err = 0.0;
        pot.for_each([&](int, int, const double& v) { err = std::max(err, std::abs(v)); });
        ck.residual("geometry.umbilic.sphere", "umbilic-potential", err, 1e-8);
        double trace_err = 0.0;
        s.mean_trace[0].for_each(
            [&](int, int, const double& t) { trace_err = std::max(trace_err, std::abs(std::abs(t) - 2.0)); });
        ck.residual("geometry.mean_trace.sphere", "curvature-trace", trace_err, 1e-10);
    }
    {
        Chart c = make_catenoid(1.0, N);
        ShapeData s = shape_data(c);
        Field<double> pot = schrodinger_potential_E3(c, s);
        double mn = 1e300, trace = 0.0;
        pot.for_each([&](int, int, const double& v) { mn = std::min(mn, v); });
        s.mean_trace[0].for_each([&](int, int, const double& t) { trace = std::max(trace, std::abs(t)); });
        ck.residual("geometry.minimal_trace.catenoid", "curvature-trace", trace, 1e-10);
        ck.residual("geometry.schrodinger_positive.catenoid", "umbilic-potential",
                    mn > 0.0 ? 0.0 : 1.0, 0.0, "min(H^2-K) = " + std::to_string(mn));
    }
    {
        Chart c = make_plane(16);
        ShapeData s = shape_data(c);
        double err = 0.0;
        s.second_fundamental[0].for_each([&](int, int, const RMat& h) { err = std::max(err, h.max_abs()); });
        Field<double> pot = schrodinger_potential_E3(c, s);
        pot.for_each([&](int, int, const double& v) { err = std::max(err, std::abs(v)); });
        ck.residual("geometry.plane_flat.plane", "flat-case", err, 1e-12);
    }

    // parallel frame along the helix: connection residual refines at 2nd order
    {
        std::vector<double> hs, errs;
        for (int n : cfg.grids) {
            Chart c = make_helix(1.0, 0.25, 2 * n);
            ShapeData s = shape_data(c, {.parallel_frame = true});
            double e = 0.0;
            s.normal_connection[0].for_each([&](int i, int j, const double& v) {
                if (!c.grid.interior(i, j, 3)) return;
                e = std::max(e, std::abs(v));
            });
            hs.push_back(c.grid.step(0));
            errs.push_back(e);
        }
        ck.order("geometry.normal_connection.helix", "parallel-frame", hs, errs, 1.7, 3.0);
    }
}

// -------------------------------------------------------------------------
// dirac
// -------------------------------------------------------------------------

inline void run_dirac(Checks& ck, const SuiteConfig& cfg) {
    // measure-conjugation content
    {
        Chart c = make_sphere(1.0, 24);
        ShapeData s = shape_data(c);
        auto rep = dirac::sa_transform_check(c, s);
        ck.residual("dirac.sa_transform.sphere1", "measure-conjugation", rep.max_error[0], 1e-6);
    }
    {
        Chart c = make_circle(2.0, 64);
        ShapeData s = shape_data(c);
        auto rep = dirac::sa_transform_check(c, s);
        ck.residual("dirac.sa_transform.circle2", "measure-conjugation", rep.max_error[0], 1e-6);
    }

    // minimal surfaces have vanishing potential
    for (const char* name : {"catenoid", "enneper"}) {
        Chart base = (std::string(name) == "catenoid") ? make_catenoid(1.0, 64) : make_enneper(64);
        SurfacePipeline p = surface_pipeline(base);
        double pmax = 0.0, pimag = 0.0;
        p.op.p_c.for_each([&](int, int, const cx& v) {
            pmax = std::max(pmax, std::abs(v));
            pimag = std::max(pimag, std::abs(v.imag()));
        });
        ck.residual(std::string("dirac.minimality.") + name, "minimal-potential", pmax, 1e-8);
        ck.residual(std::string("dirac.potential_real_E3.") + name, "embedded-reality", pimag, 1e-10);
    }

    // operator potential against the direct curvature formula
    for (const char* name : {"sphere", "product_torus"}) {
        Chart base = (std::string(name) == "sphere") ? make_sphere(1.0, 32) : make_product_torus(1.0, 1.0, 32);
        SurfacePipeline p = surface_pipeline(base);
        double err = 0.0;
        p.op.p_c.for_each([&](int i, int j, const cx& v) {
            const double t3 = p.shape.mean_trace[0].at(i, j);
            const double t4 = p.shape.mean_trace[1].at(i, j);
            const cx direct = cx(-0.25, 0.0) * std::sqrt(p.conf.rho.at(i, j)) * cx(t3, t4);
            err = std::max(err, std::abs(v - direct));
        });
        ck.residual(std::string("dirac.potential_two_routes.") + name, "potential-definition", err, 1e-10);
    }

    // principal symbol on flat periodic/interior data
    {
        // curve: straight periodic-in-parameter line is not embeddable, so
        // use an open segment and interior evaluation
        const int n = 64;
        Grid g = Grid::line(n, 0.0, 1.0 / (n - 1), false);
        Chart line;
        line.name = "line";
        line.k = 1;
        line.n = 2;
        line.grid = g;
        line.x = Field<RVec>(g);
        line.analytic_jet = true;
        line.jet1[0] = Field<RVec>(g);
        line.jet2[0] = Field<RVec>(g);
        line.x.for_each([&](int i, int j, RVec& v) {
            v = {g.coord(0, i), 0.0};
            line.jet1[0].at(i, j) = {1.0, 0.0};
            line.jet2[0].at(i, j) = {0.0, 0.0};
        });
        ShapeData s = shape_data(line);
        dirac::DiracOperator op = dirac::build_curve_dirac(line, s);
        const double kwave = 2.0 * kPi;
        dirac::SpinorField psi;
        psi.values = Field<CVec>(g, CVec(2, cx{}));
        psi.values.for_each([&](int i, int, CVec& v) {
            const cx phase = std::exp(cx(0, kwave * g.coord(0, i)));
            v[0] = phase;
            v[1] = 0.5 * phase;
        });
        dirac::SpinorField res = dirac::apply_dirac(op, psi);
        // discrete symbol of the central stencil: i sin(k h)/h
        const double keff = std::sin(kwave * g.step(0)) / g.step(0);
        double err = 0.0;
        res.values.for_each([&](int i, int j, const CVec& v) {
            if (!g.interior(i, j, 1)) return;
            CVec want = mat_vec(op.rep.gamma(1), psi.values.at(i, j)) * cx(0, keff);
            err = std::max(err, max_abs(v - want));
        });
        ck.residual("dirac.symbol.curve_line", "principal-symbol", err, 1e-11);
    }
    {
        // surface: flat torus has zero potential only when r1=r2 and the
        // curvature traces cancel? They do not; use the E^4-embedded plane.
        Chart plane = make_plane(32, 1.0);
        SurfacePipeline p = surface_pipeline(plane);
        const double k1 = 3.0, k2 = -2.0;
        dirac::SpinorField psi;
        psi.values = Field<CVec>(p.chart.grid, CVec(4, cx{}));
        psi.values.for_each([&](int i, int j, CVec& v) {
            const cx phase = std::exp(cx(0, k1 * p.chart.grid.coord(0, i) + k2 * p.chart.grid.coord(1, j)));
            v[0] = phase;
            v[1] = 0.3 * phase;
            v[2] = cx(0, 0.7) * phase;
            v[3] = -0.2 * phase;
        });
        double pmax = 0.0;
        p.op.p_c.for_each([&](int, int, const cx& v) { pmax = std::max(pmax, std::abs(v)); });
        dirac::SpinorField res = dirac::apply_dirac(p.op, psi);
        const double k1e = std::sin(k1 * p.chart.grid.step(0)) / p.chart.grid.step(0);
        const double k2e = std::sin(k2 * p.chart.grid.step(1)) / p.chart.grid.step(1);
        double err = 0.0;
        res.values.for_each([&](int i, int j, const CVec& v) {
            if (!p.chart.grid.interior(i, j, 1)) return;
            const CVec& f = psi.values.at(i, j);
            const cx dp = cx(0, 0.5) * (k1e - cx(0, 1) * k2e);
            const cx db = cx(0, 0.5) * (k1e + cx(0, 1) * k2e);
            CVec want(4, cx{});
            want[0] = 2.0 * dp * f[3];
            want[1] = 2.0 * db * f[2];
            want[2] = 2.0 * dp * f[1];
            want[3] = 2.0 * db * f[0];
            err = std::max(err, max_abs(v - want));
        });
        ck.residual("dirac.symbol.surface_plane", "principal-symbol", std::max(err, pmax), 1e-11);
    }
    {
        // intrinsic operator with a constant conformal factor scales the
        // flat symbol by 1/sqrt(rho)
        Grid g = Grid::rect(32, 0.0, 2.0 * kPi / 32, true, 32, 0.0, 2.0 * kPi / 32, true);
        const double rho0 = 4.0;
        ConformalData conf;
        conf.rho = Field<double>(g, rho0);
        dirac::DiracOperator op = dirac::build_intrinsic_conformal_dirac(g, conf);
        const double k1 = 2.0, k2 = 1.0;
        dirac::SpinorField psi;
        psi.values = Field<CVec>(g, CVec(2, cx{}));
        psi.values.for_each([&](int i, int j, CVec& v) {
            const cx phase = std::exp(cx(0, k1 * g.coord(0, i) + k2 * g.coord(1, j)));
            v[0] = phase;
            v[1] = cx(0.2, -0.4) * phase;
        });
        dirac::SpinorField res = dirac::apply_dirac(op, psi);
        const double k1e = std::sin(k1 * g.step(0)) / g.step(0);
        const double k2e = std::sin(k2 * g.step(1)) / g.step(1);
        const auto rep2 = clifford::build_clifford(2);
        double err = 0.0;
        res.values.for_each([&](int i, int j, const CVec& v) {
            CVec want = mat_vec(rep2.gamma(1), psi.values.at(i, j)) * cx(0, k1e / std::sqrt(rho0));
            want = want + mat_vec(rep2.gamma(2), psi.values.at(i, j)) * cx(0, k2e / std::sqrt(rho0));
            err = std::max(err, max_abs(v - want));
        });
        ck.residual("dirac.symbol.intrinsic_constant", "principal-symbol", err, 1e-11);
    }

    // linearity
    {
        SurfacePipeline p = surface_pipeline(make_product_torus(1.0, 1.0, 16));
        std::mt19937 rng(cfg.seed + 1);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        dirac::SpinorField a, b;
        a.values = Field<CVec>(p.chart.grid, CVec(4, cx{}));
        b.values = Field<CVec>(p.chart.grid, CVec(4, cx{}));
        a.values.for_each([&](int, int, CVec& v) {
            for (auto& z : v) z = cx(dist(rng), dist(rng));
        });
        b.values.for_each([&](int, int, CVec& v) {
            for (auto& z : v) z = cx(dist(rng), dist(rng));
        });
        const cx ca(0.7, -0.3), cb(-1.2, 0.5);
        dirac::SpinorField sum;
        sum.values = Field<CVec>(p.chart.grid, CVec(4, cx{}));
        sum.values.for_each([&](int i, int j, CVec& v) {
            v = a.values.at(i, j) * ca + b.values.at(i, j) * cb;
        });
        dirac::SpinorField ra = dirac::apply_dirac(p.op, a);
        dirac::SpinorField rb = dirac::apply_dirac(p.op, b);
        dirac::SpinorField rs = dirac::apply_dirac(p.op, sum);
        double err = 0.0;
        rs.values.for_each([&](int i, int j, const CVec& v) {
            err = std::max(err, max_abs(v - (ra.values.at(i, j) * ca + rb.values.at(i, j) * cb)));
        });
        ck.residual("dirac.linearity.product_torus", "linearity", err, 1e-12);
    }

    // curve zero modes
    {
        std::vector<double> hs, errs;
        std::vector<int> ns;
        for (int n : cfg.grids) {
            Chart c = make_circle(1.0, 2 * n);
            hs.push_back(c.grid.step(0));
            ns.push_back(2 * n);
            errs.push_back(curve_zero_mode_residual(c));
        }
        ck.order("dirac.curve_zero_mode.circle", "curve-zero-mode", hs, errs, 1.7, 2.3, 1e-3);
        ck.annotate_operator("curve", ns, hs);
    }
    {
        std::vector<double> hs, errs;
        std::vector<int> ns;
        for (int n : cfg.grids) {
            Chart c = make_helix(1.0, 0.25, 2 * n);
            hs.push_back(c.grid.step(0));
            ns.push_back(2 * n);
            errs.push_back(curve_zero_mode_residual(c));
        }
        ck.order("dirac.curve_zero_mode.helix", "curve-zero-mode", hs, errs, 1.7, 2.3);
        ck.annotate_operator("curve", ns, hs);
    }
}

// -------------------------------------------------------------------------
// weierstrass
// -------------------------------------------------------------------------

/// Exponent estimate for the normalization law; uses a log-log regression of
/// the product against rho where rho varies, otherwise a paired comparison
/// with a uniform rescaling of the chart.
inline double normalization_exponent(const Chart& base) {
    SurfacePipeline p = surface_pipeline(base);
    double rho_min = 1e300, rho_max = 0.0;
    p.conf.rho.for_each([&](int, int, const double& r) {
        rho_min = std::min(rho_min, r);
        rho_max = std::max(rho_max, r);
    });
    auto product = [](const SurfacePipeline& q, int i, int j) {
        const double u1 = std::norm(q.spinors.f.at(i, j)) + std::norm(q.spinors.g.at(i, j));
        const double u2 = std::norm(q.spinors.m.at(i, j)) + std::norm(q.spinors.n.at(i, j));
        return u1 * u2;
    };
    if (rho_max / rho_min > 1.01) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        p.conf.rho.for_each([&](int i, int j, const double& r) {
            const double x = std::log(r);
            const double y = std::log(product(p, i, j));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        });
        return (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }
    const double lambda = 2.0;
    SurfacePipeline ps = surface_pipeline(scale_chart(base, lambda));
    return std::log(product(ps, 0, 0) / product(p, 0, 0)) / std::log(lambda * lambda);
}

inline void run_weierstrass(Checks& ck, const SuiteConfig& cfg) {
    // zero modes, products and reconstruction across grid refinement
    for (const char* name : {"product_torus", "sphere", "catenoid", "enneper"}) {
        std::vector<double> hs, zm_err, rec_err, closed_err;
        double prod_res = 0.0, norm_res = 0.0, rec_scale = 0.0;
        for (int n : cfg.grids) {
            Chart base;
            const std::string sn(name);
            if (sn == "sphere")
                base = make_sphere(1.0, n);
            else if (sn == "catenoid")
                base = make_catenoid(1.0, n);
            else if (sn == "enneper")
                base = make_enneper(n);
            else
                base = make_product_torus(1.0, 1.0, n);
            SurfacePipeline p = surface_pipeline(base);
            weier::ZeroModeReport zm = weier::verify_zero_mode(p.op, p.spinors);
            weier::ReconstructionResult rec = weier::reconstruct_immersion(p.spinors, p.chart);
            hs.push_back(std::max(p.chart.grid.step(0), p.chart.grid.step(1)));
            zm_err.push_back(zm.max_residual);
            rec_err.push_back(rec.alignment_error);
            closed_err.push_back(rec.closedness_residual);
            prod_res = std::max(prod_res, p.spinors.product_residual);
            norm_res = std::max(norm_res, p.spinors.normalization_residual);
            p.chart.x.for_each([&](int, int, const RVec& x) {
                for (double v : x) rec_scale = std::max(rec_scale, std::abs(v));
            });
        }
        ck.order(std::string("weier.zero_mode.") + name, "zero-mode-residual", hs, zm_err, 1.7, 2.3,
                 1e-2);
        ck.annotate_operator("surface_E4", cfg.grids, hs);
        ck.order(std::string("weier.reconstruction_alignment.") + name, "round-trip", hs, rec_err,
                 1.7, 2.3);
        ck.order(std::string("weier.reconstruction_closedness.") + name, "round-trip", hs, closed_err,
                 1.7, 2.3, -1.0, rec_scale);
        ck.residual(std::string("weier.products.") + name, "tangential-products", prod_res, 1e-10);
        ck.residual(std::string("weier.normalization_residual.") + name, "normalization-law", norm_res,
                    1e-10);
    }

    // frame identity
    {
        Chart c = make_circle(1.0, 2 * cfg.grids.back());
        ShapeData s = shape_data(c);
        ck.residual("weier.frame_identity.circle", "frame-identity",
                    weier::verify_weierstrass_frame(c, s).max_residual, 1e-8);
    }
    {
        std::vector<double> hs, errs;
        for (int n : cfg.grids) {
            Chart c = make_sphere(1.0, n, 1.2, false);
            Chart ref = make_sphere(1.0, n, 1.2, true);
            ShapeData s = shape_data(c);
            JetFields rj = jet_fields(ref);
            std::array<Field<RVec>, 2> refd{rj.d1[0], rj.d1[1]};
            hs.push_back(c.grid.step(0));
            errs.push_back(weier::verify_weierstrass_frame(c, s, nullptr, nullptr, &refd).max_residual);
        }
        ck.order("weier.frame_identity_fd.sphere", "frame-identity", hs, errs, 1.7, 2.6);
    }
    {
        // invariance under constant tangent/normal gauge rotations
        Chart c = make_sphere(1.0, 24);
        ShapeData s = shape_data(c);
        const double r1 = weier::verify_weierstrass_frame(c, s).max_residual;
        RMat rt(2, 2), rn(1, 1);
        const double th = 0.7;
        rt(0, 0) = std::cos(th);
        rt(0, 1) = -std::sin(th);
        rt(1, 0) = std::sin(th);
        rt(1, 1) = std::cos(th);
        rn(0, 0) = 1.0;
        const double r2 = weier::verify_weierstrass_frame(c, s, &rt, &rn).max_residual;
        Chart ct = make_product_torus(1.0, 1.0, 24);
        ShapeData ts = shape_data(ct);
        const double t1 = weier::verify_weierstrass_frame(ct, ts).max_residual;
        RMat tt(2, 2), tn(2, 2);
        const double a1 = 0.9, a2 = -0.4;
        tt(0, 0) = std::cos(a1);
        tt(0, 1) = -std::sin(a1);
        tt(1, 0) = std::sin(a1);
        tt(1, 1) = std::cos(a1);
        tn(0, 0) = std::cos(a2);
        tn(0, 1) = -std::sin(a2);
        tn(1, 0) = std::sin(a2);
        tn(1, 1) = std::cos(a2);
        const double t2 = weier::verify_weierstrass_frame(ct, ts, &tt, &tn).max_residual;
        ck.residual("weier.gauge_invariance", "gauge-invariance",
                    std::max(std::abs(r1 - r2), std::abs(t1 - t2)), 1e-10);
    }

    // normalization exponent across charts and rescalings
    {
        const int n = cfg.grids[cfg.grids.size() > 1 ? 1 : 0];
        std::vector<double> es;
        es.push_back(normalization_exponent(make_product_torus(1.0, 1.0, n)));
        es.push_back(normalization_exponent(scale_chart(make_product_torus(1.0, 1.0, n), 0.5)));
        es.push_back(normalization_exponent(scale_chart(make_product_torus(1.0, 1.0, n), 2.0)));
        es.push_back(normalization_exponent(make_sphere(1.0, n)));
        double dev = 0.0;
        for (double e : es)
            for (double f : es) dev = std::max(dev, std::abs(std::log(e / f)));
        std::ostringstream note;
        note << "resolved exponent e = " << es.front()
             << "; documented reference 1/2 deviates (measured law is rho^1)";
        ck.residual("weier.normalization_exponent", "normalization-law", dev, 1e-8, note.str());
    }

    // corrupted spinors must be rejected through the closedness gate
    {
        SurfacePipeline p = surface_pipeline(make_product_torus(1.0, 1.0, 64));
        p.spinors.g.for_each([](int, int, cx& v) { v = cx{}; });
        bool threw = false;
        try {
            weier::reconstruct_immersion(p.spinors, p.chart);
        } catch (const SpinorError&) {
            threw = true;
        }
        ck.expect_error("weier.corrupted_spinor_rejection.product_torus", "round-trip", threw,
                        "zeroed g must violate closedness");
    }

    // flat plane: degenerate second complex coordinate
    {
        SurfacePipeline p = surface_pipeline(make_plane(16));
        double err = 0.0;
        p.spinors.f.for_each([&](int i, int j, const cx& f) {
            err = std::max(err, std::abs(f * p.spinors.m.at(i, j) - cx(1, 0)));
            err = std::max(err, std::abs(p.spinors.n.at(i, j)));
            err = std::max(err, std::abs(p.spinors.g.at(i, j)));
        });
        ck.residual("weier.flat_plane.plane", "flat-case", err, 1e-10);
        weier::ZeroModeReport zm = weier::verify_zero_mode(p.op, p.spinors);
        ck.residual("weier.zero_mode_exact.plane", "zero-mode-residual", zm.max_residual, 1e-12);
    }
}

// -------------------------------------------------------------------------

inline Report run_suite(const SuiteConfig& cfg_in) {
    SuiteConfig cfg = cfg_in;
    if (cfg.shapes.empty()) cfg.shapes = default_shapes();
    validate_config(cfg);

    Report rep;
    rep.suite = cfg.suite;
    rep.seed = cfg.seed;
    rep.grids = cfg.grids;
    rep.jet = cfg.jet;
    Checks ck(rep, cfg.tolerances);

    if (cfg.suite == "algebra" || cfg.suite == "all") run_algebra(ck, cfg.seed);
    if (cfg.suite == "geometry" || cfg.suite == "all") run_geometry(ck, cfg);
    if (cfg.suite == "dirac" || cfg.suite == "all") run_dirac(ck, cfg);
    if (cfg.suite == "weierstrass" || cfg.suite == "all") run_weierstrass(ck, cfg);

    rep.sort_checks();
    return rep;
}

// -------------------------------------------------------------------------
// JSON loading
// -------------------------------------------------------------------------

inline ShapeSpec shape_spec_from_json(const nlohmann::json& j) {
    ShapeSpec spec;
    if (j.is_string()) {
        spec.name = j.get<std::string>();
        return spec;
    }
    if (!j.contains("shape") && !j.contains("name"))
        throw ConfigError("shape entry needs a 'shape' (or 'name') key");
    spec.name = j.contains("shape") ? j.at("shape").get<std::string>() : j.at("name").get<std::string>();
    if (j.contains("params"))
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
            spec.params[it.key()] = it.value().get<double>();
    return spec;
}

/// Loads a chart from the catalog-document schema
/// {shape, params, grid: {sizes, ranges, periodic}, jet}. Ranges and
/// periodic flags, when present, are validated against the shape's natural
/// domain.
inline Chart chart_from_json(const nlohmann::json& j) {
    ShapeSpec spec = shape_spec_from_json(j);
    int N = 32;
    if (j.contains("grid")) {
        const auto& jg = j.at("grid");
        if (jg.contains("sizes")) {
            const auto sizes = jg.at("sizes");
            if (!sizes.is_array() || sizes.empty()) throw ConfigError("grid.sizes must be a non-empty array");
            N = sizes[0].get<int>();
            for (const auto& s : sizes)
                if (s.get<int>() != N)
                    throw ConfigError("catalog charts use one size per axis; sizes must agree");
        }
    }
    if (N < 8) throw ConfigError("grid sizes must be >= 8");
    const bool analytic = !j.contains("jet") || j.at("jet").get<std::string>() == "analytic";
    Chart c = make_shape(spec.name, spec.params, N, analytic);
    if (j.contains("grid")) {
        const auto& jg = j.at("grid");
        if (jg.contains("periodic")) {
            const auto per = jg.at("periodic");
            for (size_t a = 0; a < per.size() && a < static_cast<size_t>(c.grid.dim); ++a)
                if (per[a].get<bool>() != c.grid.periodic(static_cast<int>(a)))
                    throw ConfigError("periodic flag for axis " + std::to_string(a) +
                                      " conflicts with the shape's natural domain");
        }
        if (jg.contains("ranges")) {
            const auto ranges = jg.at("ranges");
            for (size_t a = 0; a < ranges.size() && a < static_cast<size_t>(c.grid.dim); ++a) {
                const double lo = ranges[a][0].get<double>();
                if (std::abs(lo - c.grid.axis[a].origin) > 1e-12)
                    throw ConfigError("range for axis " + std::to_string(a) +
                                      " conflicts with the shape's natural domain");
            }
        }
    }
    return c;
}

inline SuiteConfig config_from_json(const nlohmann::json& j) {
    SuiteConfig cfg;
    try {
        if (j.contains("suite")) cfg.suite = j.at("suite").get<std::string>();
        if (j.contains("shapes"))
            for (const auto& s : j.at("shapes")) cfg.shapes.push_back(shape_spec_from_json(s));
        if (j.contains("grids")) cfg.grids = j.at("grids").get<std::vector<int>>();
        if (j.contains("jet")) cfg.jet = j.at("jet").get<std::string>();
        if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
        if (j.contains("strict")) cfg.strict = j.at("strict").get<bool>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned>();
        if (j.contains("tolerances"))
            for (auto it = j.at("tolerances").begin(); it != j.at("tolerances").end(); ++it)
                cfg.tolerances[it.key()] = it.value().get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

// -------------------------------------------------------------------------
// field dumps
// -------------------------------------------------------------------------

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes per-sample fields as RFC-4180 CSV. Surface charts dump the metric,
/// conformal factor, operator potential, spinor quadruple and zero-mode
/// residual; curve charts dump the metric and curvature traces.
inline void emit_fields(const Chart& base, std::ostream& os) {
    if (base.k == 2) {
        SurfacePipeline p = surface_pipeline(base);
        dirac::SpinorField phi;
        phi.values = Field<CVec>(p.chart.grid, CVec(4, cx{}));
        phi.seam_sign = p.spinors.seam_sign;
        phi.values.for_each([&](int i, int j, CVec& v) {
            v[0] = p.spinors.f.at(i, j);
            v[1] = p.spinors.g.at(i, j);
        });
        dirac::SpinorField res = dirac::apply_dirac(p.op, phi);
        os << "i,j,s1,s2,x1,x2,x3,x4,g11,g12,g22,rho,p_re,p_im,f_re,f_im,g_re,g_im,m_re,m_im,n_re,"
              "n_im,residual\r\n";
        p.chart.x.for_each([&](int i, int j, const RVec& x) {
            const RMat& g = p.shape.metric.g.at(i, j);
            const cx pc = p.op.p_c.at(i, j);
            os << i << "," << j << "," << fmt(p.chart.grid.coord(0, i)) << ","
               << fmt(p.chart.grid.coord(1, j)) << "," << fmt(x[0]) << "," << fmt(x[1]) << ","
               << fmt(x[2]) << "," << fmt(x[3]) << "," << fmt(g(0, 0)) << "," << fmt(g(0, 1)) << ","
               << fmt(g(1, 1)) << "," << fmt(p.conf.rho.at(i, j)) << "," << fmt(pc.real()) << ","
               << fmt(pc.imag()) << "," << fmt(p.spinors.f.at(i, j).real()) << ","
               << fmt(p.spinors.f.at(i, j).imag()) << "," << fmt(p.spinors.g.at(i, j).real()) << ","
               << fmt(p.spinors.g.at(i, j).imag()) << "," << fmt(p.spinors.m.at(i, j).real()) << ","
               << fmt(p.spinors.m.at(i, j).imag()) << "," << fmt(p.spinors.n.at(i, j).real()) << ","
               << fmt(p.spinors.n.at(i, j).imag()) << ","
               << fmt(p.chart.grid.interior(i, j, 2) ? max_abs(res.values.at(i, j)) : 0.0) << "\r\n";
        });
        return;
    }
    ShapeData s = shape_data(base, {.parallel_frame = base.codim() >= 2});
    os << "i,s1";
    for (int d = 0; d < base.n; ++d) os << ",x" << (d + 1);
    os << ",g11";
    for (int nd = 0; nd < base.codim(); ++nd) os << ",trace" << (nd + 1);
    os << "\r\n";
    base.x.for_each([&](int i, int j, const RVec& x) {
        os << i << "," << fmt(base.grid.coord(0, i));
        for (double v : x) os << "," << fmt(v);
        os << "," << fmt(s.metric.g.at(i, j)(0, 0));
        for (int nd = 0; nd < base.codim(); ++nd) os << "," << fmt(s.mean_trace[static_cast<size_t>(nd)].at(i, j));
        os << "\r\n";
    });
}

} // namespace subdirac::suites
