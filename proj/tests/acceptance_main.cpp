// Acceptance suite: one line per criterion, exit code 0 only if all pass.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "subdirac/fit.hpp"
#include "subdirac/suites.hpp"

using namespace subdirac;

namespace {

int failures = 0;

void line(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("%s  criterion-%02d  %-34s %s\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
    if (!pass) ++failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt1(const char* f, double a) {
    char b[160];
    std::snprintf(b, sizeof b, f, a);
    return b;
}
std::string fmt2(const char* f, double a, double b_) {
    char b[160];
    std::snprintf(b, sizeof b, f, a, b_);
    return b;
}

void criterion_1_algebra() {
    const double t0 = now_seconds();
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        auto rep = clifford::build_clifford(n);
        const CMat id = CMat::identity(rep.spinor_dim);
        for (int i = 1; i <= n; ++i) {
            worst = std::max(worst, (rep.gamma(i) - rep.gamma(i).adjoint()).max_abs());
            worst = std::max(worst, (rep.gamma(i) * rep.gamma(i).adjoint() - id).max_abs());
            for (int j = 1; j <= n; ++j) {
                CMat a = rep.gamma(i) * rep.gamma(j) + rep.gamma(j) * rep.gamma(i);
                CMat want = (i == j) ? id * cx(2, 0) : CMat(rep.spinor_dim, rep.spinor_dim);
                worst = std::max(worst, (a - want).max_abs());
            }
        }
    }
    const double dt = now_seconds() - t0;
    line(1, "algebra exactness n=1..8", worst <= 1e-12 && dt < 1.0,
         fmt2("max residual %.2e, %.2f s", worst, dt));
}

void criterion_2_frame_spinors() {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        auto rep = clifford::build_clifford(n);
        auto pairs = clifford::frame_spinors(rep);
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                const cx v = clifford::pair_with(pairs[a - 1].psi_bar, rep.gamma(b), pairs[a - 1].psi);
                worst = std::max(worst, std::abs(v - cx(a == b ? 1.0 : 0.0, 0)));
            }
    }
    line(2, "frame-spinor identity n=1..8", worst <= 1e-12, fmt1("max residual %.2e", worst));
}

void criterion_3_inclusions() {
    double worst = 0.0;
    const std::vector<std::pair<int, int>> pairs{{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
    for (auto [k, n] : pairs) {
        auto rk = clifford::build_clifford(k);
        auto rn = clifford::build_clifford(n);
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= k; ++j) {
                CMat lhs = clifford::tau_inclusion(k, n, rk, rn, clifford::WordSum{{{i, j}, cx(1, 0)}});
                CMat rhs = clifford::iota_inclusion(k, n, rk, rn, rk.gamma(i)) *
                           clifford::iota_inclusion(k, n, rk, rn, rk.gamma(j));
                worst = std::max(worst, (lhs - rhs).max_abs());
            }
    }
    line(3, "even-subalgebra inclusion", worst <= 1e-12, fmt1("max residual %.2e", worst));
}

void criterion_4_spin_lift() {
    std::mt19937 rng(20240801);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        auto rep = clifford::build_clifford(n);
        RMat w(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                w(i, j) = dist(rng);
                w(j, i) = -w(i, j);
            }
        const double bound = w.frobenius() / std::sqrt(2.0);
        if (bound > kPi * 0.99) w *= (kPi * 0.99) / bound;
        RMat r = clifford::extract_rotation(rep, clifford::spin_exp(rep, w));
        worst = std::max(worst, (r - expm(w)).max_abs());
    }
    line(4, "spin lift round-trip (100 draws)", worst <= 1e-10, fmt1("max residual %.2e", worst));
}

void criterion_5_constant_frames() {
    const double err = weier::constant_frames().max_identity_error;
    line(5, "constant frame bilinears", err <= 1e-12, fmt1("max residual %.2e", err));
}

void criterion_6_tubular() {
    const double t0 = now_seconds();
    auto run = [](const Chart& c) {
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
        if (all_roundoff(errs, scale)) return 99.0; // expansion exact for this shape
        return convergence_order(qs, errs);
    };
    const double slope_sphere = run(make_sphere(1.0, 24));
    const double slope_circle = run(make_circle(2.0, 64));
    const double dt = now_seconds() - t0;
    const bool pass = slope_sphere >= 2.7 && slope_circle >= 2.7 && dt < 5.0;
    line(6, "tubular density expansion", pass,
         fmt2("slopes %.2f (sphere), %.2f (circle; 99=exact)", slope_sphere, slope_circle));
}

void criterion_7_sa_transform() {
    Chart cs = make_sphere(1.0, 24);
    ShapeData ss = shape_data(cs);
    const double es = dirac::sa_transform_check(cs, ss).max_error[0];
    Chart cc = make_circle(2.0, 64);
    ShapeData sc = shape_data(cc);
    const double ec = dirac::sa_transform_check(cc, sc).max_error[0];
    line(7, "measure conjugation vs trace", std::max(es, ec) <= 1e-6,
         fmt2("sphere %.2e, circle %.2e", es, ec));
}

void criterion_8_minimality() {
    double worst = 0.0;
    for (const char* name : {"catenoid", "enneper"}) {
        Chart base = (std::string(name) == "catenoid") ? make_catenoid(1.0, 64) : make_enneper(64);
        auto p = suites::surface_pipeline(base);
        p.op.p_c.for_each([&](int, int, const cx& v) { worst = std::max(worst, std::abs(v)); });
    }
    line(8, "minimal-surface potential", worst <= 1e-8, fmt1("max |p_c| %.2e", worst));
}

void criterion_9_umbilic() {
    Chart cs = make_sphere(1.0, 64);
    ShapeData ss = shape_data(cs);
    double sphere_max = 0.0;
    schrodinger_potential_E3(cs, ss).for_each([&](int, int, const double& v) {
        sphere_max = std::max(sphere_max, std::abs(v));
    });
    Chart cc = make_catenoid(1.0, 64);
    ShapeData sc = shape_data(cc);
    double cat_min = 1e300;
    schrodinger_potential_E3(cc, sc).for_each([&](int, int, const double& v) {
        cat_min = std::min(cat_min, v);
    });
    line(9, "umbilic potential H^2-K", sphere_max <= 1e-8 && cat_min > 0.0,
         fmt2("sphere max %.2e, catenoid min %.2e", sphere_max, cat_min));
}

struct RefinementData {
    std::vector<double> hs, zm, align, closed;
    double scale = 0.0;
};

RefinementData refine(const std::string& name) {
    RefinementData d;
    for (int n : {16, 32, 64}) {
        Chart base = (name == "sphere") ? make_sphere(1.0, n) : make_product_torus(1.0, 1.0, n);
        auto p = suites::surface_pipeline(base);
        auto zm = weier::verify_zero_mode(p.op, p.spinors);
        auto rec = weier::reconstruct_immersion(p.spinors, p.chart);
        d.hs.push_back(std::max(p.chart.grid.step(0), p.chart.grid.step(1)));
        d.zm.push_back(zm.max_residual);
        d.align.push_back(rec.alignment_error);
        d.closed.push_back(rec.closedness_residual);
        p.chart.x.for_each([&](int, int, const RVec& x) {
            for (double v : x) d.scale = std::max(d.scale, std::abs(v));
        });
    }
    return d;
}

void criteria_10_11_zero_modes_roundtrip() {
    const double t0 = now_seconds();
    RefinementData torus = refine("product_torus");
    RefinementData sphere = refine("sphere");
    const double dt = now_seconds() - t0;

    auto order_ok = [](const std::vector<double>& hs, const std::vector<double>& errs, double scale) {
        if (all_roundoff(errs, scale)) return true;
        const double p = convergence_order(hs, errs);
        return p >= 1.7 && p <= 2.3;
    };

    const bool pass10 = order_ok(torus.hs, torus.zm, 1.0) && order_ok(sphere.hs, sphere.zm, 1.0) &&
                        torus.zm.back() <= 1e-2 && sphere.zm.back() <= 1e-2 && dt < 30.0;
    line(10, "zero-mode residual refinement", pass10,
         fmt2("orders %.2f/%.2f", convergence_order(torus.hs, torus.zm),
              convergence_order(sphere.hs, sphere.zm)) +
             fmt2(", finest %.1e/%.1e", torus.zm.back(), sphere.zm.back()) +
             fmt1(", %.1f s", dt));

    const bool pass11 = order_ok(torus.hs, torus.align, torus.scale) &&
                        order_ok(sphere.hs, sphere.align, sphere.scale) &&
                        order_ok(torus.hs, torus.closed, torus.scale) &&
                        order_ok(sphere.hs, sphere.closed, sphere.scale);
    line(11, "round-trip reconstruction", pass11,
         fmt2("alignment orders %.2f/%.2f", convergence_order(torus.hs, torus.align),
              convergence_order(sphere.hs, sphere.align)) +
             fmt2(", closedness %.1e/%.1e (torus exact)", torus.closed.back(), sphere.closed.back()));
}

void criterion_12_frame_identity() {
    Chart cc = make_circle(1.0, 128);
    ShapeData cs = shape_data(cc);
    const double circle_res = weier::verify_weierstrass_frame(cc, cs).max_residual;

    std::vector<double> hs, errs;
    for (int n : {16, 32, 64}) {
        Chart c = make_sphere(1.0, n, 1.2, false);
        Chart ref = make_sphere(1.0, n, 1.2, true);
        ShapeData s = shape_data(c);
        JetFields rj = jet_fields(ref);
        std::array<Field<RVec>, 2> refd{rj.d1[0], rj.d1[1]};
        hs.push_back(c.grid.step(0));
        errs.push_back(weier::verify_weierstrass_frame(c, s, nullptr, nullptr, &refd).max_residual);
    }
    const double order = convergence_order(hs, errs);

    Chart cg = make_sphere(1.0, 24);
    ShapeData sg = shape_data(cg);
    const double r1 = weier::verify_weierstrass_frame(cg, sg).max_residual;
    RMat rt(2, 2), rn(1, 1);
    rt(0, 0) = std::cos(0.7);
    rt(0, 1) = -std::sin(0.7);
    rt(1, 0) = std::sin(0.7);
    rt(1, 1) = std::cos(0.7);
    rn(0, 0) = 1.0;
    const double gauge_dev = std::abs(weier::verify_weierstrass_frame(cg, sg, &rt, &rn).max_residual - r1);

    const bool pass = circle_res <= 1e-8 && order >= 1.7 && gauge_dev <= 1e-10;
    line(12, "frame identity", pass,
         fmt2("circle %.1e, sphere order %.2f", circle_res, order) + fmt1(", gauge dev %.1e", gauge_dev));
}

void criterion_13_normalization() {
    std::vector<double> es;
    es.push_back(suites::normalization_exponent(make_product_torus(1.0, 1.0, 32)));
    es.push_back(suites::normalization_exponent(scale_chart(make_product_torus(1.0, 1.0, 32), 0.5)));
    es.push_back(suites::normalization_exponent(scale_chart(make_product_torus(1.0, 1.0, 32), 2.0)));
    es.push_back(suites::normalization_exponent(make_sphere(1.0, 32)));
    double dev = 0.0;
    for (double a : es)
        for (double b : es) dev = std::max(dev, std::abs(std::log(a / b)));
    const bool deviates_from_documented_half = std::abs(es.front() - 0.5) > 1e-3;
    line(13, "normalization exponent", dev <= 1e-8,
         fmt2("e = %.9f, max log-ratio %.1e", es.front(), dev) +
             (deviates_from_documented_half ? " (flags deviation from the documented 1/2)" : ""));
}

void criterion_14_determinism() {
    const double t0 = now_seconds();
    suites::SuiteConfig cfg;
    cfg.suite = "all";
    Report r1 = suites::run_suite(cfg);
    const double dt = now_seconds() - t0;
    Report r2 = suites::run_suite(cfg);
    const bool identical = to_json(r1).dump() == to_json(r2).dump();
    line(14, "full-suite determinism/runtime", identical && r1.all_pass() && dt < 60.0,
         fmt2("one run %.1f s, %.0f checks", dt, static_cast<double>(r1.checks.size())) +
             (identical ? ", reports identical" : ", reports differ") +
             (r1.all_pass() ? "" : ", suite has failures"));
}

} // namespace

int main() {
    criterion_1_algebra();
    criterion_2_frame_spinors();
    criterion_3_inclusions();
    criterion_4_spin_lift();
    criterion_5_constant_frames();
    criterion_6_tubular();
    criterion_7_sa_transform();
    criterion_8_minimality();
    criterion_9_umbilic();
    criteria_10_11_zero_modes_roundtrip();
    criterion_12_frame_identity();
    criterion_13_normalization();
    criterion_14_determinism();
    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
