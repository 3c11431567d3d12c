#include <doctest.h>

#include "subdirac/dirac.hpp"
#include "subdirac/suites.hpp"

using namespace subdirac;

TEST_CASE("curve operator construction and preconditions") {
    SUBCASE("surfaces are rejected") {
        Chart sph = make_sphere(1.0, 8);
        ShapeData s = shape_data(sph);
        CHECK_THROWS_AS(dirac::build_curve_dirac(sph, s), UnsupportedCaseError);
    }
    SUBCASE("a three-space curve needs the parallel frame") {
        Chart h = make_helix(1.0, 0.25, 32);
        ShapeData plain = shape_data(h); // per-sample Gram-Schmidt frame
        CHECK_THROWS_AS(dirac::build_curve_dirac(h, plain), FrameError);
        ShapeData par = shape_data(h, {.parallel_frame = true});
        CHECK_NOTHROW(dirac::build_curve_dirac(h, par));
    }
    SUBCASE("circle potential carries half the curvature trace") {
        const double R = 2.0;
        Chart c = make_circle(R, 32);
        ShapeData s = shape_data(c);
        dirac::DiracOperator op = dirac::build_curve_dirac(c, s);
        op.curvature_trace[0].for_each([&](int, int, const double& t) {
            CHECK(std::abs(std::abs(dirac::DiracOperator::potential_factor * t) - 0.5 / R) < 1e-12);
        });
    }
}

TEST_CASE("circle zero mode in closed form") {
    // With the oriented frame (inward normal, stored trace +1/R) the
    // operator is sigma1 d/ds - sigma2/(2R), annihilating the gauge-rotated
    // constant (e^{i theta/2}, 0) with the antiperiodic seam.
    const double R = 1.0;
    std::vector<double> errs;
    for (int N : {64, 128}) {
        Chart c = make_circle(R, N);
        ShapeData s = shape_data(c);
        dirac::DiracOperator op = dirac::build_curve_dirac(c, s);
        dirac::SpinorField psi;
        psi.values = Field<CVec>(c.grid, CVec(2, cx{}));
        psi.seam_sign[0] = -1.0;
        psi.values.for_each([&](int i, int, CVec& v) {
            const double theta = c.grid.coord(0, i) / R;
            v[0] = std::exp(cx(0, 0.5 * theta));
        });
        dirac::SpinorField res = dirac::apply_dirac(op, psi);
        errs.push_back(dirac::max_residual(res, 0));
    }
    CHECK(errs[0] < 3e-4);
    CHECK(errs[1] < 0.3 * errs[0]); // second-order decay
}

TEST_CASE("curve zero modes from the frame lift refine at 2nd order") {
    std::vector<double> hs, errs;
    for (int N : {64, 128}) {
        Chart c = make_helix(1.0, 0.25, N);
        hs.push_back(c.grid.step(0));
        errs.push_back(suites::curve_zero_mode_residual(c));
    }
    const double order = std::log(errs[0] / errs[1]) / std::log(hs[0] / hs[1]);
    CHECK(order > 1.6);
}

TEST_CASE("surface operator potential") {
    SUBCASE("plane: zero potential, flat complex-derivative blocks") {
        auto p = suites::surface_pipeline(make_plane(16));
        p.op.p_c.for_each([&](int, int, const cx& v) { CHECK(std::abs(v) < 1e-14); });
    }
    SUBCASE("catenoid: minimal surface gives vanishing potential") {
        auto p = suites::surface_pipeline(make_catenoid(1.0, 32));
        p.op.p_c.for_each([&](int, int, const cx& v) { CHECK(std::abs(v) < 1e-10); });
    }
    SUBCASE("unit sphere magnitude profile") {
        auto p = suites::surface_pipeline(make_sphere(1.0, 24));
        p.op.p_c.for_each([&](int i, int j, const cx& v) {
            const double u = p.chart.grid.coord(0, i), w = p.chart.grid.coord(1, j);
            // |p_c| = (1/4) sqrt(rho) |trace| = 1/(1 + |s|^2) for R = 1
            CHECK(std::abs(std::abs(v) - 1.0 / (1.0 + u * u + w * w)) < 1e-10);
            CHECK(std::abs(v.imag()) < 1e-12); // embedded three-space chart
        });
    }
    SUBCASE("unit torus magnitude is constant sqrt(2)/4") {
        auto p = suites::surface_pipeline(make_product_torus(1.0, 1.0, 16));
        p.op.p_c.for_each([&](int, int, const cx& v) {
            CHECK(std::abs(std::abs(v) - std::sqrt(2.0) / 4.0) < 1e-12);
        });
    }
    SUBCASE("non-conformal charts propagate the rejection") {
        Chart torus = make_product_torus(1.0, 2.0, 12);
        ShapeData s = shape_data(torus);
        CHECK_THROWS_AS(conformal_data(torus, s.metric), ConformalityError);
    }
}

TEST_CASE("intrinsic conformal operator") {
    SUBCASE("unit factor reduces to the flat operator") {
        Grid g = Grid::rect(16, 0.0, 2.0 * kPi / 16, true, 16, 0.0, 2.0 * kPi / 16, true);
        ConformalData conf;
        conf.rho = Field<double>(g, 1.0);
        dirac::DiracOperator op = dirac::build_intrinsic_conformal_dirac(g, conf);
        const auto rep = clifford::build_clifford(2);
        dirac::SpinorField psi;
        psi.values = Field<CVec>(g, CVec(2, cx{}));
        psi.values.for_each([&](int i, int j, CVec& v) {
            const cx ph = std::exp(cx(0, 2.0 * g.coord(0, i) - g.coord(1, j)));
            v[0] = ph;
            v[1] = cx(0, 1) * ph;
        });
        dirac::SpinorField res = dirac::apply_dirac(op, psi);
        const double k1e = std::sin(2.0 * g.step(0)) / g.step(0);
        const double k2e = std::sin(-1.0 * g.step(1)) / g.step(1);
        res.values.for_each([&](int i, int j, const CVec& v) {
            CVec want = mat_vec(rep.gamma(1), psi.values.at(i, j)) * cx(0, k1e) +
                        mat_vec(rep.gamma(2), psi.values.at(i, j)) * cx(0, k2e);
            CHECK(max_abs(v - want) < 1e-12);
        });
    }
    SUBCASE("composition order: rho^{-1/2} times a constant is annihilated exactly") {
        Chart sph = make_sphere(1.0, 16);
        MetricData m = induced_metric(sph);
        ConformalData conf = conformal_data(sph, m);
        dirac::DiracOperator op = dirac::build_intrinsic_conformal_dirac(sph.grid, conf);
        dirac::SpinorField psi;
        psi.values = Field<CVec>(sph.grid, CVec(2, cx{}));
        psi.values.for_each([&](int i, int j, CVec& v) {
            const double r = 1.0 / std::sqrt(conf.rho.at(i, j));
            v[0] = cx(0.8 * r, 0.0);
            v[1] = cx(0, -0.6) * r;
        });
        dirac::SpinorField res = dirac::apply_dirac(op, psi);
        CHECK(dirac::max_residual(res, 1) < 1e-12);
    }
    SUBCASE("non-positive factor is rejected") {
        Grid g = Grid::rect(8, 0.0, 1.0, false, 8, 0.0, 1.0, false);
        ConformalData conf;
        conf.rho = Field<double>(g, -1.0);
        CHECK_THROWS_AS(dirac::build_intrinsic_conformal_dirac(g, conf), ValidationError);
    }
}

TEST_CASE("apply_dirac rejects mismatched grids") {
    auto p = suites::surface_pipeline(make_plane(12));
    dirac::SpinorField bad;
    bad.values = Field<CVec>(Grid::rect(8, 0, 1, false, 8, 0, 1, false), CVec(4, cx{}));
    CHECK_THROWS_AS(dirac::apply_dirac(p.op, bad), DimensionError);
}

TEST_CASE("measure conjugation against the curvature trace") {
    SUBCASE("plane: no conjugation term") {
        Chart plane = make_plane(12);
        ShapeData s = shape_data(plane);
        auto rep = dirac::sa_transform_check(plane, s);
        CHECK(rep.max_error[0] < 1e-12);
    }
    SUBCASE("unit sphere to 1e-6") {
        Chart sph = make_sphere(1.0, 16);
        ShapeData s = shape_data(sph);
        auto rep = dirac::sa_transform_check(sph, s);
        CHECK(rep.max_error[0] < 1e-6);
    }
    SUBCASE("circle term equals half the inverse radius") {
        const double R = 2.0;
        Chart c = make_circle(R, 32);
        ShapeData s = shape_data(c);
        // direct evaluation: conjugation term must be +- 1/(2R)
        const double delta = 1e-4;
        TubularMetric tp = tubular_metric(c, s, RVec{delta});
        TubularMetric tm = tubular_metric(c, s, RVec{-delta});
        const double conj_term =
            -0.25 * (tp.rho_exact.at(0, 0) - tm.rho_exact.at(0, 0)) / (2.0 * delta);
        CHECK(std::abs(std::abs(conj_term) - 0.5 / R) < 1e-10);
        auto rep = dirac::sa_transform_check(c, s);
        CHECK(rep.max_error[0] < 1e-9);
    }
    SUBCASE("offsets beyond the focal bound are rejected") {
        Chart sph = make_sphere(1.0, 12);
        ShapeData s = shape_data(sph);
        CHECK_THROWS_AS(dirac::sa_transform_check(sph, s, 0.6), FocalRadiusError);
    }
}
