#include <doctest.h>

#include "subdirac/geometry.hpp"

using namespace subdirac;

namespace {

/// Custom chart helper for degenerate/sheared test cases.
Chart custom_surface(int N, double extent, std::function<void(double, double, Jet&)> gen,
                     int n_amb = 3) {
    Chart c;
    c.name = "custom";
    c.k = 2;
    c.n = n_amb;
    c.grid = Grid::rect(N, -extent, 2.0 * extent / (N - 1), false, N, -extent, 2.0 * extent / (N - 1), false);
    c.x = Field<RVec>(c.grid);
    c.analytic_jet = true;
    for (int a = 0; a < 2; ++a) c.jet1[a] = Field<RVec>(c.grid);
    for (int s = 0; s < 3; ++s) c.jet2[s] = Field<RVec>(c.grid);
    c.x.for_each([&](int i, int j, RVec&) {
        Jet jet;
        jet.x.assign(static_cast<size_t>(n_amb), 0.0);
        jet.d1[0].assign(static_cast<size_t>(n_amb), 0.0);
        jet.d1[1].assign(static_cast<size_t>(n_amb), 0.0);
        for (int s = 0; s < 3; ++s) jet.d2[s].assign(static_cast<size_t>(n_amb), 0.0);
        gen(c.grid.coord(0, i), c.grid.coord(1, j), jet);
        c.x.at(i, j) = jet.x;
        c.jet1[0].at(i, j) = jet.d1[0];
        c.jet1[1].at(i, j) = jet.d1[1];
        for (int s = 0; s < 3; ++s) c.jet2[s].at(i, j) = jet.d2[s];
    });
    return c;
}

} // namespace

TEST_CASE("induced metric: plane, sphere and torus oracles") {
    Chart plane = make_plane(16);
    MetricData mp = induced_metric(plane);
    mp.g.for_each([&](int, int, const RMat& g) {
        CHECK(std::abs(g(0, 0) - 1.0) < 1e-14);
        CHECK(std::abs(g(1, 1) - 1.0) < 1e-14);
        CHECK(std::abs(g(0, 1)) < 1e-14);
    });

    const double R = 1.7;
    Chart sph = make_sphere(R, 24);
    MetricData ms = induced_metric(sph);
    ms.g.for_each([&](int i, int j, const RMat& g) {
        const double u = sph.grid.coord(0, i), v = sph.grid.coord(1, j);
        const double rho = 4.0 * R * R / std::pow(1.0 + u * u + v * v, 2.0);
        CHECK(std::abs(g(0, 0) - rho) < 1e-12);
        CHECK(std::abs(g(1, 1) - rho) < 1e-12);
        CHECK(std::abs(g(0, 1)) < 1e-12);
    });

    Chart torus = make_product_torus(1.0, 1.0, 16);
    MetricData mt = induced_metric(torus);
    mt.g.for_each([&](int, int, const RMat& g) {
        CHECK(std::abs(g(0, 0) - 1.0) < 1e-14);
        CHECK(std::abs(g(1, 1) - 1.0) < 1e-14);
    });
}

TEST_CASE("rank-deficient immersion is rejected") {
    Chart bad = custom_surface(8, 1.0, [](double u, double v, Jet& j) {
        j.x = {u, u, 0.0}; // both parameters collapse to one direction
        j.d1[0] = {1.0, 1.0, 0.0};
        j.d1[1] = {0.0, 0.0, 0.0};
        (void)v;
    });
    CHECK_THROWS_AS(induced_metric(bad), GeometryError);
}

TEST_CASE("normal frames") {
    SUBCASE("plane has the constant vertical normal") {
        Chart plane = make_plane(8);
        ShapeData s = shape_data(plane);
        s.frame.normals[0].for_each([&](int, int, const RVec& n) {
            CHECK(std::abs(std::abs(n[2]) - 1.0) < 1e-14);
        });
    }
    SUBCASE("circle normal is radial and the frame is oriented") {
        Chart c = make_circle(1.0, 32);
        ShapeData s = shape_data(c);
        s.frame.normals[0].for_each([&](int i, int, const RVec& n) {
            const RVec& x = c.x.at(i);
            CHECK(std::abs(std::abs(dot(n, x)) - 1.0) < 1e-12);
            const RVec& t = c.jet1[0].at(i);
            CHECK(t[0] * n[1] - t[1] * n[0] > 0.0); // positively oriented
        });
        CHECK(s.frame.parallel); // codimension one: transport is trivial
    }
    SUBCASE("helix parallel frame kills the normal connection at 2nd order") {
        std::vector<double> hs, errs;
        for (int N : {64, 128}) {
            Chart c = make_helix(1.0, 0.25, N);
            ShapeData s = shape_data(c, {.parallel_frame = true});
            double e = 0.0;
            s.normal_connection[0].for_each([&](int i, int j, const double& v) {
                if (!c.grid.interior(i, j, 3)) return;
                e = std::max(e, std::abs(v));
            });
            hs.push_back(c.grid.step(0));
            errs.push_back(e);
        }
        const double order = std::log(errs[0] / errs[1]) / std::log(hs[0] / hs[1]);
        CHECK(order > 1.6);
    }
    SUBCASE("parallel frame is a curve-only option") {
        Chart sph = make_sphere(1.0, 8);
        CHECK_THROWS_AS(shape_data(sph, {.parallel_frame = true}), FrameError);
    }
}

TEST_CASE("shape data: curvature traces") {
    SUBCASE("plane is totally geodesic") {
        Chart plane = make_plane(8);
        ShapeData s = shape_data(plane);
        s.second_fundamental[0].for_each([&](int, int, const RMat& h) { CHECK(h.max_abs() < 1e-14); });
        s.mean_trace[0].for_each([&](int, int, const double& t) { CHECK(std::abs(t) < 1e-14); });
    }
    SUBCASE("sphere trace has magnitude 2/R") {
        for (double R : {1.0, 2.0}) {
            Chart sph = make_sphere(R, 16);
            ShapeData s = shape_data(sph);
            s.mean_trace[0].for_each([&](int, int, const double& t) {
                CHECK(std::abs(std::abs(t) - 2.0 / R) < 1e-10);
            });
        }
    }
    SUBCASE("catenoid is minimal: principal curvatures cancel") {
        Chart cat = make_catenoid(1.0, 24);
        ShapeData s = shape_data(cat);
        s.mean_trace[0].for_each([&](int, int, const double& t) { CHECK(std::abs(t) < 1e-12); });
    }
    SUBCASE("torus curvature traces have unit magnitude and zero connection") {
        Chart torus = make_product_torus(1.0, 1.0, 24);
        ShapeData s = shape_data(torus);
        s.mean_trace[0].for_each([&](int, int, const double& t) { CHECK(std::abs(std::abs(t) - 1.0) < 1e-10); });
        s.mean_trace[1].for_each([&](int, int, const double& t) { CHECK(std::abs(std::abs(t) - 1.0) < 1e-10); });
        for (int axis = 0; axis < 2; ++axis)
            s.normal_connection[axis].for_each([&](int, int, const double& v) { CHECK(std::abs(v) < 1e-10); });
    }
    SUBCASE("weingarten equals h g^{-1} as stored") {
        Chart sph = make_sphere(1.3, 12);
        ShapeData s = shape_data(sph);
        s.weingarten[0].for_each([&](int i, int j, const RMat& w) {
            RMat recon = s.second_fundamental[0].at(i, j) * s.metric.g_inv.at(i, j);
            CHECK((w - recon).max_abs() < 1e-13);
        });
    }
}

TEST_CASE("tubular metric and density expansion") {
    SUBCASE("zero offset leaves the density at one") {
        Chart sph = make_sphere(1.0, 12);
        ShapeData s = shape_data(sph);
        TubularMetric t = tubular_metric(sph, s, RVec{0.0});
        t.rho_exact.for_each([&](int, int, const double& r) { CHECK(std::abs(r - 1.0) < 1e-13); });
    }
    SUBCASE("unit sphere density matches the offset-sphere closed form") {
        Chart sph = make_sphere(1.0, 16);
        ShapeData s = shape_data(sph);
        // the oriented stereographic normal points toward the center, so a
        // positive offset shrinks the sphere: rho = (1 - q)^4
        for (double q : {0.1, 0.2}) {
            TubularMetric t = tubular_metric(sph, s, RVec{q});
            t.rho_exact.for_each([&](int, int, const double& r) {
                CHECK(std::abs(r - std::pow(1.0 - q, 4.0)) < 1e-10);
            });
        }
    }
    SUBCASE("circle density matches the offset-circle closed form exactly") {
        const double R = 2.0;
        Chart c = make_circle(R, 32);
        ShapeData s = shape_data(c);
        for (double q : {0.05, 0.2}) {
            TubularMetric t = tubular_metric(c, s, RVec{q});
            t.rho_exact.for_each([&](int i, int j, const double& r) {
                CHECK(std::abs(r - std::pow(1.0 - q / R, 2.0)) < 1e-12);
                // quadratic truncation is exact for a curve
                CHECK(std::abs(t.rho_expansion.at(i, j) - r) < 1e-12);
            });
        }
    }
    SUBCASE("offset beyond the focal bound is rejected") {
        Chart sph = make_sphere(1.0, 12);
        ShapeData s = shape_data(sph);
        CHECK_THROWS_AS(tubular_metric(sph, s, RVec{0.55}), FocalRadiusError);
        CHECK_THROWS_AS(tubular_metric(sph, s, RVec{0.1, 0.1}), DimensionError);
    }
}

TEST_CASE("conformal data") {
    SUBCASE("unit product torus is flat conformal") {
        Chart torus = make_product_torus(1.0, 1.0, 16);
        MetricData m = induced_metric(torus);
        ConformalData conf = conformal_data(torus, m);
        CHECK(conf.conformality_residual < 1e-13);
        conf.rho.for_each([&](int, int, const double& r) { CHECK(std::abs(r - 1.0) < 1e-13); });
    }
    SUBCASE("stereographic sphere factor matches the analytic profile") {
        Chart sph = make_sphere(1.0, 24);
        MetricData m = induced_metric(sph);
        ConformalData conf = conformal_data(sph, m);
        CHECK(conf.conformality_residual < 1e-10);
        conf.rho.for_each([&](int i, int j, const double& r) {
            const double u = sph.grid.coord(0, i), v = sph.grid.coord(1, j);
            CHECK(std::abs(r - 4.0 / std::pow(1.0 + u * u + v * v, 2.0)) < 1e-10);
        });
    }
    SUBCASE("sheared plane is rejected") {
        Chart sheared = custom_surface(12, 1.0, [](double u, double v, Jet& j) {
            j.x = {u + v, v, 0.0};
            j.d1[0] = {1.0, 0.0, 0.0};
            j.d1[1] = {1.0, 1.0, 0.0};
        });
        MetricData m = induced_metric(sheared);
        CHECK_THROWS_AS(conformal_data(sheared, m), ConformalityError);
    }
    SUBCASE("curves are not accepted") {
        Chart c = make_circle(1.0, 16);
        MetricData m = induced_metric(c);
        CHECK_THROWS_AS(conformal_data(c, m), UnsupportedCaseError);
    }
}

TEST_CASE("umbilic potential H^2 - K") {
    SUBCASE("sphere and plane vanish") {
        Chart sph = make_sphere(2.0, 16);
        ShapeData s = shape_data(sph);
        schrodinger_potential_E3(sph, s).for_each([&](int, int, const double& v) {
            CHECK(std::abs(v) < 1e-10);
        });
        Chart plane = make_plane(8);
        ShapeData sp = shape_data(plane);
        schrodinger_potential_E3(plane, sp).for_each([&](int, int, const double& v) {
            CHECK(std::abs(v) < 1e-14);
        });
    }
    SUBCASE("catenoid matches the analytic curvature oracle") {
        const double a = 1.0;
        Chart cat = make_catenoid(a, 24);
        ShapeData s = shape_data(cat);
        Field<double> pot = schrodinger_potential_E3(cat, s);
        pot.for_each([&](int i, int j, const double& v) {
            const double vv = cat.grid.coord(1, j);
            const double want = 1.0 / std::pow(a * std::cosh(vv) * std::cosh(vv), 2.0);
            CHECK(std::abs(v - want) < 1e-10);
            CHECK(v > 0.0);
            (void)i;
        });
    }
    SUBCASE("wrong dimensions are rejected") {
        Chart torus = make_product_torus(1.0, 1.0, 8);
        ShapeData s = shape_data(torus);
        CHECK_THROWS_AS(schrodinger_potential_E3(torus, s), UnsupportedCaseError);
    }
}

TEST_CASE("strict mode rejects coarse finite-difference charts") {
    Chart c = make_circle(2.0, 8, false); // step well above 0.5
    CHECK_THROWS_AS(shape_data(c, {.parallel_frame = false, .strict = true}), AccuracyError);
    CHECK_NOTHROW(shape_data(c));
}

TEST_CASE("finite-difference jets converge to the analytic jet") {
    std::vector<double> hs, errs;
    for (int N : {17, 33}) {
        Chart cf = make_graph("sinsin", 0.5, N, 1.0, false);
        Chart ca = make_graph("sinsin", 0.5, N, 1.0, true);
        ShapeData sf = shape_data(cf);
        ShapeData sa = shape_data(ca);
        double e = 0.0;
        sf.metric.g.for_each([&](int i, int j, const RMat& g) {
            if (!cf.grid.interior(i, j, 2)) return;
            e = std::max(e, (g - sa.metric.g.at(i, j)).max_abs());
            e = std::max(e, (sf.second_fundamental[0].at(i, j) - sa.second_fundamental[0].at(i, j)).max_abs());
        });
        hs.push_back(cf.grid.step(0));
        errs.push_back(e);
    }
    const double order = std::log(errs[0] / errs[1]) / std::log(hs[0] / hs[1]);
    CHECK(order > 1.6);
}
