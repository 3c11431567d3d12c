#include <doctest.h>

#include <sstream>

#include "subdirac/suites.hpp"

using namespace subdirac;

TEST_CASE("config validation") {
    suites::SuiteConfig cfg;
    cfg.shapes = suites::default_shapes();
    SUBCASE("grids below eight are rejected") {
        cfg.grids = {4};
        CHECK_THROWS_AS(suites::validate_config(cfg), ConfigError);
    }
    SUBCASE("unknown suites are rejected") {
        cfg.suite = "everything";
        CHECK_THROWS_AS(suites::validate_config(cfg), ConfigError);
    }
    SUBCASE("unknown shapes are rejected") {
        cfg.shapes.push_back({"klein_bottle", {}});
        CHECK_THROWS_AS(suites::validate_config(cfg), CatalogError);
    }
    SUBCASE("bad jet keyword is rejected") {
        cfg.jet = "symbolic";
        CHECK_THROWS_AS(suites::validate_config(cfg), ConfigError);
    }
    SUBCASE("geometry suites need shapes") {
        cfg.shapes.clear();
        cfg.suite = "geometry";
        CHECK_THROWS_AS(suites::validate_config(cfg), ConfigError);
        cfg.suite = "algebra"; // algebra runs without shapes
        CHECK_NOTHROW(suites::validate_config(cfg));
    }
}

TEST_CASE("config and chart JSON loading") {
    SUBCASE("full config document") {
        nlohmann::json j = nlohmann::json::parse(R"({
            "suite": "weierstrass",
            "shapes": [{"shape": "product_torus", "params": {"r1": 1.0, "r2": 1.0}}, "sphere"],
            "grids": [16, 32],
            "jet": "analytic",
            "tolerances": {"weier.products.sphere": 1e-9},
            "seed": 7,
            "strict": true
        })");
        suites::SuiteConfig cfg = suites::config_from_json(j);
        CHECK(cfg.suite == "weierstrass");
        CHECK(cfg.shapes.size() == 2);
        CHECK(cfg.shapes[0].params.at("r1") == 1.0);
        CHECK(cfg.grids == std::vector<int>{16, 32});
        CHECK(cfg.seed == 7);
        CHECK(cfg.strict);
        CHECK(cfg.tolerances.at("weier.products.sphere") == 1e-9);
    }
    SUBCASE("malformed config reports the key") {
        nlohmann::json j = nlohmann::json::parse(R"({"grids": "notalist"})");
        CHECK_THROWS_AS(suites::config_from_json(j), ConfigError);
    }
    SUBCASE("chart document with grid and jet") {
        nlohmann::json j = nlohmann::json::parse(R"({
            "shape": "sphere", "params": {"R": 1.0},
            "grid": {"sizes": [24, 24], "periodic": [false, false]},
            "jet": "finite_difference"
        })");
        Chart c = suites::chart_from_json(j);
        CHECK(c.k == 2);
        CHECK(c.grid.size(0) == 24);
        CHECK_FALSE(c.analytic_jet);
    }
    SUBCASE("conflicting periodicity is rejected") {
        nlohmann::json j = nlohmann::json::parse(R"({
            "shape": "circle", "grid": {"sizes": [16], "periodic": [false]}
        })");
        CHECK_THROWS_AS(suites::chart_from_json(j), ConfigError);
    }
}

TEST_CASE("algebra suite passes and reports deterministically") {
    suites::SuiteConfig cfg;
    cfg.suite = "algebra";
    Report r1 = suites::run_suite(cfg);
    CHECK(r1.all_pass());
    CHECK(r1.checks.size() >= 6);
    Report r2 = suites::run_suite(cfg);
    CHECK(to_json(r1).dump() == to_json(r2).dump());
    // sorted check names for stable output
    for (size_t i = 1; i < r1.checks.size(); ++i) CHECK(r1.checks[i - 1].name <= r1.checks[i].name);
}

TEST_CASE("tolerance overrides flip a check") {
    suites::SuiteConfig cfg;
    cfg.suite = "algebra";
    cfg.tolerances["algebra.anticommutation"] = -1.0; // impossible tolerance
    Report r = suites::run_suite(cfg);
    bool found = false;
    for (const auto& c : r.checks)
        if (c.name == "algebra.anticommutation") {
            found = true;
            CHECK_FALSE(c.pass);
        }
    CHECK(found);
    CHECK_FALSE(r.all_pass());
}

TEST_CASE("field dumps") {
    SUBCASE("byte-stable surface dump with the analytic potential profile") {
        Chart sph = make_sphere(1.0, 16);
        std::ostringstream a, b;
        suites::emit_fields(sph, a);
        suites::emit_fields(sph, b);
        CHECK(a.str() == b.str());
        std::istringstream in(a.str());
        std::string header;
        std::getline(in, header);
        CHECK(header.rfind("i,j,s1,s2,x1,x2,x3,x4,g11,g12,g22,rho,p_re,p_im", 0) == 0);
        // parse a line and verify |p_c| = 1/(1+|s|^2) for the unit sphere
        std::string line;
        int checked = 0;
        while (std::getline(in, line) && checked < 32) {
            std::vector<double> cols;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
            REQUIRE(cols.size() == 23);
            const double s1 = cols[2], s2 = cols[3];
            const cx p(cols[12], cols[13]);
            CHECK(std::abs(std::abs(p) - 1.0 / (1.0 + s1 * s1 + s2 * s2)) < 1e-10);
            ++checked;
        }
        CHECK(checked > 0);
    }
    SUBCASE("torus dump has constant |f| = 1/sqrt(2)") {
        Chart torus = make_product_torus(1.0, 1.0, 16);
        std::ostringstream os;
        suites::emit_fields(torus, os);
        std::istringstream in(os.str());
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            std::vector<double> cols;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
            const cx f(cols[14], cols[15]);
            CHECK(std::abs(std::abs(f) - 1.0 / std::sqrt(2.0)) < 1e-12);
        }
    }
    SUBCASE("plane dump has an all-zero residual column") {
        Chart plane = make_plane(12);
        std::ostringstream os;
        suites::emit_fields(plane, os);
        std::istringstream in(os.str());
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            const auto pos = line.find_last_of(',');
            CHECK(std::stod(line.substr(pos + 1)) == 0.0);
        }
    }
    SUBCASE("curve dump carries metric and curvature trace columns") {
        Chart c = make_circle(2.0, 16);
        std::ostringstream os;
        suites::emit_fields(c, os);
        std::istringstream in(os.str());
        std::string header;
        std::getline(in, header);
        CHECK(header == "i,s1,x1,x2,g11,trace1\r");
        std::string line;
        std::getline(in, line);
        std::vector<double> cols;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
        REQUIRE(cols.size() == 6);
        CHECK(std::abs(cols[4] - 1.0) < 1e-12);              // arclength metric
        CHECK(std::abs(std::abs(cols[5]) - 0.5) < 1e-12);    // |trace| = 1/R
    }
}

TEST_CASE("matrix serialization is row-major (re, im) pairs") {
    auto rep = clifford::build_clifford(2);
    auto j = matrix_json(rep.gamma(2)); // sigma2
    CHECK(j[0][1][0].get<double>() == 0.0);
    CHECK(j[0][1][1].get<double>() == -1.0);
    CHECK(j[1][0][1].get<double>() == 1.0);
    CHECK(j[0][0][0].get<double>() == 0.0);
}

TEST_CASE("operator checks stamp kind, grid and step in the report") {
    suites::SuiteConfig cfg;
    cfg.suite = "weierstrass";
    cfg.grids = {8, 16};
    Report r = suites::run_suite(cfg);
    bool found = false;
    for (const auto& c : r.checks)
        if (c.name == "weier.zero_mode.product_torus") {
            found = true;
            CHECK(c.operator_kind == "surface_E4");
            CHECK(c.grid_sizes == std::vector<int>{8, 16});
            CHECK(c.h_values.size() == 2);
        }
    CHECK(found);
}
