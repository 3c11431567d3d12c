#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "grid.hpp"
#include "linalg.hpp"

namespace subdirac {

/// Analytic jet of a parametric immersion: position with first and second
/// derivatives at a parameter point.
struct Jet {
    RVec x;
    std::array<RVec, 2> d1;     // d1[alpha], alpha < k
    std::array<RVec, 3> d2;     // k=1: {d00}; k=2: {d00, d01, d11}
};

/// Sampled parametric immersion on a rectangular grid. When `analytic_jet`
/// is set the jet fields hold exact derivatives; otherwise consumers fall
/// back to finite differences of the samples.
struct Chart {
    std::string name;
    int k = 1;
    int n = 2;
    Grid grid;
    Field<RVec> x;
    bool analytic_jet = false;
    std::array<Field<RVec>, 2> jet1;
    std::array<Field<RVec>, 3> jet2;

    int codim() const { return n - k; }
    int d2_count() const { return k == 1 ? 1 : 3; }
    static int d2_slot(int a, int b) { return a + b; } // (0,0)->0 (0,1)->1 (1,1)->2
};

namespace detail {

inline Chart sample_chart(std::string name, int k, int n, const Grid& grid,
                          const std::function<Jet(double, double)>& gen, bool analytic) {
    Chart c;
    c.name = std::move(name);
    c.k = k;
    c.n = n;
    c.grid = grid;
    c.x = Field<RVec>(grid);
    c.analytic_jet = analytic;
    if (analytic) {
        for (int a = 0; a < k; ++a) c.jet1[static_cast<size_t>(a)] = Field<RVec>(grid);
        for (int s = 0; s < c.d2_count(); ++s) c.jet2[static_cast<size_t>(s)] = Field<RVec>(grid);
    }
    const int n0 = grid.size(0);
    const int n1 = grid.dim == 2 ? grid.size(1) : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const double u = grid.coord(0, i);
            const double v = grid.dim == 2 ? grid.coord(1, j) : 0.0;
            Jet jet = gen(u, v);
            c.x.at(i, j) = jet.x;
            if (analytic) {
                for (int a = 0; a < k; ++a) c.jet1[static_cast<size_t>(a)].at(i, j) = jet.d1[static_cast<size_t>(a)];
                for (int s = 0; s < c.d2_count(); ++s) c.jet2[static_cast<size_t>(s)].at(i, j) = jet.d2[static_cast<size_t>(s)];
            }
        }
    // periodic axes must wrap exactly onto the first sample
    for (int axis = 0; axis < grid.dim; ++axis) {
        if (!grid.periodic(axis)) continue;
        const double u = axis == 0 ? grid.coord(0, grid.size(0)) : grid.coord(0, 0);
        const double v = grid.dim == 2 ? (axis == 1 ? grid.coord(1, grid.size(1)) : grid.coord(1, 0)) : 0.0;
        const RVec wrapped = gen(u, v).x;
        const RVec& first = c.x.at(0, 0);
        double err = 0.0;
        for (size_t d = 0; d < first.size(); ++d) err = std::max(err, std::abs(wrapped[d] - first[d]));
        if (err > 1e-10)
            throw CatalogError("chart '" + c.name + "' does not wrap on periodic axis " +
                               std::to_string(axis));
    }
    return c;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Shape catalog
// ---------------------------------------------------------------------------

inline Chart make_circle(double R, int N, bool analytic = true) {
    if (R <= 0.0) throw CatalogError("circle: radius must be positive");
    const double period = 2.0 * kPi * R;
    Grid g = Grid::line(N, 0.0, period / N, true);
    auto gen = [R](double s, double) {
        Jet j;
        const double t = s / R;
        j.x = {R * std::cos(t), R * std::sin(t)};
        j.d1[0] = {-std::sin(t), std::cos(t)};
        j.d2[0] = {-std::cos(t) / R, -std::sin(t) / R};
        return j;
    };
    return detail::sample_chart("circle", 1, 2, g, gen, analytic);
}

/// Arclength-parameterized helix of radius R and pitch parameter c over two
/// turns.
inline Chart make_helix(double R, double c, int N, bool analytic = true) {
    if (R <= 0.0) throw CatalogError("helix: radius must be positive");
    const double w = 1.0 / std::sqrt(R * R + c * c);
    const double length = 2.0 * (2.0 * kPi) / w;
    Grid g = Grid::line(N, 0.0, length / (N - 1), false);
    auto gen = [R, c, w](double s, double) {
        Jet j;
        const double t = w * s;
        j.x = {R * std::cos(t), R * std::sin(t), c * t};
        j.d1[0] = {-R * w * std::sin(t), R * w * std::cos(t), c * w};
        j.d2[0] = {-R * w * w * std::cos(t), -R * w * w * std::sin(t), 0.0};
        return j;
    };
    return detail::sample_chart("helix", 1, 3, g, gen, analytic);
}

inline Chart make_plane(int N, double extent = 1.0, bool analytic = true) {
    Grid g = Grid::rect(N, -extent, 2.0 * extent / (N - 1), false, N, -extent, 2.0 * extent / (N - 1), false);
    auto gen = [](double u, double v) {
        Jet j;
        j.x = {u, v, 0.0};
        j.d1[0] = {1.0, 0.0, 0.0};
        j.d1[1] = {0.0, 1.0, 0.0};
        j.d2[0] = j.d2[1] = j.d2[2] = {0.0, 0.0, 0.0};
        return j;
    };
    return detail::sample_chart("plane", 2, 3, g, gen, analytic);
}

/// Stereographic chart of the radius-R sphere.
inline Chart make_sphere(double R, int N, double extent = 1.2, bool analytic = true) {
    if (R <= 0.0) throw CatalogError("sphere: radius must be positive");
    Grid g = Grid::rect(N, -extent, 2.0 * extent / (N - 1), false, N, -extent, 2.0 * extent / (N - 1), false);
    auto gen = [R](double u, double v) {
        Jet j;
        const double r2 = u * u + v * v;
        const double d = 1.0 + r2;
        const double d2 = d * d;
        const double d3 = d2 * d;
        j.x = {2.0 * R * u / d, 2.0 * R * v / d, R * (r2 - 1.0) / d};
        j.d1[0] = {2.0 * R * (d - 2.0 * u * u) / d2, -4.0 * R * u * v / d2, 4.0 * R * u / d2};
        j.d1[1] = {-4.0 * R * u * v / d2, 2.0 * R * (d - 2.0 * v * v) / d2, 4.0 * R * v / d2};
        const double x1_uu = 2.0 * R * (-6.0 * u * d + 8.0 * u * u * u) / d3;
        const double x1_uv = 2.0 * R * (-2.0 * v * d + 8.0 * u * u * v) / d3;
        const double x1_vv = 2.0 * R * (-2.0 * u * d + 8.0 * u * v * v) / d3;
        const double x2_uu = 2.0 * R * (-2.0 * v * d + 8.0 * v * u * u) / d3;
        const double x2_uv = 2.0 * R * (-2.0 * u * d + 8.0 * v * v * u) / d3;
        const double x2_vv = 2.0 * R * (-6.0 * v * d + 8.0 * v * v * v) / d3;
        const double x3_uu = 4.0 * R * (d - 4.0 * u * u) / d3;
        const double x3_uv = -16.0 * R * u * v / d3;
        const double x3_vv = 4.0 * R * (d - 4.0 * v * v) / d3;
        j.d2[0] = {x1_uu, x2_uu, x3_uu};
        j.d2[1] = {x1_uv, x2_uv, x3_uv};
        j.d2[2] = {x1_vv, x2_vv, x3_vv};
        return j;
    };
    return detail::sample_chart("sphere", 2, 3, g, gen, analytic);
}

/// Conformally parameterized catenoid with waist parameter a; periodic in u.
inline Chart make_catenoid(double a, int N, double vmax = 1.0, bool analytic = true) {
    if (a <= 0.0) throw CatalogError("catenoid: parameter must be positive");
    Grid g = Grid::rect(N, 0.0, 2.0 * kPi / N, true, N, -vmax, 2.0 * vmax / (N - 1), false);
    auto gen = [a](double u, double v) {
        Jet j;
        const double ch = std::cosh(v), sh = std::sinh(v);
        const double cu = std::cos(u), su = std::sin(u);
        j.x = {a * ch * cu, a * ch * su, a * v};
        j.d1[0] = {-a * ch * su, a * ch * cu, 0.0};
        j.d1[1] = {a * sh * cu, a * sh * su, a};
        j.d2[0] = {-a * ch * cu, -a * ch * su, 0.0};
        j.d2[1] = {-a * sh * su, a * sh * cu, 0.0};
        j.d2[2] = {a * ch * cu, a * ch * su, 0.0};
        return j;
    };
    return detail::sample_chart("catenoid", 2, 3, g, gen, analytic);
}

/// Enneper surface on a centered square chart.
inline Chart make_enneper(int N, double extent = 1.0, bool analytic = true) {
    Grid g = Grid::rect(N, -extent, 2.0 * extent / (N - 1), false, N, -extent, 2.0 * extent / (N - 1), false);
    auto gen = [](double u, double v) {
        Jet j;
        j.x = {u - u * u * u / 3.0 + u * v * v, -v - u * u * v + v * v * v / 3.0, u * u - v * v};
        j.d1[0] = {1.0 - u * u + v * v, -2.0 * u * v, 2.0 * u};
        j.d1[1] = {2.0 * u * v, -1.0 - u * u + v * v, -2.0 * v};
        j.d2[0] = {-2.0 * u, -2.0 * v, 2.0};
        j.d2[1] = {2.0 * v, -2.0 * u, 0.0};
        j.d2[2] = {2.0 * u, 2.0 * v, -2.0};
        return j;
    };
    return detail::sample_chart("enneper", 2, 3, g, gen, analytic);
}

/// Product of two circles in four-space; conformal when r1 == r2.
inline Chart make_product_torus(double r1, double r2, int N, bool analytic = true) {
    if (r1 <= 0.0 || r2 <= 0.0) throw CatalogError("product_torus: radii must be positive");
    Grid g = Grid::rect(N, 0.0, 2.0 * kPi / N, true, N, 0.0, 2.0 * kPi / N, true);
    auto gen = [r1, r2](double u, double v) {
        Jet j;
        j.x = {r1 * std::cos(u), r1 * std::sin(u), r2 * std::cos(v), r2 * std::sin(v)};
        j.d1[0] = {-r1 * std::sin(u), r1 * std::cos(u), 0.0, 0.0};
        j.d1[1] = {0.0, 0.0, -r2 * std::sin(v), r2 * std::cos(v)};
        j.d2[0] = {-r1 * std::cos(u), -r1 * std::sin(u), 0.0, 0.0};
        j.d2[1] = {0.0, 0.0, 0.0, 0.0};
        j.d2[2] = {0.0, 0.0, -r2 * std::cos(v), -r2 * std::sin(v)};
        return j;
    };
    return detail::sample_chart("product_torus", 2, 4, g, gen, analytic);
}

/// Graph surfaces z = F(u, v) over a centered square, for a small expression
/// set: "paraboloid" a(u^2+v^2)/2, "saddle" a(u^2-v^2)/2, "sinsin" a sin u sin v.
inline Chart make_graph(const std::string& fname, double a, int N, double extent = 1.0,
                        bool analytic = true) {
    std::function<std::array<double, 6>(double, double)> F; // f, fu, fv, fuu, fuv, fvv
    if (fname == "paraboloid") {
        F = [a](double u, double v) {
            return std::array<double, 6>{0.5 * a * (u * u + v * v), a * u, a * v, a, 0.0, a};
        };
    } else if (fname == "saddle") {
        F = [a](double u, double v) {
            return std::array<double, 6>{0.5 * a * (u * u - v * v), a * u, -a * v, a, 0.0, -a};
        };
    } else if (fname == "sinsin") {
        F = [a](double u, double v) {
            const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
            return std::array<double, 6>{a * su * sv, a * cu * sv, a * su * cv,
                                         -a * su * sv, a * cu * cv, -a * su * sv};
        };
    } else {
        throw CatalogError("graph: unknown expression '" + fname + "'");
    }
    Grid g = Grid::rect(N, -extent, 2.0 * extent / (N - 1), false, N, -extent, 2.0 * extent / (N - 1), false);
    auto gen = [F](double u, double v) {
        Jet j;
        const auto f = F(u, v);
        j.x = {u, v, f[0]};
        j.d1[0] = {1.0, 0.0, f[1]};
        j.d1[1] = {0.0, 1.0, f[2]};
        j.d2[0] = {0.0, 0.0, f[3]};
        j.d2[1] = {0.0, 0.0, f[4]};
        j.d2[2] = {0.0, 0.0, f[5]};
        return j;
    };
    return detail::sample_chart("graph_" + fname, 2, 3, g, gen, analytic);
}

/// Uniform rescaling x -> lambda x of an existing chart.
inline Chart scale_chart(Chart c, double lambda) {
    auto scale_field = [lambda](Field<RVec>& f) {
        for (auto& v : f.data)
            for (auto& x : v) x *= lambda;
    };
    scale_field(c.x);
    if (c.analytic_jet) {
        for (int a = 0; a < c.k; ++a) scale_field(c.jet1[static_cast<size_t>(a)]);
        for (int s = 0; s < c.d2_count(); ++s) scale_field(c.jet2[static_cast<size_t>(s)]);
    }
    c.name += "_scaled";
    return c;
}

/// Embeds a surface chart in E^3 as an E^4 chart with constant last
/// coordinate.
inline Chart embed_in_E4(const Chart& c) {
    if (c.n != 3) throw DimensionError("embed_in_E4 expects an E^3 chart");
    Chart out = c;
    out.n = 4;
    auto pad = [](Field<RVec>& f) {
        for (auto& v : f.data) v.push_back(0.0);
    };
    pad(out.x);
    if (out.analytic_jet) {
        for (int a = 0; a < out.k; ++a) pad(out.jet1[static_cast<size_t>(a)]);
        for (int s = 0; s < out.d2_count(); ++s) pad(out.jet2[static_cast<size_t>(s)]);
    }
    return out;
}

/// Catalog entry point shared by the command-line interface and the suites.
/// Parameters not used by a shape are ignored.
inline Chart make_shape(const std::string& name, const std::map<std::string, double>& params,
                        int N, bool analytic = true) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "plane") return make_plane(N, get("extent", 1.0), analytic);
    if (name == "circle") return make_circle(get("R", 1.0), N, analytic);
    if (name == "helix") return make_helix(get("R", 1.0), get("c", 0.25), N, analytic);
    if (name == "sphere") return make_sphere(get("R", 1.0), N, get("extent", 1.2), analytic);
    if (name == "catenoid") return make_catenoid(get("a", 1.0), N, get("vmax", 1.0), analytic);
    if (name == "enneper") return make_enneper(N, get("extent", 1.0), analytic);
    if (name == "product_torus")
        return make_product_torus(get("r1", 1.0), get("r2", 1.0), N, analytic);
    if (name.rfind("graph:", 0) == 0)
        return make_graph(name.substr(6), get("a", 0.5), N, get("extent", 1.0), analytic);
    throw CatalogError("unknown shape '" + name + "'");
}

inline std::vector<std::string> catalog_names() {
    return {"plane", "circle", "helix", "sphere", "catenoid", "enneper",
            "product_torus", "graph:paraboloid", "graph:saddle", "graph:sinsin"};
}

} // namespace subdirac
