#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace subdirac {

/// Outcome of one verification check. `value` is the residual (or deviation)
/// the check measured; order-style checks also carry the fitted slope and
/// its admissible band. pass reflects the declared rule exactly.
struct CheckRecord {
    std::string name;
    std::string ref;       // short tag for the check family
    double max_abs_residual = 0.0;
    double l2_residual = 0.0;
    std::optional<double> convergence_order;
    std::optional<double> order_min;
    std::optional<double> order_max;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
    // operator-style checks also stamp what they ran on
    std::string operator_kind;
    std::vector<int> grid_sizes;
    std::vector<double> h_values;
};

struct Report {
    std::string suite;
    std::string version = "0.1.0";
    unsigned seed = 0;
    std::vector<int> grids;
    std::string jet = "analytic";
    std::vector<CheckRecord> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
    }

    void sort_checks() {
        std::sort(checks.begin(), checks.end(),
                  [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    }
};

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["suite"] = r.suite;
    j["environment"] = {{"version", r.version}, {"seed", r.seed}, {"grids", r.grids}, {"jet", r.jet}};
    j["all_pass"] = r.all_pass();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["ref"] = c.ref;
        jc["max_abs_residual"] = c.max_abs_residual;
        jc["l2_residual"] = c.l2_residual;
        if (c.convergence_order) {
            jc["convergence_order"] = *c.convergence_order;
            jc["order_band"] = {*c.order_min, *c.order_max};
        }
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        if (!c.operator_kind.empty()) jc["operator_kind"] = c.operator_kind;
        if (!c.grid_sizes.empty()) jc["grid"] = c.grid_sizes;
        if (!c.h_values.empty()) jc["h"] = c.h_values;
        if (!c.note.empty()) jc["note"] = c.note;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    return j;
}

/// Row-major (re, im) pair serialization of a complex matrix.
template <class Mat>
nlohmann::ordered_json matrix_json(const Mat& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) {
            const cx v = m(i, j);
            row.push_back({v.real(), v.imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace subdirac
