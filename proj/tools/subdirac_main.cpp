#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "subdirac/suites.hpp"

namespace {

using namespace subdirac;

std::vector<int> parse_grids(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad grid size '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty grid list");
    return out;
}

int cmd_run(const std::string& suite, const std::string& config_path, const std::string& grids_csv,
            const std::string& jet, const std::string& out_path, bool strict, int seed) {
    suites::SuiteConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config parse: ") + e.what());
        }
        cfg = suites::config_from_json(j);
    }
    // flags override config which overrides defaults
    if (!suite.empty()) cfg.suite = suite;
    if (!grids_csv.empty()) cfg.grids = parse_grids(grids_csv);
    if (!jet.empty()) cfg.jet = jet;
    if (!out_path.empty()) cfg.output = out_path;
    if (strict) cfg.strict = true;
    if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);

    Report rep = suites::run_suite(cfg);
    for (const auto& c : rep.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (c.convergence_order)
            std::cout << "  order=" << *c.convergence_order << " residual=" << c.max_abs_residual;
        else
            std::cout << "  residual=" << c.max_abs_residual << " tol=" << c.tolerance;
        std::cout << "\n";
    }
    std::cout << (rep.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << " ("
              << rep.checks.size() << " checks)\n";
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (!out) throw IoError("cannot write report to '" + cfg.output + "'");
        out << to_json(rep).dump(2) << "\n";
    } else {
        std::cout << to_json(rep).dump(2) << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

int cmd_dump(const std::string& shape, int grid, const std::string& jet, const std::string& out_path) {
    if (grid < 8) throw ConfigError("grid sizes must be >= 8");
    Chart c = make_shape(shape, {}, grid, jet != "finite_difference");
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write fields to '" + out_path + "'");
    suites::emit_fields(c, out);
    if (!out) throw IoError("write failure on '" + out_path + "'");
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"submanifold Dirac operator verification suite"};
    app.require_subcommand(1);

    std::string suite, config_path, grids_csv, jet, out_path, shape = "sphere";
    bool strict = false;
    int seed = -1;
    int grid = 64;

    auto* run = app.add_subcommand("run", "run a verification suite");
    run->add_option("--suite", suite, "algebra | geometry | dirac | weierstrass | all");
    run->add_option("--config", config_path, "JSON config file");
    run->add_option("--grids", grids_csv, "comma-separated grid sizes, e.g. 16,32,64");
    run->add_option("--jet", jet, "analytic | finite_difference");
    run->add_option("--out", out_path, "report output path (JSON)");
    run->add_flag("--strict", strict, "escalate accuracy warnings to errors");
    run->add_option("--seed", seed, "seed for randomized checks");

    auto* dump = app.add_subcommand("dump", "dump per-sample fields as CSV");
    dump->add_option("--shape", shape, "catalog shape name")->required();
    dump->add_option("--grid", grid, "samples per axis");
    dump->add_option("--jet", jet, "analytic | finite_difference");
    dump->add_option("--out", out_path, "CSV output path")->required();

    auto* ls = app.add_subcommand("list-shapes", "list catalog shapes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ls->parsed()) {
            for (const auto& n : subdirac::catalog_names()) std::cout << n << "\n";
            return 0;
        }
        if (run->parsed()) return cmd_run(suite, config_path, grids_csv, jet, out_path, strict, seed);
        if (dump->parsed()) return cmd_dump(shape, grid, jet, out_path);
    } catch (const subdirac::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const subdirac::CatalogError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const subdirac::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const subdirac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
