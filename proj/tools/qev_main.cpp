#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qev/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"quasi-Einstein identity checker"};

    std::string spec_path, out_path, svg_path, format = "json";
    int grid = 0;
    std::vector<std::string> tol_args;
    bool list_checks = false, timings = false;

    app.add_option("spec", spec_path, "spec file (sectioned key = value)");
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--grid", grid, "override nodes per axis");
    app.add_option("--tol", tol_args, "tolerance override NAME=VALUE, repeatable");
    app.add_option("--svg", svg_path, "write a residual profile plot here");
    app.add_flag("--list-checks", list_checks, "list registered checks and exit");
    app.add_flag("--timings", timings, "include per-check wall clock in the JSON");

    CLI11_PARSE(app, argc, argv);

    if (list_checks) {
        for (const auto& name : qev::registered_checks()) std::cout << name << "\n";
        return 0;
    }
    if (spec_path.empty()) {
        std::cerr << "error: spec file required (or --list-checks)\n";
        return 2;
    }

    qev::RunOptions opt;
    opt.timings = timings;
    if (grid > 0) opt.grid_override = grid;
    for (const auto& t : tol_args) {
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --tol expects NAME=VALUE, got '" << t << "'\n";
            return 2;
        }
        try {
            opt.tol_overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            std::cerr << "error: bad --tol value '" << t << "'\n";
            return 2;
        }
    }

    qev::RunReport report;
    try {
        qev::SpecFile spec = qev::SpecFile::load(spec_path);
        report = qev::run_spec(spec, opt);
    } catch (const qev::SpecError& e) {
        std::cerr << "error";
        if (!e.section.empty()) std::cerr << " [" << e.section << "]";
        if (e.line > 0) std::cerr << " line " << e.line;
        std::cerr << ": " << e.message << "\n";
        return 2;
    } catch (const qev::SolverError& e) {
        std::cerr << "solver error: " << e.message << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::string doc =
        format == "csv" ? qev::emit_csv(report) : qev::emit_json(report, timings);
    if (out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 2;
        }
        out << doc;
    }
    if (!svg_path.empty()) {
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) {
            std::cerr << "error: cannot write " << svg_path << "\n";
            return 2;
        }
        svg << qev::emit_svg(report);
    }
    return report.passed() ? 0 : 1;
}
