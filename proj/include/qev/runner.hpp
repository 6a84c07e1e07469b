#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qev/report.hpp"

namespace qev {

// Sectioned key = value spec file.  Lines starting with '#' or ';' are
// comments; section order and key order within a section are preserved.
struct SpecFile {
    struct KV {
        std::string key, value;
        int line = 0;
    };
    struct Section {
        std::string name;
        int line = 0;
        std::vector<KV> items;
    };
    std::vector<Section> sections;
    std::string text;  // raw bytes, hashed into the report

    const Section* find(const std::string& name) const;
    static SpecFile parse(const std::string& text);
    static SpecFile load(const std::string& path);
};

// Input/parse problems carry the spec location; reported as exit code 2.
struct SpecError {
    std::string message;
    std::string section;
    int line = 0;
};

// Solver failed to converge; exit code 3.
struct SolverError {
    std::string message;
};

struct RunOptions {
    std::optional<int> grid_override;
    std::map<std::string, double> tol_overrides;  // Tolerances field name -> value
    bool timings = false;
};

struct RunReport {
    std::string version;
    std::string spec_hash;  // FNV-1a 64 of the spec bytes, hex
    std::vector<IdentityReport> checks;
    std::vector<double> seconds;  // parallel to checks, emitted only with timings
    bool passed() const {
        for (const auto& r : checks)
            if (!r.passed()) return false;
        return true;
    }
};

std::vector<std::string> registered_checks();

RunReport run_spec(const SpecFile& spec, const RunOptions& opt = {});

std::string emit_json(const RunReport& report, bool timings = false);
std::string emit_csv(const RunReport& report);
std::string emit_svg(const RunReport& report);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace qev
