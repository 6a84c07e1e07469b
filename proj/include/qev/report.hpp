#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace qev {

// One named residual with its paper equation tag and verdict.
struct CheckEntry {
    std::string check;
    std::string paper_tag;
    double linf = std::numeric_limits<double>::quiet_NaN();
    double l2 = std::numeric_limits<double>::quiet_NaN();
    double lhs = std::numeric_limits<double>::quiet_NaN();
    double rhs = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    std::string verdict;  // pass | fail | skipped | inapplicable
    std::string note;

    static CheckEntry residual(std::string check, std::string tag, double linf, double tol,
                               std::string note = {}) {
        CheckEntry e;
        e.check = std::move(check);
        e.paper_tag = std::move(tag);
        e.linf = linf;
        e.tolerance = tol;
        e.verdict = linf <= tol ? "pass" : "fail";
        e.note = std::move(note);
        return e;
    }
    static CheckEntry balance(std::string check, std::string tag, double lhs, double rhs,
                              double tol, std::string note = {}) {
        CheckEntry e;
        e.check = std::move(check);
        e.paper_tag = std::move(tag);
        e.lhs = lhs;
        e.rhs = rhs;
        e.tolerance = tol;
        double d = lhs - rhs;
        e.linf = d < 0 ? -d : d;
        e.verdict = e.linf <= tol ? "pass" : "fail";
        e.note = std::move(note);
        return e;
    }
    static CheckEntry skipped(std::string check, std::string tag, std::string why) {
        CheckEntry e;
        e.check = std::move(check);
        e.paper_tag = std::move(tag);
        e.verdict = "skipped";
        e.note = std::move(why);
        return e;
    }

    bool failed() const { return verdict == "fail" || verdict == "inapplicable"; }
};

struct IdentityReport {
    std::string name;
    std::vector<CheckEntry> entries;
    std::map<std::string, double> scalars;  // derived values (c, sd(R), norms, ...)

    void add(CheckEntry e) { entries.push_back(std::move(e)); }
    bool passed() const {
        for (const auto& e : entries)
            if (e.failed()) return false;
        return true;
    }
    const CheckEntry* find(const std::string& check) const {
        for (const auto& e : entries)
            if (e.check == check) return &e;
        return nullptr;
    }
};

}  // namespace qev
