#include "qev/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qev/algebra.hpp"
#include "qev/expr.hpp"
#include "qev/qe.hpp"
#include "qev/zoo.hpp"

namespace qev {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& value, const std::string& section, int line) {
    try {
        return parse(value)->eval({});
    } catch (const std::exception& e) {
        throw SpecError{"bad numeric value '" + value + "': " + e.what(), section, line};
    }
}

struct SectionView {
    const SpecFile::Section* sec = nullptr;

    bool has(const std::string& key) const { return find(key) != nullptr; }
    const SpecFile::KV* find(const std::string& key) const {
        if (!sec) return nullptr;
        for (const auto& kv : sec->items)
            if (kv.key == key) return &kv;
        return nullptr;
    }
    std::string get(const std::string& key, const std::string& fallback = {}) const {
        const auto* kv = find(key);
        return kv ? kv->value : fallback;
    }
    double number(const std::string& key, double fallback) const {
        const auto* kv = find(key);
        if (!kv) return fallback;
        return parse_number(kv->value, sec->name, kv->line);
    }
    double require_number(const std::string& key) const {
        const auto* kv = find(key);
        if (!kv)
            throw SpecError{"missing required key '" + key + "'", sec ? sec->name : "",
                            sec ? sec->line : 0};
        return parse_number(kv->value, sec->name, kv->line);
    }
};

void apply_tolerance(Tolerances& tol, const std::string& name, double value,
                     const std::string& section, int line) {
    if (name == "solution")
        tol.solution = value;
    else if (name == "constant")
        tol.constant = value;
    else if (name == "identity")
        tol.identity = value;
    else if (name == "algebraic")
        tol.algebraic = value;
    else if (name == "integral")
        tol.integral = value;
    else if (name == "section3")
        tol.section3 = value;
    else if (name == "div_k")
        tol.div_k = value;
    else if (name == "eigen")
        tol.eigen = value;
    else
        throw SpecError{"unknown tolerance '" + name + "'", section, line};
}

IdentityReport energy_report(const EnergyIdentity& en, const Tolerances& tol) {
    IdentityReport rep;
    rep.name = "lie_div_energy";
    double scale = std::max(1.0, std::fabs(en.rhs));
    rep.add(CheckEntry::balance("eq313_energy", "3.13", en.lhs, en.rhs, tol.integral * scale,
                                "int div(L_K g)(K) dV vs -1/2 int |L_K g|^2 dV"));
    rep.scalars["lhs"] = en.lhs;
    rep.scalars["rhs"] = en.rhs;
    return rep;
}

// Grid-path run state shared by the checks.
struct GridRun {
    Constructed mf;
    std::unique_ptr<CurvaturePackage> curv;
    std::unique_ptr<VectorField> X;
    double m = 0.0, lambda = 0.0;
    std::unique_ptr<ScalarField> gamma;
    std::unique_ptr<KillingCandidate> kc;
    GammaSolveResult gsolve;
    bool gamma_solved = false;
};

IdentityReport dispatch_grid(GridRun& st, const std::string& name, const Tolerances& tol) {
    QEInput in(*st.mf.metric, *st.curv, *st.X, st.m, st.lambda);
    if (name == "qe_residual") return qe_residual(in, tol).report;
    if (name == "lemma21") return lemma21_check(*st.mf.metric, *st.curv, *st.X, tol);
    if (name == "section2") return section2_suite(in, tol);
    if (name == "theorem11") return theorem11_check(in, tol);
    if (name == "section3") {
        IdentityReport rep = section3_suite(in, *st.gamma, *st.kc, tol);
        if (st.gamma_solved) {
            rep.scalars["gamma_mu"] = st.gsolve.mu;
            rep.scalars["gamma_min"] = st.gsolve.min_gamma;
        }
        return rep;
    }
    if (name == "lie_div_energy")
        return energy_report(lie_div_energy(*st.mf.metric, *st.curv, st.kc->K), tol);
    if (name == "killing_integral") return killing_integral_condition(in, *st.gamma, *st.kc, tol);
    if (name == "structure") return structure_checks(in, tol);
    throw SpecError{"unknown check '" + name + "'", "checks", 0};
}

IdentityReport dispatch_analytic(const AnalyticSolution& s, double gamma_const,
                                 const std::string& name, const Tolerances& tol) {
    if (name == "qe_residual") return qe_residual(s, tol);
    if (name == "lemma21") return lemma21_check(s, tol);
    if (name == "section2") return section2_suite(s, tol);
    if (name == "theorem11") return theorem11_check(s, tol);
    if (name == "section3") return section3_suite(s, gamma_const, tol);
    if (name == "lie_div_energy") return energy_report(lie_div_energy(s, gamma_const), tol);
    if (name == "killing_integral") return killing_integral_condition(s, gamma_const, tol);
    if (name == "structure") return structure_checks(s, tol);
    throw SpecError{"unknown check '" + name + "'", "checks", 0};
}

LieAlgebraModel algebra_from_section(const SectionView& alg) {
    std::string preset = alg.get("preset");
    LieAlgebraModel L;
    if (preset == "su2") {
        L = LieAlgebraModel::su2(alg.number("a", 1.0), alg.number("b", 1.0),
                                 alg.number("c", 1.0));
    } else if (preset == "abelian") {
        L = LieAlgebraModel::abelian(static_cast<int>(alg.number("d", 3.0)));
    } else if (preset.empty()) {
        int d = static_cast<int>(alg.require_number("d"));
        if (d < 1 || d > 4) throw SpecError{"d must be in 1..4", alg.sec->name, alg.sec->line};
        L = LieAlgebraModel::abelian(d);
        for (const auto& kv : alg.sec->items) {
            // c<k>_<i>_<j> = value sets c^k_ij (1-based), antisymmetric fill
            if (kv.key.size() >= 6 && kv.key[0] == 'c' && kv.key[2] == '_' && kv.key[4] == '_') {
                int k = kv.key[1] - '1', i = kv.key[3] - '1', j = kv.key[5] - '1';
                if (k < 0 || k >= d || i < 0 || i >= d || j < 0 || j >= d)
                    throw SpecError{"structure index out of range in '" + kv.key + "'",
                                    alg.sec->name, kv.line};
                double v = parse_number(kv.value, alg.sec->name, kv.line);
                L.structure(k, i, j) = v;
                L.structure(k, j, i) = -v;
            } else if (kv.key.size() >= 4 && kv.key[0] == 'q' && kv.key[2] == '_') {
                int i = kv.key[1] - '1', j = kv.key[3] - '1';
                if (i < 0 || i >= d || j < 0 || j >= d)
                    throw SpecError{"metric index out of range in '" + kv.key + "'",
                                    alg.sec->name, kv.line};
                double v = parse_number(kv.value, alg.sec->name, kv.line);
                L.Q(i, j) = v;
                L.Q(j, i) = v;
            }
        }
    } else {
        throw SpecError{"unknown algebra preset '" + preset + "'", alg.sec->name, alg.sec->line};
    }
    try {
        L.validate();
    } catch (const std::exception& e) {
        throw SpecError{e.what(), alg.sec->name, alg.sec->line};
    }
    return L;
}

IdentityReport run_algebra(const LieAlgebraModel& L, double m) {
    AlgebraCurvature C = algebra_curvature(L);
    std::vector<AlgebraSolution> sols = qe_solve(L, m);
    IdentityReport rep;
    rep.name = "qe_solve";
    rep.scalars["scalar_curvature"] = C.R;
    rep.scalars["solutions"] = static_cast<double>(sols.size());
    for (std::size_t s = 0; s < sols.size(); ++s) {
        std::string id = "solution_" + std::to_string(s);
        rep.add(CheckEntry::residual(id + "_residual", "1.1", sols[s].residual, 1e-10));
        rep.add(CheckEntry::residual(id + "_killing", "T1.1", sols[s].killing_norm, 1e-8,
                                     "homogeneous solutions have Killing X"));
        rep.scalars[id + "_lambda"] = sols[s].lambda;
        for (int i = 0; i < L.d; ++i)
            rep.scalars[id + "_x" + std::to_string(i + 1)] = sols[s].X(i);
    }
    if (sols.empty())
        rep.add(CheckEntry::residual("no_solutions", "1.1", 0.0, 1.0, "empty solution set"));
    return rep;
}

std::string fmt(double v) {
    if (std::isnan(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const SpecFile::Section* SpecFile::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

SpecFile SpecFile::parse(const std::string& text) {
    SpecFile spec;
    spec.text = text;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    Section* current = nullptr;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SpecError{"unterminated section header", line, lineno};
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw SpecError{"empty section name", "", lineno};
            if (spec.find(name)) throw SpecError{"duplicate section", name, lineno};
            spec.sections.push_back({name, lineno, {}});
            current = &spec.sections.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SpecError{"expected key = value", current ? current->name : "", lineno};
        if (!current) throw SpecError{"key outside any section", "", lineno};
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw SpecError{"empty key", current->name, lineno};
        current->items.push_back({key, value, lineno});
    }
    return spec;
}

SpecFile SpecFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError{"cannot open spec file: " + path, "", 0};
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<std::string> registered_checks() {
    return {"qe_residual", "lemma21",        "section2",         "theorem11",
            "section3",    "lie_div_energy", "killing_integral", "structure"};
}

RunReport run_spec(const SpecFile& spec, const RunOptions& opt) {
    const SpecFile::Section* mf_sec = spec.find("manifold");
    const SpecFile::Section* alg_sec = spec.find("algebra");
    if ((mf_sec == nullptr) == (alg_sec == nullptr))
        throw SpecError{"spec needs exactly one of [manifold] or [algebra]", "", 0};

    SectionView params{spec.find("params")};
    SectionView checks_sec{spec.find("checks")};
    SectionView grid_sec{spec.find("grid")};
    SectionView field_sec{spec.find("field")};

    Tolerances tol;
    if (checks_sec.sec)
        for (const auto& kv : checks_sec.sec->items)
            if (kv.key != "run")
                apply_tolerance(tol, kv.key, parse_number(kv.value, "checks", kv.line), "checks",
                                kv.line);
    for (const auto& [name, value] : opt.tol_overrides) apply_tolerance(tol, name, value, "", 0);

    RunReport report;
    report.version = kVersion;
    report.spec_hash = fnv1a_hex(spec.text);

    auto timed = [&](auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        report.checks.push_back(fn());
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        report.seconds.push_back(dt.count());
    };

    if (alg_sec) {
        LieAlgebraModel L = algebra_from_section(SectionView{alg_sec});
        double m = params.require_number("m");
        if (m == 0.0) throw SpecError{"m must be nonzero", "params", 0};
        timed([&] { return run_algebra(L, m); });
        return report;
    }

    SectionView mf{mf_sec};
    GeneratorSpec gen;
    gen.name = mf.get("generator");
    if (gen.name.empty()) throw SpecError{"missing 'generator'", "manifold", mf_sec->line};
    for (const auto& kv : mf.sec->items) {
        if (kv.key == "generator") continue;
        if (kv.key == "dim") {
            gen.dim = static_cast<int>(parse_number(kv.value, "manifold", kv.line));
        } else if (kv.key == "metric") {
            gen.metric_expr = split_list(kv.value, ';');
        } else {
            gen.params[kv.key] = parse_number(kv.value, "manifold", kv.line);
        }
    }
    if (grid_sec.sec) gen.grid_n = static_cast<int>(grid_sec.require_number("n"));
    if (opt.grid_override) gen.grid_n = *opt.grid_override;

    GridRun st;
    try {
        st.mf = construct(gen);
    } catch (const std::exception& e) {
        throw SpecError{e.what(), "manifold", mf_sec->line};
    }

    st.m = st.mf.m ? *st.mf.m : 0.0;
    st.lambda = st.mf.lambda ? *st.mf.lambda : 0.0;
    if (params.has("m")) st.m = params.require_number("m");
    if (params.has("lambda")) st.lambda = params.require_number("lambda");
    if (st.m == 0.0) throw SpecError{"m missing or zero", "params", 0};

    std::vector<std::string> check_names = registered_checks();
    check_names.pop_back();  // structure is opt-in
    if (checks_sec.has("run")) check_names = split_list(checks_sec.get("run"));

    if (st.mf.analytic) {
        AnalyticSolution sol;
        sol.manifold = st.mf.amanifold;
        sol.X = st.mf.aX;
        if (sol.X.empty())
            sol.X.assign(sol.manifold->size(), Eigen::VectorXd::Zero(sol.manifold->n));
        sol.m = st.m;
        sol.lambda = st.lambda;
        double gamma_const = 1.0;
        std::string gspec = params.get("gamma");
        if (!gspec.empty() && gspec != "solve") gamma_const = params.require_number("gamma");
        for (const auto& name : check_names)
            timed([&] { return dispatch_analytic(sol, gamma_const, name, tol); });
        return report;
    }

    // grid path
    st.curv = std::make_unique<CurvaturePackage>(curvature_package(*st.mf.metric));
    if (field_sec.sec) {
        int n = st.mf.chart->dim();
        std::vector<std::string> comps(n);
        Bindings b;
        for (const auto& [k, v] : gen.params) b[k] = v;
        for (int i = 0; i < n; ++i) {
            const auto* kv = field_sec.find("x" + std::to_string(i + 1));
            comps[i] = kv ? kv->value : "0";
        }
        try {
            st.X = std::make_unique<VectorField>(
                vector_from_expressions(comps, st.mf.chart, b));
        } catch (const std::exception& e) {
            throw SpecError{e.what(), "field", field_sec.sec->line};
        }
    } else if (st.mf.X) {
        st.X = std::make_unique<VectorField>(*st.mf.X);
    } else {
        VectorField zero;
        zero.chart = st.mf.chart;
        for (int i = 0; i < st.mf.chart->dim(); ++i)
            zero.comp.push_back(std::vector<double>(st.mf.chart->size(), 0.0));
        st.X = std::make_unique<VectorField>(std::move(zero));
    }

    QEInput in(*st.mf.metric, *st.curv, *st.X, st.m, st.lambda);
    std::string gspec = params.get("gamma");
    bool need_gamma = false;
    for (const auto& c : check_names)
        need_gamma |= (c == "section3" || c == "lie_div_energy" || c == "killing_integral");
    if (need_gamma) {
        if (gspec == "solve") {
            try {
                st.gsolve = gamma_solve(*st.mf.metric, *st.curv, *st.X, st.m);
            } catch (const std::exception& e) {
                throw SolverError{e.what()};
            }
            st.gamma = std::make_unique<ScalarField>(st.gsolve.gamma);
            st.kc = std::make_unique<KillingCandidate>(st.gsolve.candidate);
            st.gamma_solved = true;
        } else {
            if (gspec.empty()) gspec = "1";
            Bindings b;
            for (const auto& [k, v] : gen.params) b[k] = v;
            ScalarField gamma;
            try {
                gamma = sample(gspec, st.mf.chart, b);
            } catch (const std::exception& e) {
                throw SpecError{e.what(), "params", 0};
            }
            for (double v : gamma.v)
                if (!(v > 0)) throw SpecError{"gamma must be positive", "params", 0};
            st.gamma = std::make_unique<ScalarField>(std::move(gamma));
            st.kc = std::make_unique<KillingCandidate>(killing_candidate(in, *st.gamma));
        }
    }

    for (const auto& name : check_names) timed([&] { return dispatch_grid(st, name, tol); });
    return report;
}

std::string emit_json(const RunReport& report, bool timings) {
    nlohmann::ordered_json j;
    j["tool"] = "qev";
    j["version"] = report.version;
    j["spec_hash"] = report.spec_hash;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < report.checks.size(); ++c) {
        const IdentityReport& rep = report.checks[c];
        nlohmann::ordered_json jc;
        jc["name"] = rep.name;
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const auto& e : rep.entries) {
            nlohmann::ordered_json je;
            je["check"] = e.check;
            je["paper_tag"] = e.paper_tag;
            je["linf"] = e.linf;  // NaN serializes as null
            je["l2"] = e.l2;
            je["lhs"] = e.lhs;
            je["rhs"] = e.rhs;
            je["tolerance"] = e.tolerance;
            je["verdict"] = e.verdict;
            je["note"] = e.note;
            entries.push_back(std::move(je));
        }
        jc["entries"] = std::move(entries);
        nlohmann::ordered_json sc = nlohmann::ordered_json::object();
        for (const auto& [k, v] : rep.scalars) sc[k] = v;
        jc["scalars"] = std::move(sc);
        jc["passed"] = rep.passed();
        if (timings && c < report.seconds.size()) jc["seconds"] = report.seconds[c];
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    j["verdict"] = report.passed() ? "pass" : "fail";
    return j.dump(2) + "\n";
}

std::string emit_csv(const RunReport& report) {
    std::string out = "check,paper_tag,linf,l2,lhs,rhs,tolerance,verdict\n";
    for (const auto& rep : report.checks)
        for (const auto& e : rep.entries) {
            out += e.check + "," + e.paper_tag + "," + fmt(e.linf) + "," + fmt(e.l2) + "," +
                   fmt(e.lhs) + "," + fmt(e.rhs) + "," + fmt(e.tolerance) + "," + e.verdict +
                   "\n";
        }
    return out;
}

std::string emit_svg(const RunReport& report) {
    // one polyline of log10(residual) per report, entries in declaration order
    std::vector<std::pair<std::string, double>> pts;
    for (const auto& rep : report.checks)
        for (const auto& e : rep.entries)
            if (!std::isnan(e.linf)) pts.push_back({e.check, e.linf});
    const int w = 640, h = 320, pad = 40;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                      "\" height=\"" + std::to_string(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!pts.empty()) {
        double lo = 0.0, hi = -300.0;
        std::vector<double> logs;
        for (const auto& [name, v] : pts) {
            double lg = std::log10(std::max(v, 1e-300));
            logs.push_back(lg);
            lo = std::min(lo, lg);
            hi = std::max(hi, lg);
        }
        if (hi <= lo) hi = lo + 1.0;
        std::string poly;
        for (std::size_t i = 0; i < logs.size(); ++i) {
            double x = pad + (w - 2.0 * pad) * (logs.size() == 1 ? 0.5 : double(i) / (logs.size() - 1));
            double y = h - pad - (h - 2.0 * pad) * (logs[i] - lo) / (hi - lo);
            poly += fmt(x) + "," + fmt(y) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"black\" points=\"" + poly + "\"/>\n";
        svg += "<text x=\"" + std::to_string(pad) + "\" y=\"20\" font-size=\"12\">log10 residual, " +
               std::to_string(pts.size()) + " entries</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qev
