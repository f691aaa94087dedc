#include "quasireg/app.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "quasireg/csv.hpp"
#include "quasireg/datasets.hpp"
#include "quasireg/error.hpp"

namespace quasireg::app {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kParse;
    if (dynamic_cast<const RankError*>(&e)) return kRank;
    if (dynamic_cast<const ConstraintError*>(&e)) return kConstraint;
    if (dynamic_cast<const DimensionError*>(&e)) return kParse;
    if (dynamic_cast<const DomainError*>(&e)) return kUsage;
    return kInternal;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        const auto first = cur.find_first_not_of(" \t");
        const auto last = cur.find_last_not_of(" \t");
        out.push_back(first == std::string::npos ? std::string{} : cur.substr(first, last - first + 1));
    }
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ConstraintError(fmt::format("{}: expected lo:hi, got '{}'", what, text));
    auto bound = [&](const std::string& s, double inf) {
        if (s.empty() || s == "inf" || s == "-inf") return inf;
        try {
            return parse_double(s);
        } catch (const ParseError&) {
            throw ConstraintError(fmt::format("{}: '{}' is not a number", what, s));
        }
    };
    return {bound(parts[0], -INFINITY), bound(parts[1], INFINITY)};
}

}  // namespace

SignRule parse_signs(const std::string& text) {
    SignRule rule;
    for (const std::string& s : split(text, ',')) {
        if (s == "+" || s == "pos" || s == "positive")
            rule.signs.push_back(SignConstraint::positive);
        else if (s == "-" || s == "neg" || s == "negative")
            rule.signs.push_back(SignConstraint::negative);
        else if (s == "free" || s == "0" || s == "*")
            rule.signs.push_back(SignConstraint::free);
        else
            throw ConstraintError(fmt::format("sign rule: unknown entry '{}' (use +, - or free)", s));
    }
    if (rule.signs.empty()) throw ConstraintError("sign rule is empty");
    return rule;
}

RangeRule parse_range(const std::string& text) {
    RangeRule rule;
    for (const std::string& s : split(text, ',')) {
        const auto [lo, hi] = parse_pair(s, "range rule");
        if (!(lo <= hi)) throw ConstraintError(fmt::format("range rule: empty interval '{}'", s));
        rule.admissible.push_back({lo, hi});
    }
    if (rule.admissible.empty()) throw ConstraintError("range rule is empty");
    return rule;
}

BoxRule parse_box(const std::string& text) {
    const auto [a1, a2] = parse_pair(text, "box rule");
    if (!(a1 < a2)) throw ConstraintError(fmt::format("box rule requires a1 < a2 (got '{}')", text));
    if (!std::isfinite(a1) || !std::isfinite(a2)) throw ConstraintError("box rule bounds must be finite");
    return {a1, a2};
}

std::string describe(const SelectionRule& rule) {
    if (const auto* s = std::get_if<SignRule>(&rule)) {
        std::string out = "signs(";
        for (std::size_t i = 0; i < s->signs.size(); ++i) out += (i ? "," : "") + to_string(s->signs[i]);
        return out + ")";
    }
    if (const auto* b = std::get_if<BoxRule>(&rule)) return fmt::format("box[{:.6g}, {:.6g}]", b->a1, b->a2);
    const auto& r = std::get<RangeRule>(rule);
    std::string out = "range(";
    for (std::size_t i = 0; i < r.admissible.size(); ++i)
        out += fmt::format("{}[{:.6g}, {:.6g}]", i ? "," : "", r.admissible[i].lo, r.admissible[i].hi);
    return out + ")";
}

Report fit_table(const CsvTable& table, const FitRequest& request, const std::string& input_name,
                 const std::string& digest) {
    if (request.weights_column && request.probable_error_column)
        throw DomainError("give at most one of a weights column and a probable-error column");
    if (request.regressors.empty() && !request.intercept)
        throw DomainError("no regressors: name at least one column or request an intercept");
    if (request.center && (request.weights_column || request.probable_error_column))
        throw DomainError("centering cannot be combined with weighting; use an intercept instead");
    if (request.center && request.intercept)
        throw DomainError("an intercept column would vanish under centering; use one or the other");

    for (std::size_t i = 0; i < request.regressors.size(); ++i)
        for (std::size_t j = i + 1; j < request.regressors.size(); ++j)
            if (request.regressors[i] == request.regressors[j])
                throw DomainError(fmt::format("regressor '{}' listed twice", request.regressors[i]));

    Report report;
    report.provenance.input = input_name;
    report.provenance.input_digest = digest;

    const Vector y = table.numeric_column(request.response);
    const std::size_t n = y.size();
    const std::size_t k = request.regressors.size() + (request.intercept ? 1 : 0);
    Matrix x(n, k);
    for (std::size_t c = 0; c < request.regressors.size(); ++c) {
        x.set_col(c, table.numeric_column(request.regressors[c]));
        report.provenance.columns.push_back(request.regressors[c]);
    }
    if (request.intercept) {
        for (std::size_t i = 0; i < n; ++i) x(i, k - 1) = 1.0;
        report.provenance.columns.emplace_back("(intercept)");
        report.provenance.preprocessing.emplace_back("intercept column appended");
    }

    RegressionProblem problem = build_problem(std::move(x), y);
    if (request.center) {
        problem = center(problem);
        report.provenance.preprocessing.emplace_back("centered X and Y");
    }
    if (request.probable_error_column) {
        Vector g = table.numeric_column(*request.probable_error_column);
        for (double& v : g) {
            const double sigma = sigma_from_probable_error(v);
            v = sigma * sigma;
        }
        problem = whiten_diagonal(problem, g);
        report.provenance.preprocessing.push_back(
            fmt::format("whitened by probable errors '{}' (sigma = pe/0.6745)", *request.probable_error_column));
    } else if (request.weights_column) {
        Vector g = table.numeric_column(*request.weights_column);
        for (double& w : g) {
            if (!(w > 0.0)) throw DomainError("weights must be positive");
            w = 1.0 / w;
        }
        problem = whiten_diagonal(problem, g);
        report.provenance.preprocessing.push_back(
            fmt::format("whitened by inverse-variance weights '{}'", *request.weights_column));
    }

    const OlsFit fit = ols_fit(problem);
    const QuasiAlternatives alts = alternatives(fit);
    const EfficiencyRatio ratio = efficiency_ratio(fit.gram_inverse_eig, fit.n, fit.k);

    report.ols = {fit.b, fit.s, fit.sse, fit.n, fit.k, fit.gram_inverse_eig.values};
    report.quasi = {alts.c_tilde, alts.lambda1, alts.z1,        alts.correction, alts.b_plus,
                    alts.b_minus, ratio.exact,  ratio.asymptotic, alts.warning};

    std::vector<std::pair<std::string, Vector>> centers;
    if (request.rule) {
        const Decision d = choose(alts, fit, *request.rule);
        SelectionBlock block;
        block.rule = describe(*request.rule);
        block.ambiguous = d.ambiguous;
        block.chosen = d.chosen;
        if (d.source) block.source = to_string(*d.source);
        block.rationale = d.rationale;
        report.selection = std::move(block);
        if (d.chosen) centers.emplace_back("chosen", *d.chosen);
    }
    if (centers.empty()) {
        centers.emplace_back("b_plus", alts.b_plus);
        centers.emplace_back("b_minus", alts.b_minus);
    }

    report.inference.alpha = request.alpha;
    for (const auto& [name, value] : centers) {
        for (std::size_t j = 0; j < fit.k; ++j) {
            const Interval iv = confidence_interval(value, fit, j, request.alpha);
            report.inference.intervals.push_back({name, j, value[j], iv.lo, iv.hi});
        }
        const JointRegion g = joint_region(value, fit, request.alpha);
        report.inference.regions.push_back({name, g.center, g.shape, g.radius});
    }

    if (request.center) report.intercept = recover_intercept(problem, fit.b);
    else if (request.intercept) report.intercept = fit.b.back();
    return report;
}

Report cmd_fit(const FitRequest& request) {
    std::string raw;
    const CsvTable table = read_csv(request.data_path, &raw);
    return fit_table(table, request, request.data_path, fnv1a64_hex(raw));
}

SimulationResult cmd_simulate(const SimulateRequest& request) {
    if (request.config_path.has_value() == request.table.has_value())
        throw DomainError("simulate needs exactly one of a config file and --table");

    SimulationResult result;
    if (request.table) {
        result.specs = table_preset(*request.table, request.replications.value_or(10000), request.seed.value_or(1919));
    } else {
        std::ifstream in(*request.config_path, std::ios::binary);
        if (!in) throw ParseError(fmt::format("cannot open config '{}'", *request.config_path));
        std::ostringstream buf;
        buf << in.rdbuf();
        json config;
        try {
            config = json::parse(buf.str());
        } catch (const json::exception& e) {
            throw ParseError(fmt::format("config '{}' is not valid JSON: {}", *request.config_path, e.what()));
        }
        result.specs = experiments_from_config(config);
        for (ExperimentSpec& s : result.specs) {
            if (request.replications) s.replications = *request.replications;
            if (request.seed) s.seed = *request.seed;
        }
    }

    json canonical = json::array();
    for (const ExperimentSpec& s : result.specs) {
        validate(s);
        canonical.push_back(to_json(s));
    }

    const RunOptions options{request.threads};
    for (const ExperimentSpec& s : result.specs) {
        bool boxes = false;
        for (const EstimatorSpec& e : s.estimators)
            boxes |= e.kind == EstimatorKind::ols_box || e.kind == EstimatorKind::quasi_box;
        result.reports.push_back(boxes ? run_box_experiment(s, options) : run_risk_experiment(s, options));
    }
    result.document = simulation_document(result.specs, result.reports, fnv1a64_hex(canonical.dump()));
    return result;
}

bool CaseCheck::passed() const { return std::abs(computed - expected) <= tolerance; }

bool CaseStudyResult::passed() const {
    for (const CaseCheck& c : checks)
        if (!c.passed()) return false;
    return true;
}

namespace {

CsvTable table_of(std::vector<std::string> headers, const std::vector<const Vector*>& columns) {
    CsvTable t;
    t.headers = std::move(headers);
    const std::size_t n = columns.front()->size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row;
        for (const Vector* c : columns) row.push_back(fmt::format("{}", (*c)[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string csv_text(const CsvTable& t) {
    std::string out;
    for (std::size_t c = 0; c < t.headers.size(); ++c) out += (c ? "," : "") + t.headers[c];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
        out += '\n';
    }
    return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    const Vector d = subtract(a, b);
    return dot(d, d);
}

CaseStudyResult eclipse_study(const std::string& name, double third_pe, double upper, double lower) {
    const datasets::Eclipse data = datasets::eclipse(third_pe);
    const CsvTable table = table_of({"value", "probable_error"}, {&data.value, &data.probable_error});
    FitRequest request;
    request.response = "value";
    request.intercept = true;
    request.probable_error_column = "probable_error";
    request.rule = RangeRule{{{0.0, 1.9}}};

    CaseStudyResult out;
    out.name = name;
    out.report = fit_table(table, request, "bundled:" + name, fnv1a64_hex(csv_text(table)));
    const Report& r = out.report;
    constexpr double tol = 5e-4;
    out.checks.push_back({"b_plus", r.quasi.b_plus[0], upper, tol});
    out.checks.push_back({"b_minus", r.quasi.b_minus[0], lower, tol});
    const double chosen = r.selection && r.selection->chosen ? (*r.selection->chosen)[0] : NAN;
    out.checks.push_back({"chosen", chosen, lower, tol});
    return out;
}

CaseStudyResult diabetes_study() {
    const datasets::Diabetes data = datasets::diabetes();
    const CsvTable table = table_of({"X1", "X2", "Y"}, {&data.x1, &data.x2, &data.y});
    FitRequest request;
    request.response = "Y";
    request.regressors = {"X1", "X2"};
    request.rule = SignRule{{SignConstraint::positive, SignConstraint::negative}};

    CaseStudyResult out;
    out.name = "diabetes";
    out.report = fit_table(table, request, "bundled:diabetes", fnv1a64_hex(csv_text(table)));
    const Report& r = out.report;
    const Vector nan2{NAN, NAN};
    const Vector chosen = r.selection && r.selection->chosen ? *r.selection->chosen : nan2;

    out.checks.push_back({"ols.b[0]", r.ols.b[0], -0.2868, 5e-4});
    out.checks.push_back({"ols.b[1]", r.ols.b[1], 7.9614, 5e-4});
    out.checks.push_back({"b_minus[0]", r.quasi.b_minus[0], 21.473, 5e-3});
    out.checks.push_back({"b_minus[1]", r.quasi.b_minus[1], -15.329, 5e-3});
    out.checks.push_back({"b_plus[0]", r.quasi.b_plus[0], -22.047, 5e-3});
    out.checks.push_back({"b_plus[1]", r.quasi.b_plus[1], 31.252, 5e-3});
    out.checks.push_back({"chosen[0]", chosen[0], 21.473, 5e-3});
    out.checks.push_back({"chosen[1]", chosen[1], -15.329, 5e-3});
    out.checks.push_back({"|b - beta|^2", squared_distance(r.ols.b, data.beta_true), 3644.6, 0.5});
    out.checks.push_back({"|chosen - beta|^2", squared_distance(chosen, data.beta_true), 812.9, 0.5});
    return out;
}

}  // namespace

CaseStudyResult cmd_case_study(const std::string& name) {
    if (name == "eclipse") return eclipse_study(name, 0.6, 2.0051, 1.7862);
    if (name == "eclipse-pe04") return eclipse_study(name, 0.4, 2.0, 1.7141);
    if (name == "diabetes") return diabetes_study();
    throw DomainError(fmt::format("unknown case study '{}' (expected eclipse, eclipse-pe04 or diabetes)", name));
}

std::string render_case_study(const CaseStudyResult& result) {
    std::string out = render_table(result.report);
    out += fmt::format("\n[case study: {}]\n", result.name);
    out += fmt::format("  {:<20} {:>12} {:>12} {:>12} {:>10}\n", "quantity", "computed", "expected", "abs diff",
                       "tolerance");
    for (const CaseCheck& c : result.checks)
        out += fmt::format("  {:<20} {:>12.6g} {:>12.6g} {:>12.3g} {:>10.3g}  {}\n", c.quantity, c.computed,
                           c.expected, std::abs(c.computed - c.expected), c.tolerance, c.passed() ? "ok" : "MISMATCH");
    out += result.passed() ? "  result: pass\n" : "  result: FAIL\n";
    return out;
}

json to_json(const CaseStudyResult& result) {
    json checks = json::array();
    for (const CaseCheck& c : result.checks)
        checks.push_back({{"quantity", c.quantity},
                          {"computed", round6(c.computed)},
                          {"expected", c.expected},
                          {"abs_diff", round6(std::abs(c.computed - c.expected))},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed()}});
    json j = quasireg::to_json(result.report);
    j["case_study"] = {{"name", result.name}, {"checks", checks}, {"passed", result.passed()}};
    return j;
}

}  // namespace quasireg::app
