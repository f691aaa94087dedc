#include "quasireg/report.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "quasireg/csv.hpp"

namespace quasireg {

using nlohmann::json;

namespace {

json vec(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(round6(x));
    return a;
}

json mat(const Matrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i)));
    return a;
}

Vector read_vec(const json& j) { return j.get<std::vector<double>>(); }

Matrix read_mat(const json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols) throw ParseError("ragged matrix in JSON");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    }
    return m;
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string fmt_vec(std::span<const double> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{:.6g}", i ? ", " : "", v[i]);
    return out + ")";
}

double number(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

double round6(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    return parse_double(fmt::format("{:.6g}", v));
}

json to_json(const Report& r) {
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = "fit";
    j["ols"] = {{"b", vec(r.ols.b)},
                {"s", round6(r.ols.s)},
                {"sse", round6(r.ols.sse)},
                {"n", r.ols.n},
                {"k", r.ols.k},
                {"eigenvalues", vec(r.ols.eigenvalues)}};
    j["quasi"] = {{"c_tilde", round6(r.quasi.c_tilde)},
                  {"lambda1", round6(r.quasi.lambda1)},
                  {"z1", vec(r.quasi.z1)},
                  {"correction", round6(r.quasi.correction)},
                  {"b_plus", vec(r.quasi.b_plus)},
                  {"b_minus", vec(r.quasi.b_minus)},
                  {"efficiency_ratio",
                   {{"exact", round6(r.quasi.ratio_exact)}, {"asymptotic", round6(r.quasi.ratio_asymptotic)}}},
                  {"warning", opt(r.quasi.warning)}};
    if (r.selection) {
        const SelectionBlock& s = *r.selection;
        j["selection"] = {{"rule", s.rule},
                          {"ambiguous", s.ambiguous},
                          {"chosen", s.chosen ? vec(*s.chosen) : json(nullptr)},
                          {"source", opt(s.source)},
                          {"rationale", s.rationale}};
    } else {
        j["selection"] = nullptr;
    }
    json intervals = json::array();
    for (const IntervalRow& row : r.inference.intervals)
        intervals.push_back({{"center", row.center},
                             {"component", row.component},
                             {"estimate", round6(row.estimate)},
                             {"lo", round6(row.lo)},
                             {"hi", round6(row.hi)}});
    json regions = json::array();
    for (const JointRegionBlock& g : r.inference.regions)
        regions.push_back({{"center", g.center},
                           {"center_value", vec(g.center_value)},
                           {"shape", mat(g.shape)},
                           {"radius", round6(g.radius)}});
    j["inference"] = {{"alpha", round6(r.inference.alpha)}, {"intervals", intervals}, {"joint_regions", regions}};
    j["intercept"] = r.intercept ? json(round6(*r.intercept)) : json(nullptr);
    j["provenance"] = {{"tool", "quasireg"},
                       {"version", r.provenance.version},
                       {"input", r.provenance.input},
                       {"input_digest", r.provenance.input_digest},
                       {"seed", opt(r.provenance.seed)},
                       {"preprocessing", r.provenance.preprocessing},
                       {"columns", r.provenance.columns}};
    return j;
}

Report report_from_json(const json& j) {
    if (j.value("schema", "") != kReportSchema) throw ParseError("not a quasireg fit report");
    Report r;
    const json& o = j.at("ols");
    r.ols.b = read_vec(o.at("b"));
    r.ols.s = o.at("s").get<double>();
    r.ols.sse = o.at("sse").get<double>();
    r.ols.n = o.at("n").get<std::size_t>();
    r.ols.k = o.at("k").get<std::size_t>();
    r.ols.eigenvalues = read_vec(o.at("eigenvalues"));

    const json& q = j.at("quasi");
    r.quasi.c_tilde = q.at("c_tilde").get<double>();
    r.quasi.lambda1 = q.at("lambda1").get<double>();
    r.quasi.z1 = read_vec(q.at("z1"));
    r.quasi.correction = q.at("correction").get<double>();
    r.quasi.b_plus = read_vec(q.at("b_plus"));
    r.quasi.b_minus = read_vec(q.at("b_minus"));
    r.quasi.ratio_exact = q.at("efficiency_ratio").at("exact").get<double>();
    r.quasi.ratio_asymptotic = q.at("efficiency_ratio").at("asymptotic").get<double>();
    if (!q.at("warning").is_null()) r.quasi.warning = q.at("warning").get<std::string>();

    if (!j.at("selection").is_null()) {
        const json& s = j.at("selection");
        SelectionBlock block;
        block.rule = s.at("rule").get<std::string>();
        block.ambiguous = s.at("ambiguous").get<bool>();
        if (!s.at("chosen").is_null()) block.chosen = read_vec(s.at("chosen"));
        if (!s.at("source").is_null()) block.source = s.at("source").get<std::string>();
        block.rationale = s.at("rationale").get<std::vector<std::string>>();
        r.selection = std::move(block);
    }

    const json& inf = j.at("inference");
    r.inference.alpha = inf.at("alpha").get<double>();
    for (const json& row : inf.at("intervals"))
        r.inference.intervals.push_back({row.at("center").get<std::string>(), row.at("component").get<std::size_t>(),
                                         row.at("estimate").get<double>(), row.at("lo").get<double>(),
                                         row.at("hi").get<double>()});
    for (const json& g : inf.at("joint_regions"))
        r.inference.regions.push_back({g.at("center").get<std::string>(), read_vec(g.at("center_value")),
                                       read_mat(g.at("shape")), g.at("radius").get<double>()});
    if (!j.at("intercept").is_null()) r.intercept = j.at("intercept").get<double>();

    const json& p = j.at("provenance");
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.input = p.at("input").get<std::string>();
    r.provenance.input_digest = p.at("input_digest").get<std::string>();
    if (!p.at("seed").is_null()) r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.preprocessing = p.at("preprocessing").get<std::vector<std::string>>();
    r.provenance.columns = p.at("columns").get<std::vector<std::string>>();
    return r;
}

std::string render_table(const Report& r) {
    std::ostringstream out;
    out << fmt::format("input            {} (digest {})\n", r.provenance.input, r.provenance.input_digest);
    if (!r.provenance.preprocessing.empty()) {
        out << fmt::format("preprocessing    {}\n", fmt::join(r.provenance.preprocessing, "; "));
    }
    out << fmt::format("n = {}, k = {}, columns:", r.ols.n, r.ols.k);
    for (const auto& c : r.provenance.columns) out << ' ' << c;
    out << "\n\n[stage 1: OLS]\n";
    out << fmt::format("  b                {}\n", fmt_vec(r.ols.b));
    out << fmt::format("  s                {:.6g}\n", r.ols.s);
    out << fmt::format("  sse              {:.6g}\n", r.ols.sse);
    out << fmt::format("  eig (XtX)^-1     {}\n", fmt_vec(r.ols.eigenvalues));
    if (r.intercept) out << fmt::format("  intercept        {:.6g}\n", *r.intercept);
    out << "\n[stage 1: alternatives]\n";
    out << fmt::format("  lambda1          {:.6g}\n", r.quasi.lambda1);
    out << fmt::format("  z1               {}\n", fmt_vec(r.quasi.z1));
    out << fmt::format("  c_tilde          {:.6g}\n", r.quasi.c_tilde);
    out << fmt::format("  correction       {:.6g}\n", r.quasi.correction);
    out << fmt::format("  b_plus           {}\n", fmt_vec(r.quasi.b_plus));
    out << fmt::format("  b_minus          {}\n", fmt_vec(r.quasi.b_minus));
    out << fmt::format("  risk ratio       {:.6g} (asymptotic {:.6g})\n", r.quasi.ratio_exact,
                       r.quasi.ratio_asymptotic);
    if (r.quasi.warning) out << "  warning: " << *r.quasi.warning << '\n';
    out << "\n[stage 2: selection]\n";
    if (!r.selection) {
        out << "  no rule given; both alternatives reported\n";
    } else {
        out << "  rule             " << r.selection->rule << '\n';
        if (r.selection->chosen)
            out << fmt::format("  chosen           {} ({})\n", fmt_vec(*r.selection->chosen),
                               r.selection->source.value_or("?"));
        else
            out << "  ambiguous: no alternative could be singled out\n";
        for (const auto& line : r.selection->rationale) out << "    - " << line << '\n';
    }
    out << fmt::format("\n[inference, alpha = {:.6g}]\n", r.inference.alpha);
    for (const IntervalRow& row : r.inference.intervals)
        out << fmt::format("  {:<8} [{}]  {:>12.6g}  in [{:.6g}, {:.6g}]\n", row.center, row.component,
                           row.estimate, row.lo, row.hi);
    for (const JointRegionBlock& g : r.inference.regions)
        out << fmt::format("  joint region around {} {}: radius {:.6g}\n", g.center, fmt_vec(g.center_value),
                           g.radius);
    return out.str();
}

json to_json(const RiskReport& r) {
    json risks = json::array();
    for (const EstimatorRisk& e : r.risks) {
        json row = {{"estimator", to_string(e.estimator.kind)},
                    {"label", e.estimator.label()},
                    {"risk", round6(e.risk)},
                    {"se", round6(e.se)}};
        if (e.estimator.kind == EstimatorKind::ols_box || e.estimator.kind == EstimatorKind::quasi_box) {
            row["a1"] = round6(e.estimator.a1);
            row["a2"] = round6(e.estimator.a2);
        }
        risks.push_back(std::move(row));
    }
    json design = {{"n", r.design.n},
                   {"k", r.design.k},
                   {"lambda1", round6(r.design.lambda1)},
                   {"trace", round6(r.design.trace)},
                   {"eigen_ratio", round6(r.design.eigen_ratio)},
                   {"column_correlation",
                    r.design.column_correlation ? json(round6(*r.design.column_correlation)) : json(nullptr)}};
    return {{"name", r.name},
            {"error_model", r.error_model},
            {"replications", r.replications},
            {"seed", r.seed},
            {"design", design},
            {"risks", risks},
            {"ratio", r.ratio ? json(round6(*r.ratio)) : json(nullptr)},
            {"ratio_se", r.ratio_se ? json(round6(*r.ratio_se)) : json(nullptr)},
            {"theoretical_ratio", round6(r.theoretical_ratio)},
            {"iid_ols_risk", round6(r.iid_ols_risk)}};
}

json to_json(const MomentReport& r) {
    json checks = json::array();
    for (const PropertyCheck& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"observed", round6(c.observed)},
                          {"expected", round6(c.expected)},
                          {"tolerance", round6(c.tolerance)},
                          {"standard_error", round6(c.standard_error)},
                          {"passed", c.passed}});
    return {{"name", r.name}, {"replications", r.replications}, {"checks", checks}, {"all_passed", r.all_passed()}};
}

std::string render_table(const std::vector<RiskReport>& reports) {
    std::ostringstream out;
    for (const RiskReport& r : reports) {
        out << fmt::format("{}  [{}; n={}, k={}; {} reps; seed {}]\n", r.name.empty() ? "experiment" : r.name,
                           r.error_model, r.design.n, r.design.k, r.replications, r.seed);
        out << fmt::format("  design: sum(lambda) = {:.6g}, eigen ratio = {:.6g}", r.design.trace,
                           r.design.eigen_ratio);
        if (r.design.column_correlation) out << fmt::format(", column correlation = {:.6g}", *r.design.column_correlation);
        out << '\n';
        out << fmt::format("  {:<26} {:>12} {:>12}\n", "estimator", "risk", "se");
        for (const EstimatorRisk& e : r.risks)
            out << fmt::format("  {:<26} {:>12.6g} {:>12.6g}\n", e.estimator.label(), e.risk, e.se);
        if (r.ratio)
            out << fmt::format("  quasi/ols ratio: experimental {:.6g} (se {:.6g}), theoretical {:.6g}\n", *r.ratio,
                               r.ratio_se.value_or(0.0), r.theoretical_ratio);
        out << '\n';
    }
    return out.str();
}

namespace {

DesignSpec design_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "ones") return design::Ones{j.at("n").get<std::size_t>()};
    if (type == "collinear")
        return design::Collinear{j.at("n").get<std::size_t>(), j.at("correlation").get<double>(),
                                 j.value("seed", std::uint64_t{1})};
    if (type == "explicit") return design::Explicit{read_mat(j.at("rows"))};
    throw ParseError("unknown design type '" + type + "'");
}

json design_to_json(const DesignSpec& d) {
    if (const auto* o = std::get_if<design::Ones>(&d)) return {{"type", "ones"}, {"n", o->n}};
    if (const auto* c = std::get_if<design::Collinear>(&d))
        return {{"type", "collinear"}, {"n", c->n}, {"correlation", c->correlation}, {"seed", c->seed}};
    const auto& e = std::get<design::Explicit>(d);
    json rows = json::array();
    for (std::size_t i = 0; i < e.x.rows(); ++i) {
        auto r = e.x.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"type", "explicit"}, {"rows", rows}};
}

ErrorModel error_model_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "normal") return error_model::Normal{number(j, "sigma", 1.0)};
    if (type == "uniform") return error_model::Uniform{j.at("a").get<double>(), j.at("b").get<double>()};
    if (type == "mixture")
        return error_model::Mixture{number(j, "sigma1", 1.0), number(j, "p1", 0.8), number(j, "sigma2", 10.0),
                                    number(j, "p2", 0.2)};
    if (type == "ar_exponential") return error_model::ArExponential{number(j, "sigma", 1.0), number(j, "q", 0.3)};
    throw ParseError("unknown error model type '" + type + "'");
}

json error_model_to_json(const ErrorModel& m) {
    if (const auto* n = std::get_if<error_model::Normal>(&m)) return {{"type", "normal"}, {"sigma", n->sigma}};
    if (const auto* u = std::get_if<error_model::Uniform>(&m)) return {{"type", "uniform"}, {"a", u->a}, {"b", u->b}};
    if (const auto* x = std::get_if<error_model::Mixture>(&m))
        return {{"type", "mixture"}, {"sigma1", x->sigma1}, {"p1", x->p1}, {"sigma2", x->sigma2}, {"p2", x->p2}};
    const auto& a = std::get<error_model::ArExponential>(m);
    return {{"type", "ar_exponential"}, {"sigma", a.sigma}, {"q", a.q}};
}

}  // namespace

ExperimentSpec experiment_from_json(const json& j) {
    try {
        ExperimentSpec s;
        s.name = j.value("name", std::string{});
        s.design = design_from_json(j.at("design"));
        s.beta_true = read_vec(j.at("beta_true"));
        s.error_model = error_model_from_json(j.at("error_model"));
        s.replications = j.value("replications", std::size_t{10000});
        s.seed = j.value("seed", std::uint64_t{1919});
        if (j.contains("estimators")) {
            s.estimators.clear();
            for (const json& e : j.at("estimators"))
                s.estimators.push_back({estimator_kind_from_string(e.at("type").get<std::string>()),
                                        number(e, "a1", 0.0), number(e, "a2", 0.0)});
        }
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed experiment config: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(std::string("malformed experiment config: ") + e.what());
    }
}

json to_json(const ExperimentSpec& s) {
    json est = json::array();
    for (const EstimatorSpec& e : s.estimators) {
        json row = {{"type", to_string(e.kind)}};
        if (e.kind == EstimatorKind::ols_box || e.kind == EstimatorKind::quasi_box) {
            row["a1"] = e.a1;
            row["a2"] = e.a2;
        }
        est.push_back(std::move(row));
    }
    return {{"name", s.name},
            {"design", design_to_json(s.design)},
            {"beta_true", s.beta_true},
            {"error_model", error_model_to_json(s.error_model)},
            {"replications", s.replications},
            {"seed", s.seed},
            {"estimators", est}};
}

std::vector<ExperimentSpec> experiments_from_config(const json& j) {
    std::vector<ExperimentSpec> out;
    if (j.is_object() && j.contains("experiments")) {
        for (const json& e : j.at("experiments")) out.push_back(experiment_from_json(e));
    } else if (j.is_object()) {
        out.push_back(experiment_from_json(j));
    } else {
        throw ParseError("simulation config must be a JSON object");
    }
    if (out.empty()) throw ParseError("simulation config lists no experiments");
    return out;
}

json simulation_document(const std::vector<ExperimentSpec>& specs, const std::vector<RiskReport>& reports,
                         const std::string& config_digest) {
    json experiments = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json e = to_json(reports[i]);
        e["spec"] = to_json(specs[i]);
        experiments.push_back(std::move(e));
    }
    return {{"schema", kRiskSchema},
            {"experiments", experiments},
            {"provenance", {{"tool", "quasireg"}, {"version", kVersion}, {"config_digest", config_digest}}}};
}

}  // namespace quasireg
