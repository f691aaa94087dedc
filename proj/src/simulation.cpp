#include "quasireg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "quasireg/selection.hpp"

namespace quasireg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Order-fixed pairwise summation; independent of how replications were scheduled.
double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    double sd = 0.0;
};

MeanSe mean_se(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    MeanSe out;
    out.mean = pairwise_sum(v) / n;
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - out.mean) * (v[i] - out.mean);
    const double var = v.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
    out.sd = std::sqrt(var);
    out.se = out.sd / std::sqrt(n);
    return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t r = begin; r < end; ++r) fn(r);
        });
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

bool is_box(EstimatorKind kind) {
    return kind == EstimatorKind::ols_box || kind == EstimatorKind::quasi_box;
}

DesignSummary summarize(const Matrix& x, const OlsFit& fit) {
    DesignSummary d;
    d.n = fit.n;
    d.k = fit.k;
    const auto& values = fit.gram_inverse_eig.values;
    d.lambda1 = values.front();
    for (double l : values) d.trace += l;
    d.eigen_ratio = values.front() / values.back();
    if (fit.k == 2) {
        const Vector c0 = x.col(0);
        const Vector c1 = x.col(1);
        const double n = static_cast<double>(x.rows());
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            m0 += c0[i];
            m1 += c1[i];
        }
        m0 /= n;
        m1 /= n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            sxy += (c0[i] - m0) * (c1[i] - m1);
            sxx += (c0[i] - m0) * (c0[i] - m0);
            syy += (c1[i] - m1) * (c1[i] - m1);
        }
        d.column_correlation = sxy / std::sqrt(sxx * syy);
    }
    return d;
}

}  // namespace

CollinearDesign gen_collinear_design(std::size_t n, double target_correlation, std::uint64_t seed) {
    if (n < 3) throw DomainError("gen_collinear_design: n must be at least 3");
    if (!(std::abs(target_correlation) < 1.0))
        throw DomainError("gen_collinear_design: |correlation| must be below 1");

    RandomStream stream(seed, 0);
    auto centred_draw = [&] {
        Vector v(n);
        for (double& x : v) x = stream.normal();
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(n);
        for (double& x : v) x -= m;
        return v;
    };
    auto unit = [](Vector v) {
        const double len = norm2(v);
        if (!(len > 0.0)) throw DomainError("gen_collinear_design: degenerate draw");
        for (double& x : v) x /= len;
        return v;
    };

    const Vector x1 = unit(centred_draw());
    Vector u = centred_draw();
    u = unit(axpy(-dot(u, x1), x1, u));
    const double rho = target_correlation;
    const Vector x2 = axpy(rho, x1, [&] {
        Vector w = u;
        for (double& x : w) x *= std::sqrt(1.0 - rho * rho);
        return w;
    }());

    CollinearDesign out;
    out.x = Matrix(n, 2);
    out.x.set_col(0, x1);
    out.x.set_col(1, x2);
    const SymEigResult eig = sym_eig(spd_inverse(gram(out.x)));
    out.eigen_ratio = eig.values.front() / eig.values.back();
    out.correlation = dot(x1, x2) / (norm2(x1) * norm2(x2));
    return out;
}

Matrix materialize(const DesignSpec& spec) {
    return std::visit(overloaded{
                          [](const design::Explicit& d) { return d.x; },
                          [](const design::Ones& d) { return Matrix(d.n, 1, 1.0); },
                          [](const design::Collinear& d) {
                              return gen_collinear_design(d.n, d.correlation, d.seed).x;
                          },
                      },
                      spec);
}

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::ols: return "ols";
        case EstimatorKind::quasi_oracle: return "quasi_oracle";
        case EstimatorKind::ols_box: return "ols_box";
        case EstimatorKind::quasi_box: return "quasi_box";
    }
    return "unknown";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
    for (EstimatorKind k : {EstimatorKind::ols, EstimatorKind::quasi_oracle, EstimatorKind::ols_box,
                            EstimatorKind::quasi_box})
        if (to_string(k) == name) return k;
    throw DomainError("unknown estimator '" + name + "'");
}

std::string EstimatorSpec::label() const {
    if (is_box(kind)) return fmt::format("{}[{:g},{:g}]", to_string(kind), a1, a2);
    return to_string(kind);
}

void validate(const ExperimentSpec& spec) {
    if (spec.replications < 1) throw DomainError("experiment: replications must be at least 1");
    validate(spec.error_model);
    const Matrix x = materialize(spec.design);
    if (spec.beta_true.size() != x.cols())
        throw DimensionError(fmt::format("experiment: beta_true has {} entries but design has {} columns",
                                         spec.beta_true.size(), x.cols()));
    build_problem(x, Vector(x.rows(), 0.0));
    if (spec.estimators.empty()) throw DomainError("experiment: no estimators requested");
    for (const EstimatorSpec& e : spec.estimators) {
        if (!is_box(e.kind)) continue;
        if (x.cols() != 1) throw ConstraintError("experiment: box estimators need a one-column design");
        if (!(e.a1 < e.a2)) throw ConstraintError("experiment: box requires a1 < a2");
    }
}

const EstimatorRisk* RiskReport::find(const EstimatorSpec& estimator) const {
    for (const EstimatorRisk& r : risks)
        if (r.estimator == estimator) return &r;
    return nullptr;
}

ReplicationKernel::ReplicationKernel(const Matrix& x, Vector beta_true)
    : beta_(std::move(beta_true)) {
    if (beta_.size() != x.cols()) throw DimensionError("ReplicationKernel: beta length differs from k");
    xbeta_ = x * beta_;
    reference_ = ols_fit(build_problem(x, xbeta_));
    hat_ = reference_.gram_inverse * x.transposed();
    z1_ = reference_.gram_inverse_eig.vector(0);
    c_tilde_ = c_tilde(reference_.n, reference_.k, reference_.gram_inverse_eig.values.front());
}

ReplicationKernel::Result ReplicationKernel::evaluate(std::span<const double> errors) const {
    const Matrix& x = reference_.design;
    if (errors.size() != x.rows()) throw DimensionError("ReplicationKernel: error length differs from n");
    Vector y = xbeta_;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += errors[i];

    Result r;
    r.b = hat_ * y;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double e = y[i] - dot(x.row(i), r.b);
        sse += e * e;
    }
    r.sse = sse;
    r.correction = c_tilde_ * std::sqrt(sse);
    const Vector delta = subtract(r.b, beta_);
    r.projected_error = dot(z1_, delta);
    r.oracle = axpy(-sign_nonneg(r.projected_error) * r.correction, z1_, r.b);
    return r;
}

RiskReport run_risk_experiment(const ExperimentSpec& spec, RunOptions options) {
    validate(spec);
    const Matrix x = materialize(spec.design);
    const ReplicationKernel kernel(x, spec.beta_true);
    const std::size_t reps = spec.replications;
    const std::size_t m = spec.estimators.size();

    std::vector<double> sq(reps * m);
    parallel_for(reps, options.threads, [&](std::size_t rep) {
        RandomStream stream(spec.seed, rep);
        Vector eps(x.rows());
        sample_errors_into(spec.error_model, eps, stream);
        const auto r = kernel.evaluate(eps);
        for (std::size_t e = 0; e < m; ++e) {
            const EstimatorSpec& est = spec.estimators[e];
            double d = 0.0;
            switch (est.kind) {
                case EstimatorKind::ols: d = squared_distance(r.b, spec.beta_true); break;
                case EstimatorKind::quasi_oracle: d = squared_distance(r.oracle, spec.beta_true); break;
                case EstimatorKind::ols_box: {
                    const double v = ols_box(r.b[0], est.a1, est.a2) - spec.beta_true[0];
                    d = v * v;
                    break;
                }
                case EstimatorKind::quasi_box: {
                    const double v = quasi_box(r.b[0], r.b[0] - r.correction, r.b[0] + r.correction,
                                               est.a1, est.a2) -
                                     spec.beta_true[0];
                    d = v * v;
                    break;
                }
            }
            sq[e * reps + rep] = d;
        }
    });

    RiskReport report;
    report.name = spec.name;
    report.error_model = describe(spec.error_model);
    report.replications = reps;
    report.seed = spec.seed;
    report.design = summarize(x, kernel.reference_fit());
    report.theoretical_ratio =
        efficiency_ratio(kernel.reference_fit().gram_inverse_eig, report.design.n, report.design.k).exact;
    report.iid_ols_risk = variance(spec.error_model) * report.design.trace;

    std::optional<std::size_t> ols_idx, quasi_idx;
    for (std::size_t e = 0; e < m; ++e) {
        const auto column = std::span<const double>(sq).subspan(e * reps, reps);
        const MeanSe ms = mean_se(column);
        report.risks.push_back({spec.estimators[e], ms.mean, ms.se});
        if (spec.estimators[e].kind == EstimatorKind::ols && !ols_idx) ols_idx = e;
        if (spec.estimators[e].kind == EstimatorKind::quasi_oracle && !quasi_idx) quasi_idx = e;
    }
    if (ols_idx && quasi_idx) {
        const double ols = report.risks[*ols_idx].risk;
        const double ratio = report.risks[*quasi_idx].risk / ols;
        std::vector<double> lin(reps);
        for (std::size_t rep = 0; rep < reps; ++rep)
            lin[rep] = sq[*quasi_idx * reps + rep] - ratio * sq[*ols_idx * reps + rep];
        report.ratio = ratio;
        report.ratio_se = mean_se(lin).se / ols;
    }
    return report;
}

RiskReport run_box_experiment(const ExperimentSpec& spec, RunOptions options) {
    const Matrix x = materialize(spec.design);
    if (x.cols() != 1) throw ConstraintError("box experiment requires k = 1");
    if (std::none_of(spec.estimators.begin(), spec.estimators.end(),
                     [](const EstimatorSpec& e) { return is_box(e.kind); }))
        throw ConstraintError("box experiment requires at least one box estimator");
    return run_risk_experiment(spec, options);
}

bool MomentReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

const PropertyCheck* MomentReport::find(const std::string& check_name) const {
    for (const PropertyCheck& c : checks)
        if (c.name == check_name) return &c;
    return nullptr;
}

MomentReport run_moment_checks(const ExperimentSpec& spec, RunOptions options) {
    validate(spec);
    const Matrix x = materialize(spec.design);
    const ReplicationKernel kernel(x, spec.beta_true);
    const OlsFit& fit = kernel.reference_fit();
    const std::size_t reps = spec.replications;
    const std::size_t k = fit.k;

    // Per replication: oracle estimate (k), projected error, OLS and oracle squared distances.
    const std::size_t stride = k + 3;
    std::vector<double> rows(reps * stride);
    parallel_for(reps, options.threads, [&](std::size_t rep) {
        RandomStream stream(spec.seed, rep);
        Vector eps(x.rows());
        sample_errors_into(spec.error_model, eps, stream);
        const auto r = kernel.evaluate(eps);
        double* out = rows.data() + rep * stride;
        for (std::size_t j = 0; j < k; ++j) out[j] = r.oracle[j];
        out[k] = r.projected_error;
        out[k + 1] = squared_distance(r.b, spec.beta_true);
        out[k + 2] = squared_distance(r.oracle, spec.beta_true);
    });
    auto column = [&](std::size_t c) {
        std::vector<double> v(reps);
        for (std::size_t rep = 0; rep < reps; ++rep) v[rep] = rows[rep * stride + c];
        return v;
    };

    MomentReport report;
    report.name = spec.name;
    report.replications = reps;

    const bool normal = std::holds_alternative<error_model::Normal>(spec.error_model);
    const bool iid = !std::holds_alternative<error_model::ArExponential>(spec.error_model);
    const double sigma = std::sqrt(variance(spec.error_model));

    std::vector<Vector> comps(k);
    Vector means(k);
    for (std::size_t j = 0; j < k; ++j) {
        comps[j] = column(j);
        const MeanSe ms = mean_se(comps[j]);
        means[j] = ms.mean;
        const double tol = 4.0 * ms.se;
        report.checks.push_back({fmt::format("unbiased[{}]", j), ms.mean, spec.beta_true[j], tol, ms.se,
                                 std::abs(ms.mean - spec.beta_true[j]) <= tol});
    }

    {
        const Vector ols_sq = column(k + 1);
        const Vector quasi_sq = column(k + 2);
        Vector gain(reps);
        for (std::size_t rep = 0; rep < reps; ++rep) gain[rep] = ols_sq[rep] - quasi_sq[rep];
        const MeanSe ms = mean_se(gain);
        report.checks.push_back({"oracle_dominance", ms.mean, 0.0, 3.0 * ms.se, ms.se, ms.mean > 3.0 * ms.se});
    }

    if (iid) {
        const Vector proj = column(k);
        const MeanSe ms = mean_se(proj);
        Vector sq(reps);
        for (std::size_t rep = 0; rep < reps; ++rep) sq[rep] = (proj[rep] - ms.mean) * (proj[rep] - ms.mean);
        const MeanSe var = mean_se(sq);
        const double expected = fit.gram_inverse_eig.values.front() * sigma * sigma;
        const double observed = var.mean * static_cast<double>(reps) / static_cast<double>(reps - 1);
        report.checks.push_back({"projection_variance", observed, expected, 3.0 * var.se, var.se,
                                 std::abs(observed - expected) <= 3.0 * var.se});
    }

    if (normal) {
        const QuasiCovariance qc = quasi_covariance(fit, sigma);
        Matrix sample(k, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a; b < k; ++b) {
                Vector prod(reps);
                for (std::size_t rep = 0; rep < reps; ++rep)
                    prod[rep] = (comps[a][rep] - means[a]) * (comps[b][rep] - means[b]);
                const double c = pairwise_sum(prod) / static_cast<double>(reps - 1);
                sample(a, b) = c;
                sample(b, a) = c;
            }
        double num = 0.0, den = 0.0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                num += (sample(a, b) - qc.q(a, b)) * (sample(a, b) - qc.q(a, b));
                den += qc.q(a, b) * qc.q(a, b);
            }
        const double rel = std::sqrt(num / den);
        report.checks.push_back({"covariance_frobenius", rel, 0.0, 0.05, 0.0, rel < 0.05});

        for (std::size_t j = 0; j < k; ++j) {
            const FourthMomentReport fm = fourth_moment(fit, sigma, j);
            Vector p4(reps);
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const double d = comps[j][rep] - spec.beta_true[j];
                p4[rep] = d * d * d * d;
            }
            const MeanSe ms = mean_se(p4);
            report.checks.push_back({fmt::format("fourth_moment[{}]", j), ms.mean, fm.mu4, 3.0 * ms.se, ms.se,
                                     std::abs(ms.mean - fm.mu4) <= 3.0 * ms.se});
            report.checks.push_back({fmt::format("kurtosis_excess[{}]", j), fm.kurtosis_excess, 0.5, 0.55, 0.0,
                                     fm.kurtosis_excess >= -0.05 && fm.kurtosis_excess <= 1.05});
        }
    }
    return report;
}

std::vector<std::pair<double, double>> standard_boxes() {
    return {{0.3, 1.7}, {0.5, 1.5}, {0.8, 1.2}, {0.6, 1.7}, {0.3, 1.4}};
}

std::vector<ExperimentSpec> table_preset(int table, std::size_t replications, std::uint64_t seed) {
    const std::vector<std::pair<std::string, ErrorModel>> models = {
        {"normal", error_model::Normal{1.0}},
        {"uniform", error_model::Uniform{-2.0, 2.0}},
        {"mixture", error_model::Mixture{1.0, 0.8, 10.0, 0.2}},
        {"ar_exponential", error_model::ArExponential{1.0, 0.3}},
    };
    std::vector<ExperimentSpec> out;
    switch (table) {
        case 1:
        case 2:
            for (const auto& [label, model] : models) {
                ExperimentSpec s;
                s.name = fmt::format("table{}/{}", table, label);
                if (table == 1) {
                    s.design = design::Ones{10};
                    s.beta_true = {1.0};
                } else {
                    s.design = design::Collinear{10, 0.9955, seed};
                    s.beta_true = {1.0, 1.0};
                }
                s.error_model = model;
                s.replications = replications;
                s.seed = seed;
                out.push_back(std::move(s));
            }
            return out;
        case 4:
        case 5:
        case 6: {
            ExperimentSpec s;
            s.name = fmt::format("table{}/{}", table, models[static_cast<std::size_t>(table - 4)].first);
            s.design = design::Ones{6};
            s.beta_true = {1.0};
            s.error_model = models[static_cast<std::size_t>(table - 4)].second;
            s.replications = replications;
            s.seed = seed;
            s.estimators = {{EstimatorKind::ols}, {EstimatorKind::quasi_oracle}};
            for (const auto& [a1, a2] : standard_boxes()) {
                s.estimators.push_back({EstimatorKind::ols_box, a1, a2});
                s.estimators.push_back({EstimatorKind::quasi_box, a1, a2});
            }
            out.push_back(std::move(s));
            return out;
        }
        default:
            throw DomainError(fmt::format("no preset for table {} (expected 1, 2, 4, 5 or 6)", table));
    }
}

}  // namespace quasireg
