#include "quasireg/regression.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace quasireg {

namespace {

constexpr double kProbableErrorFactor = 0.6745;
constexpr double kRankTol = 1e-10;

void check_rank(const Matrix& g) {
    const Matrix l = cholesky(g);  // throws on a non-positive pivot
    (void)l;
    const SymEigResult eig = sym_eig(g);
    if (!(eig.values.back() > kRankTol * eig.values.front()))
        throw RankError("regressor matrix is rank deficient");
}

void require_raw(const RegressionProblem& problem, const char* who) {
    if (!std::holds_alternative<provenance::Raw>(problem.provenance))
        throw DomainError(fmt::format("{}: problem was already centered or whitened", who));
}

}  // namespace

RegressionProblem build_problem(Matrix x, Vector y) {
    if (x.rows() != y.size())
        throw DimensionError(fmt::format("X has {} rows but Y has {} entries", x.rows(), y.size()));
    if (x.cols() == 0) throw DimensionError("X has no columns");
    if (!x.all_finite() || !std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); }))
        throw DomainError("non-finite entry in X or Y");
    if (x.rows() <= x.cols())
        throw RankError(fmt::format("insufficient degrees of freedom: n = {} must exceed k = {}",
                                    x.rows(), x.cols()));
    check_rank(gram(x));
    return RegressionProblem{std::move(x), std::move(y), provenance::Raw{}};
}

RegressionProblem center(const RegressionProblem& problem) {
    require_raw(problem, "center");
    const std::size_t n = problem.n();
    const std::size_t k = problem.k();
    provenance::Centered prov{Vector(k, 0.0), 0.0};
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += problem.x(i, j);
        prov.x_means[j] = s / static_cast<double>(n);
    }
    for (double v : problem.y) prov.y_mean += v;
    prov.y_mean /= static_cast<double>(n);

    RegressionProblem out{problem.x, problem.y, {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) out.x(i, j) -= prov.x_means[j];
        out.y[i] -= prov.y_mean;
    }
    out.provenance = std::move(prov);
    return out;
}

RegressionProblem whiten(const RegressionProblem& problem, const Matrix& g) {
    require_raw(problem, "whiten");
    if (g.rows() != problem.n() || g.cols() != problem.n())
        throw DimensionError("whiten: G must be n x n");
    Matrix root;
    try {
        root = sym_inverse_sqrt(g);
    } catch (const RankError&) {
        throw DomainError("whiten: G is not positive definite");
    }
    RegressionProblem out{root * problem.x, root * problem.y, {}};
    out.provenance = provenance::Whitened{{}, "full covariance G"};
    return out;
}

RegressionProblem whiten_diagonal(const RegressionProblem& problem, std::span<const double> g) {
    require_raw(problem, "whiten");
    if (g.size() != problem.n()) throw DimensionError("whiten: need one variance factor per row");
    provenance::Whitened prov{Vector(g.size()), "diagonal G"};
    RegressionProblem out{problem.x, problem.y, {}};
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0) || !std::isfinite(g[i]))
            throw DomainError("whiten: diagonal G entries must be positive");
        const double w = 1.0 / std::sqrt(g[i]);
        prov.weights[i] = w;
        for (double& v : out.x.row(i)) v *= w;
        out.y[i] *= w;
    }
    out.provenance = std::move(prov);
    return out;
}

double sigma_from_probable_error(double pe) {
    if (!(pe > 0.0)) throw DomainError("probable error must be positive");
    return pe / kProbableErrorFactor;
}

OlsFit ols_fit(const RegressionProblem& problem) {
    const std::size_t n = problem.n();
    const std::size_t k = problem.k();
    if (problem.y.size() != n) throw DimensionError("ols_fit: Y length differs from X rows");
    if (n <= k)
        throw RankError(fmt::format("insufficient degrees of freedom: n = {} must exceed k = {}", n, k));

    const Matrix g = gram(problem.x);
    check_rank(g);

    OlsFit fit;
    fit.n = n;
    fit.k = k;
    fit.design = problem.x;
    fit.b = spd_solve(g, transpose_times(problem.x, problem.y));
    fit.residuals = subtract(problem.y, problem.x * fit.b);
    fit.sse = dot(fit.residuals, fit.residuals);
    fit.s = std::sqrt(fit.sse / static_cast<double>(n - k));
    fit.gram_inverse = spd_inverse(g);
    fit.gram_inverse_eig = sym_eig(fit.gram_inverse);
    if (!(fit.gram_inverse_eig.values.back() > 0.0))
        throw RankError("regressor matrix is rank deficient");
    return fit;
}

double ols_risk(const SymEigResult& gram_inverse_eig, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("ols_risk: sigma must be positive");
    double trace = 0.0;
    for (double l : gram_inverse_eig.values) {
        if (!(l > 0.0)) throw DomainError("ols_risk: eigenvalues must be positive");
        trace += l;
    }
    return sigma * sigma * trace;
}

double recover_intercept(const RegressionProblem& centered, std::span<const double> b) {
    const auto* prov = std::get_if<provenance::Centered>(&centered.provenance);
    if (prov == nullptr) throw DomainError("recover_intercept: problem is not centered");
    return prov->y_mean - dot(prov->x_means, b);
}

}  // namespace quasireg
