#include <cmath>

#include "doctest.h"

#include "quasireg/csv.hpp"
#include "quasireg/error.hpp"
#include "quasireg/random.hpp"
#include "quasireg/regression.hpp"

using namespace quasireg;

namespace {

RegressionProblem random_problem(std::size_t n, std::size_t k, std::uint64_t seed) {
    RandomStream rs(seed, 0);
    Matrix x(n, k);
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) x(i, j) = rs.normal();
        y[i] = rs.normal() + 2.0 * x(i, 0);
    }
    return build_problem(std::move(x), std::move(y));
}

double sse_at(const RegressionProblem& p, std::span<const double> b) {
    const Vector r = subtract(p.y, p.x * b);
    return dot(r, r);
}

// Coordinate pattern search; slow but independent of any normal equations.
Vector direct_search(const RegressionProblem& p) {
    Vector b(p.k(), 0.0);
    double best = sse_at(p, b);
    for (double step = 4.0; step > 1e-10; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t j = 0; j < p.k(); ++j)
                for (double dir : {-1.0, 1.0}) {
                    Vector t = b;
                    t[j] += dir * step;
                    const double v = sse_at(p, t);
                    if (v < best) {
                        best = v;
                        b = t;
                        improved = true;
                    }
                }
        }
    }
    return b;
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("exact fit recovers beta with zero residuals") {
    const Matrix x{{1, 0}, {0, 1}, {1, 1}, {2, -1}};
    const Vector beta{3.0, -2.0};
    const OlsFit fit = ols_fit(build_problem(x, x * beta));
    CHECK(fit.b[0] == doctest::Approx(3.0));
    CHECK(fit.b[1] == doctest::Approx(-2.0));
    CHECK(fit.sse == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(fit.dof() == 2);
}

TEST_CASE("OLS coincides with a direct-search minimizer of the residual sum of squares") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        for (std::size_t k : {1u, 2u}) {
            const RegressionProblem p = random_problem(12, k, seed);
            const OlsFit fit = ols_fit(p);
            const Vector ref = direct_search(p);
            for (std::size_t j = 0; j < k; ++j) CHECK(fit.b[j] == doctest::Approx(ref[j]).epsilon(1e-7));
            CHECK(fit.sse == doctest::Approx(sse_at(p, ref)).epsilon(1e-10));
            CHECK(fit.s == doctest::Approx(std::sqrt(fit.sse / (12.0 - k))));
            // Residuals are orthogonal to the columns.
            for (double v : transpose_times(p.x, fit.residuals)) CHECK(std::abs(v) < 1e-10);
        }
    }
}

TEST_CASE("eigen data of the fit belong to the inverse Gram matrix") {
    const RegressionProblem p = random_problem(15, 3, 9);
    const OlsFit fit = ols_fit(p);
    const Matrix prod = fit.gram_inverse * gram(p.x);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    double tr = 0;
    for (std::size_t i = 0; i < 3; ++i) tr += fit.gram_inverse(i, i);
    double sum = 0;
    for (double l : fit.gram_inverse_eig.values) sum += l;
    CHECK(sum == doctest::Approx(tr));
    CHECK(ols_risk(fit.gram_inverse_eig, 2.0) == doctest::Approx(4.0 * tr));
}

TEST_CASE("problem validation") {
    SUBCASE("k = n") {
        try {
            build_problem(Matrix{{1, 0}, {0, 1}}, Vector{1, 2});
            FAIL("expected RankError");
        } catch (const RankError& e) {
            CHECK(std::string(e.what()).find("insufficient degrees of freedom") != std::string::npos);
        }
    }
    SUBCASE("row mismatch") { CHECK_THROWS_AS(build_problem(Matrix(3, 1, 1.0), Vector{1, 2}), DimensionError); }
    SUBCASE("non-finite") { CHECK_THROWS_AS(build_problem(Matrix(3, 1, 1.0), Vector{1, NAN, 2}), DomainError); }
    SUBCASE("collinear columns") {
        const Matrix x{{1, 2}, {2, 4}, {3, 6}, {4, 8}};
        CHECK_THROWS_AS(build_problem(x, Vector{1, 2, 3, 4}), RankError);
    }
    SUBCASE("nearly collinear columns beyond the condition limit") {
        const Matrix x{{1, 1}, {2, 2 + 1e-7}, {3, 3}, {4, 4}};
        CHECK_THROWS_AS(build_problem(x, Vector{1, 2, 3, 4}), RankError);
    }
}

TEST_CASE("centering then fitting equals fitting with an intercept column") {
    const RegressionProblem raw = random_problem(20, 2, 4);
    Matrix with_one(20, 3);
    for (std::size_t i = 0; i < 20; ++i) {
        with_one(i, 0) = raw.x(i, 0);
        with_one(i, 1) = raw.x(i, 1);
        with_one(i, 2) = 1.0;
    }
    Vector y = raw.y;
    for (double& v : y) v += 5.0;
    const OlsFit full = ols_fit(build_problem(with_one, y));
    const RegressionProblem c = center(build_problem(raw.x, y));
    const OlsFit centered = ols_fit(c);
    CHECK(centered.b[0] == doctest::Approx(full.b[0]));
    CHECK(centered.b[1] == doctest::Approx(full.b[1]));
    CHECK(recover_intercept(c, centered.b) == doctest::Approx(full.b[2]));
    CHECK(centered.sse == doctest::Approx(full.sse));
    for (std::size_t j = 0; j < 2; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < 20; ++i) s += c.x(i, j);
        CHECK(std::abs(s) < 1e-12);
    }
    CHECK_THROWS_AS(center(c), DomainError);
    CHECK_THROWS_AS(recover_intercept(raw, centered.b), DomainError);
}

TEST_CASE("diagonal whitening equals direct weighted least squares") {
    const RegressionProblem p = random_problem(10, 2, 21);
    Vector g(10);
    for (std::size_t i = 0; i < 10; ++i) g[i] = 0.5 + 0.3 * static_cast<double>(i);
    const OlsFit fit = ols_fit(whiten_diagonal(p, g));

    // Normal equations XᵀWX b = XᵀWy with W = diag(1/g), solved by Cramer's rule.
    double a00 = 0, a01 = 0, a11 = 0, r0 = 0, r1 = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        const double w = 1.0 / g[i];
        a00 += w * p.x(i, 0) * p.x(i, 0);
        a01 += w * p.x(i, 0) * p.x(i, 1);
        a11 += w * p.x(i, 1) * p.x(i, 1);
        r0 += w * p.x(i, 0) * p.y[i];
        r1 += w * p.x(i, 1) * p.y[i];
    }
    const double det = a00 * a11 - a01 * a01;
    CHECK(fit.b[0] == doctest::Approx((r0 * a11 - a01 * r1) / det));
    CHECK(fit.b[1] == doctest::Approx((a00 * r1 - a01 * r0) / det));

    Matrix gm(10, 10);
    for (std::size_t i = 0; i < 10; ++i) gm(i, i) = g[i];
    const OlsFit full = ols_fit(whiten(p, gm));
    CHECK(full.b[0] == doctest::Approx(fit.b[0]));
    CHECK(full.b[1] == doctest::Approx(fit.b[1]));

    CHECK_THROWS_AS(whiten_diagonal(p, Vector(9, 1.0)), DimensionError);
    Vector bad = g;
    bad[3] = 0.0;
    CHECK_THROWS_AS(whiten_diagonal(p, bad), DomainError);
    gm(0, 0) = -1.0;
    CHECK_THROWS_AS(whiten(p, gm), DomainError);
}

TEST_CASE("full-covariance whitening equals generalized least squares") {
    const RegressionProblem p = random_problem(6, 1, 30);
    Matrix g(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) g(i, j) = std::exp(-0.3 * std::abs(double(i) - double(j)));
    const OlsFit fit = ols_fit(whiten(p, g));
    const Matrix gi = spd_inverse(g);
    const Vector gx = gi * p.x.col(0);
    CHECK(fit.b[0] == doctest::Approx(dot(gx, p.y) / dot(gx, p.x.col(0))));
}

TEST_CASE("probable error conversion") {
    CHECK(sigma_from_probable_error(0.6745) == doctest::Approx(1.0));
    CHECK(sigma_from_probable_error(0.12) == doctest::Approx(0.12 / 0.6745));
    CHECK_THROWS_AS(sigma_from_probable_error(0.0), DomainError);
}

TEST_CASE("CSV parsing") {
    const CsvTable t = parse_csv("\xEF\xBB\xBF" "a,\"b c\",d\n1,2.5,+3\n\n-4,5e-1,6\n");
    CHECK(t.headers == std::vector<std::string>{"a", "b c", "d"});
    CHECK(t.rows.size() == 2);
    CHECK(t.numeric_column("b c") == Vector{2.5, 0.5});
    CHECK(t.numeric_column("d") == Vector{3, 6});
    CHECK_THROWS_AS(t.numeric_column("zz"), ParseError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("a,a\n1,2\n").numeric_column("a"), ParseError);
    CHECK_THROWS_AS(parse_csv("a\nx\n").numeric_column("a"), ParseError);
    CHECK_THROWS_AS(parse_csv("a\n1,5\n"), ParseError);
    CHECK_THROWS_AS(parse_double("inf"), ParseError);
    CHECK_THROWS_AS(parse_double("1,5"), ParseError);
    CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), ParseError);
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
}

}  // TEST_SUITE
