#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "quasireg/error.hpp"
#include "quasireg/linalg.hpp"
#include "quasireg/random.hpp"
#include "quasireg/special.hpp"

using namespace quasireg;

namespace {

Matrix random_spd(std::size_t k, std::uint64_t seed) {
    RandomStream rs(seed, 0);
    Matrix a(k + 2, k);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) a(i, j) = rs.normal();
    return gram(a);
}

// Explicit cofactor inverse of a 3x3 matrix.
Matrix inverse3(const Matrix& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(0, 2);
    const double d = m(1, 0), e = m(1, 1), f = m(1, 2);
    const double g = m(2, 0), h = m(2, 1), i = m(2, 2);
    const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    return (1.0 / det) * Matrix{{e * i - f * h, c * h - b * i, b * f - c * e},
                                {f * g - d * i, a * i - c * g, c * d - a * f},
                                {d * h - e * g, b * g - a * h, a * e - b * d}};
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return norm_inf(subtract(a.entries(), b.entries())); }

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("matrix arithmetic and shape checks") {
    const Matrix a{{1, 2}, {3, 4}, {5, 6}};
    CHECK(a.rows() == 3);
    CHECK(a.cols() == 2);
    const Matrix g = gram(a);
    CHECK(g == Matrix{{35, 44}, {44, 56}});
    CHECK(gram(a) == a.transposed() * a);
    const Vector v = a * Vector{1, -1};
    CHECK(v == Vector{-1, -1, -1});
    CHECK(transpose_times(a, Vector{1, 1, 1}) == Vector{9, 12});
    CHECK(axpy(2.0, Vector{1, 2}, Vector{10, 20}) == Vector{12, 24});
    CHECK(dot(Vector{1, 2, 3}, Vector{4, 5, 6}) == 32.0);
    CHECK(norm2(Vector{3, 4}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(a * a, DimensionError);
    CHECK_THROWS_AS((Matrix(2, 2, Vector{1, 2, 3})), DimensionError);
    CHECK(Matrix::identity(2) * a.transposed() == a.transposed());
}

TEST_CASE("eigen-decomposition of the identity") {
    const SymEigResult r = sym_eig(Matrix::identity(2));
    CHECK(r.values == Vector{1.0, 1.0});
    const Matrix v = r.vectors;
    CHECK(max_abs_diff(v.transposed() * v, Matrix::identity(2)) < 1e-15);
}

TEST_CASE("eigen-decomposition of a 2x2 matrix matches the characteristic polynomial") {
    const Matrix a{{2, 1}, {1, 2}};
    const SymEigResult r = sym_eig(a);
    CHECK(r.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    // Sign convention: largest-magnitude entry positive, lowest index on ties.
    const Vector z1 = r.vector(0);
    CHECK(z1[0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(z1[1] == doctest::Approx(std::sqrt(0.5)));
    const Vector z2 = r.vector(1);
    CHECK(z2[0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(z2[1] == doctest::Approx(-std::sqrt(0.5)));
}

TEST_CASE("eigenvalues of random SPD matrices satisfy det(A - lambda I) = 0 and reconstruct A") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Matrix a = random_spd(3, seed);
        const SymEigResult r = sym_eig(a);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(r.values[i] >= r.values[i + 1]);
        // Characteristic polynomial of a 3x3 symmetric matrix.
        const double tr = a(0, 0) + a(1, 1) + a(2, 2);
        const double c2 = a(0, 0) * a(1, 1) + a(0, 0) * a(2, 2) + a(1, 1) * a(2, 2) - a(0, 1) * a(0, 1) -
                          a(0, 2) * a(0, 2) - a(1, 2) * a(1, 2);
        const Matrix inv = inverse3(a);
        const double det = 1.0 / (inv(0, 0) * (inv(1, 1) * inv(2, 2) - inv(1, 2) * inv(2, 1)) -
                                  inv(0, 1) * (inv(1, 0) * inv(2, 2) - inv(1, 2) * inv(2, 0)) +
                                  inv(0, 2) * (inv(1, 0) * inv(2, 1) - inv(1, 1) * inv(2, 0)));
        const double scale = tr * tr * tr;
        for (double l : r.values) CHECK(std::abs(-l * l * l + tr * l * l - c2 * l + det) < 1e-10 * scale);

        Matrix back(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            const Vector z = r.vector(i);
            back = back + r.values[i] * outer(z, z);
        }
        CHECK(max_abs_diff(back, a) < 1e-12 * a.norm_inf());
        CHECK(max_abs_diff(r.vectors.transposed() * r.vectors, Matrix::identity(3)) < 1e-13);
    }
}

TEST_CASE("eigen-decomposition rejects bad input") {
    CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), DimensionError);
    CHECK_THROWS_AS(sym_eig(Matrix{{1, 2}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(sym_eig(Matrix{{1, NAN}, {NAN, 1}}), DomainError);
}

TEST_CASE("sign normalization") {
    Vector v{0.1, -0.9, 0.2};
    normalize_sign(v);
    CHECK(v == Vector{-0.1, 0.9, -0.2});
    Vector tie{-0.5, 0.5};
    normalize_sign(tie);
    CHECK(tie == Vector{0.5, -0.5});
}

TEST_CASE("Cholesky-based solves and inverse agree with the explicit 3x3 inverse") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix a = random_spd(3, seed);
        const Matrix inv = spd_inverse(a);
        CHECK(max_abs_diff(inv, inverse3(a)) < 1e-10 * inverse3(a).norm_inf());
        const Matrix l = cholesky(a);
        CHECK(max_abs_diff(l * l.transposed(), a) < 1e-12 * a.norm_inf());
        const Vector rhs{1, 2, 3};
        const Vector x = spd_solve(a, rhs);
        CHECK(norm_inf(subtract(a * x, rhs)) < 1e-10);
        const Matrix w = sym_inverse_sqrt(a);
        CHECK(max_abs_diff(w * a * w, Matrix::identity(3)) < 1e-10);
    }
    CHECK_THROWS_AS(cholesky(Matrix{{1, 2}, {2, 1}}), RankError);
}

TEST_CASE("log-gamma") {
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ln_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    double fact = 1.0;
    for (int n = 2; n <= 20; ++n) {
        fact *= n - 1;
        CHECK(ln_gamma(n) == doctest::Approx(std::log(fact)).epsilon(1e-13));
    }
    for (double x = 0.05; x < 60; x *= 1.37) CHECK(ln_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
    // Γ(x+1) = xΓ(x)
    for (double x = 0.3; x < 30; x += 1.7) CHECK(ln_gamma(x + 1) - ln_gamma(x) == doctest::Approx(std::log(x)));
    CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
}

TEST_CASE("Laplace function against quadrature") {
    CHECK(laplace_phi(0.0) == 0.0);
    for (double x = -4.0; x <= 4.0; x += 0.37) CHECK(laplace_phi(x) == doctest::Approx(oracle::erf(x)).epsilon(1e-11));
    CHECK(laplace_phi(1e3) == 1.0);
    CHECK(laplace_phi(-1e3) == -1.0);
}

TEST_CASE("t distribution against quadrature and bisection") {
    for (int df : {1, 2, 3, 5, 8, 9, 30}) {
        for (double t : {-3.0, -1.2, 0.0, 0.4, 2.5}) CHECK(t_cdf(df, t) == doctest::Approx(oracle::t_cdf(df, t)).epsilon(1e-9));
        for (double p : {0.6, 0.9, 0.975, 0.995}) {
            const double ref = oracle::bisect([df](double t) { return oracle::t_cdf(df, t); }, p, 0.0, 200.0);
            CHECK(t_quantile(df, p) == doctest::Approx(ref).epsilon(1e-7));
            CHECK(t_quantile(df, 1.0 - p) == doctest::Approx(-t_quantile(df, p)));
        }
    }
    CHECK(t_quantile(4, 0.5) == 0.0);
    CHECK(t_quantile(2, 0.975) == doctest::Approx(4.302653).epsilon(1e-6));
    CHECK(t_quantile(9, 0.975) == doctest::Approx(2.262157).epsilon(1e-6));
    CHECK_THROWS_AS(t_quantile(0, 0.9), DomainError);
    CHECK_THROWS_AS(t_quantile(3, 1.0), DomainError);
    CHECK_THROWS_AS(t_quantile(3, 0.0), DomainError);
}

TEST_CASE("F distribution against quadrature and bisection") {
    for (auto [d1, d2] : {std::pair{2, 8}, {2, 1}, {3, 7}, {5, 20}}) {
        for (double x : {0.2, 1.0, 3.5}) CHECK(f_cdf(d1, d2, x) == doctest::Approx(oracle::f_cdf(d1, d2, x)).epsilon(1e-8));
        for (double p : {0.5, 0.9, 0.95}) {
            const double ref = oracle::bisect([=](double x) { return oracle::f_cdf(d1, d2, x); }, p, 0.0, 1e3);
            CHECK(f_quantile(d1, d2, p) == doctest::Approx(ref).epsilon(1e-6));
        }
    }
    CHECK(f_quantile(2, 8, 0.95) == doctest::Approx(4.458970).epsilon(1e-6));
    CHECK(f_cdf(3, 4, 0.0) == 0.0);
    CHECK_THROWS_AS(f_quantile(0, 3, 0.5), DomainError);
}

TEST_CASE("random streams are reproducible and independent of each other") {
    RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_c |= x != c.next_u64();
        differs_d |= x != d.next_u64();
    }
    CHECK(differs_c);
    CHECK(differs_d);
    CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("uniform and normal draws have the right moments") {
    RandomStream rs(2024, 0);
    const int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rs.uniform01();
        CHECK_MESSAGE((u >= 0.0 && u < 1.0), "uniform01 out of range");
        su += u;
        su2 += u * u;
        const double z = rs.normal();
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(su2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(std::abs(sn / n) < 4.0 / std::sqrt(n));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("error models: validation, description and empirical variance") {
    using namespace error_model;
    CHECK_THROWS_AS(validate(Normal{0.0}), DomainError);
    CHECK_THROWS_AS(validate(Uniform{1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(Mixture{1.0, 0.5, 2.0, 0.6}), DomainError);
    CHECK_THROWS_AS(validate(ArExponential{1.0, 0.0}), DomainError);
    CHECK(describe(Normal{1.0}) == "normal(sigma=1)");

    const std::vector<ErrorModel> models{Normal{2.0}, Uniform{-2.0, 2.0}, Mixture{1.0, 0.8, 10.0, 0.2},
                                         ArExponential{1.0, 0.3}};
    CHECK(variance(models[0]) == doctest::Approx(4.0));
    CHECK(variance(models[1]) == doctest::Approx(16.0 / 12.0));
    CHECK(variance(models[2]) == doctest::Approx(0.8 + 20.0));
    CHECK(variance(models[3]) == doctest::Approx(1.0));
    for (const ErrorModel& m : models) {
        RandomStream rs(5, 1);
        const Vector e = sample_errors(m, 400000, rs);
        double s = 0, s2 = 0;
        for (double x : e) {
            s += x;
            s2 += x * x;
        }
        const double mean = s / static_cast<double>(e.size());
        CHECK(s2 / static_cast<double>(e.size()) - mean * mean == doctest::Approx(variance(m)).epsilon(0.03));
    }
    RandomStream rs(1, 1);
    CHECK_THROWS_AS(sample_errors(Normal{1.0}, 0, rs), DomainError);
}

TEST_CASE("AR error model has exponential autocorrelation") {
    const double q = 0.3;
    RandomStream rs(11, 3);
    const int reps = 20000;
    double lag0 = 0, lag1 = 0, lag3 = 0;
    for (int r = 0; r < reps; ++r) {
        const Vector e = sample_errors(error_model::ArExponential{1.0, q}, 10, rs);
        lag0 += e[5] * e[5];
        lag1 += e[5] * e[6];
        lag3 += e[2] * e[5];
    }
    CHECK(lag0 / reps == doctest::Approx(1.0).epsilon(0.04));
    CHECK(lag1 / reps == doctest::Approx(std::exp(-q)).epsilon(0.05));
    CHECK(lag3 / reps == doctest::Approx(std::exp(-3 * q)).epsilon(0.08));
}

}  // TEST_SUITE
