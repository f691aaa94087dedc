#include "quasireg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quasireg {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kJacobiTol = 1e-13;
constexpr int kMaxSweeps = 100;

double frobenius(const Matrix& a, bool off_diagonal_only) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!off_diagonal_only || i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

void normalize_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (!v.empty() && v[best] < 0.0)
        for (double& x : v) x = -x;
}

SymEigResult sym_eig(const Matrix& input) {
    if (!input.square() || input.rows() == 0)
        throw DimensionError("sym_eig: matrix must be square and non-empty");
    if (!input.all_finite()) throw DomainError("sym_eig: non-finite entry");
    if (asymmetry(input) > kSymmetryTol) throw DomainError("sym_eig: matrix is not symmetric");

    const std::size_t n = input.rows();
    Matrix a = input;
    // Use the exact upper triangle so rotations act on a symmetric matrix.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
    Matrix v = Matrix::identity(n);

    const double threshold = kJacobiTol * frobenius(a, false);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (frobenius(a, true) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    SymEigResult out{Vector(n), Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]);
        Vector z = v.col(order[i]);
        normalize_sign(z);
        out.vectors.set_col(i, z);
    }
    return out;
}

Matrix cholesky(const Matrix& a) {
    if (!a.square()) throw DimensionError("cholesky: matrix not square");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
        if (!(d > 0.0)) throw RankError("cholesky: matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Matrix spd_solve(const Matrix& a, const Matrix& b) {
    if (b.rows() != a.rows()) throw DimensionError("spd_solve: right-hand side rows mismatch");
    const Matrix l = cholesky(a);
    const std::size_t n = a.rows();
    Matrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * x(p, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t p = i + 1; p < n; ++p) s -= l(p, i) * x(p, c);
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

Vector spd_solve(const Matrix& a, std::span<const double> b) {
    return spd_solve(a, Matrix::column(b)).col(0);
}

Matrix spd_inverse(const Matrix& a) {
    Matrix inv = spd_solve(a, Matrix::identity(a.rows()));
    for (std::size_t i = 0; i < inv.rows(); ++i)
        for (std::size_t j = i + 1; j < inv.cols(); ++j) {
            const double m = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = m;
            inv(j, i) = m;
        }
    return inv;
}

Matrix sym_inverse_sqrt(const Matrix& a) {
    const SymEigResult eig = sym_eig(a);
    const std::size_t n = a.rows();
    if (!(eig.values.back() > 0.0)) throw RankError("sym_inverse_sqrt: matrix is not positive definite");
    Matrix out(n, n);
    for (std::size_t l = 0; l < n; ++l) {
        const double w = 1.0 / std::sqrt(eig.values[l]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += w * eig.vectors(i, l) * eig.vectors(j, l);
    }
    return out;
}

}  // namespace quasireg
