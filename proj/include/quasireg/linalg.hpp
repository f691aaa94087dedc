#pragma once

#include "quasireg/matrix.hpp"

namespace quasireg {

/// Full spectrum of a symmetric matrix.
///
/// Eigenvalues are sorted descending; column i of `vectors` pairs with
/// `values[i]`. Each eigenvector is sign-normalized so that its
/// largest-magnitude entry is positive (lowest index wins ties), which makes
/// the decomposition unique for simple eigenvalues.
struct SymEigResult {
    Vector values;
    Matrix vectors;

    std::size_t size() const noexcept { return values.size(); }
    Vector vector(std::size_t i) const { return vectors.col(i); }
};

/// Cyclic Jacobi eigensolver. Sweeps until the off-diagonal Frobenius norm
/// falls below 1e-13 times the Frobenius norm of the input.
///
/// Throws DimensionError for non-square or empty input and DomainError when
/// the input is non-finite or asymmetric beyond 1e-12 relative.
SymEigResult sym_eig(const Matrix& a);

/// Flip `v` so its largest-magnitude entry is positive.
void normalize_sign(std::span<double> v);

/// Lower-triangular Cholesky factor L with A = L·Lᵀ. Throws RankError when
/// a pivot is not strictly positive.
Matrix cholesky(const Matrix& a);

/// Solves A·X = B for symmetric positive-definite A.
Matrix spd_solve(const Matrix& a, const Matrix& b);
Vector spd_solve(const Matrix& a, std::span<const double> b);

/// A⁻¹ for SPD A, symmetrized.
Matrix spd_inverse(const Matrix& a);

/// Symmetric inverse square root A^{-1/2} = Z·diag(λ^{-1/2})·Zᵀ. Throws
/// RankError when A has a non-positive eigenvalue.
Matrix sym_inverse_sqrt(const Matrix& a);

}  // namespace quasireg
