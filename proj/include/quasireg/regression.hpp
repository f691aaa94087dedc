#pragma once

#include <optional>
#include <string>
#include <variant>

#include "quasireg/linalg.hpp"

namespace quasireg {

namespace provenance {

struct Raw {};
/// Column means of X and the mean of Y that were subtracted.
struct Centered {
    Vector x_means;
    double y_mean = 0.0;
};
/// Rows were premultiplied by G^{-1/2}. `weights` holds the per-row scale
/// factors 1/√gᵢ when G is diagonal and is empty otherwise.
struct Whitened {
    Vector weights;
    std::string description;
};

}  // namespace provenance

using Provenance = std::variant<provenance::Raw, provenance::Centered, provenance::Whitened>;

/// Y = Xβ + ε with n observations and k regressors.
struct RegressionProblem {
    Matrix x;
    Vector y;
    Provenance provenance = provenance::Raw{};

    std::size_t n() const noexcept { return x.rows(); }
    std::size_t k() const noexcept { return x.cols(); }
};

/// Ordinary least squares fit together with the eigenstructure of (XᵀX)⁻¹.
struct OlsFit {
    Vector b;
    Vector residuals;
    double sse = 0.0;
    double s = 0.0;  ///< √(sse / (n − k))
    Matrix gram_inverse;
    SymEigResult gram_inverse_eig;
    Matrix design;  ///< X the fit was computed from.
    std::size_t n = 0;
    std::size_t k = 0;

    std::size_t dof() const noexcept { return n - k; }
};

/// Simulation-only truth.
struct OracleContext {
    Vector beta_true;
    double sigma_true = 1.0;
};

/// Validates shapes, finiteness, n > k and full column rank.
RegressionProblem build_problem(Matrix x, Vector y);

/// Subtracts column means from X and the mean from Y. The result is not
/// re-validated: a constant column becomes zero and is reported by ols_fit.
RegressionProblem center(const RegressionProblem& problem);

/// Premultiplies X and Y by G^{-1/2} for a full SPD error covariance shape G.
RegressionProblem whiten(const RegressionProblem& problem, const Matrix& g);
/// Diagonal G given by its entries gᵢ (relative error variances); row i is
/// scaled by 1/√gᵢ.
RegressionProblem whiten_diagonal(const RegressionProblem& problem, std::span<const double> g);

/// Converts a probable error to a standard deviation (pe = 0.6745σ).
double sigma_from_probable_error(double pe);

/// Throws RankError when XᵀX is not positive definite or its condition
/// exceeds 1e10 (minimum eigenvalue of (XᵀX)⁻¹ relative to its maximum).
OlsFit ols_fit(const RegressionProblem& problem);

/// L² = σ² Σλᵢ, the quadratic risk of OLS.
double ols_risk(const SymEigResult& gram_inverse_eig, double sigma);

/// Intercept of the uncentered model, ȳ − x̄ᵀb. Requires centered provenance.
double recover_intercept(const RegressionProblem& centered, std::span<const double> b);

}  // namespace quasireg
