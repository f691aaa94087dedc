#pragma once

#include <optional>
#include <string>

#include "quasireg/regression.hpp"

namespace quasireg {

/// The two alternative estimates b ± correction·z₁.
///
/// z₁ is the sign-normalized top eigenvector of (XᵀX)⁻¹, so which estimate is
/// labelled "plus" is fixed by that convention; the pair as a set is not.
struct QuasiAlternatives {
    Vector b_plus;
    Vector b_minus;
    double correction = 0.0;  ///< c̃·√(eᵀe)
    double c_tilde = 0.0;
    double lambda1 = 0.0;
    Vector z1;
    /// Set when λ₁ − λ₂ < 1e-8·λ₁, i.e. z₁ is not well determined.
    std::optional<std::string> warning;
};

struct QuasiCovariance {
    Matrix q;               ///< σ²[(XᵀX)⁻¹ − γ·λ₁·z₁z₁ᵀ]
    double lambda_q = 0.0;  ///< eigenvalue of Q along z₁: σ²λ₁(1 − γ)
    Vector eigen_rest;      ///< σ²λ₂..σ²λₖ, unchanged from σ²(XᵀX)⁻¹
};

struct FourthMomentReport {
    std::size_t component = 0;  ///< zero-based
    double mu4 = 0.0;
    double variance = 0.0;  ///< Q(j,j)
    double kurtosis_excess = 0.0;
    double a_norm_sq = 0.0;  ///< A_jᵀA_j
};

struct EfficiencyRatio {
    double exact = 0.0;
    double asymptotic = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const noexcept { return hi - lo; }
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

/// Joint confidence ellipsoid {β : (β − c)ᵀ shape⁻¹ (β − c) ≤ radius}.
struct JointRegion {
    Vector center;
    Matrix shape;  ///< Q̄ = Q/σ²
    double radius = 0.0;  ///< k·s²·F(k, n−k, 1−α)
    Matrix metric;  ///< Q̄⁻¹

    double distance(std::span<const double> beta) const;
    bool contains(std::span<const double> beta) const { return distance(beta) <= radius; }
};

/// (m/π)·Γ²((m+1)/2)/Γ²((m+2)/2) for m = n − k degrees of freedom; tends to 2/π.
double gamma_factor(std::size_t dof);

/// c̃ = √(λ₁/π)·Γ((n−k+1)/2)/Γ((n−k+2)/2), evaluated in log space.
double c_tilde(std::size_t n, std::size_t k, double lambda1);

/// Both alternatives. When eᵀe = 0 they coincide with b.
QuasiAlternatives alternatives(const OlsFit& fit);

/// sign(x) with sign(0) = +1.
inline double sign_nonneg(double x) noexcept { return x >= 0.0 ? 1.0 : -1.0; }

/// b − sign(z₁ᵀ(b − β))·correction·z₁, the estimate an oracle knowing β picks.
Vector oracle_select(const QuasiAlternatives& alts, const OlsFit& fit, const OracleContext& oracle);

/// Ratio of the optimal quasi-estimate's risk to the OLS risk.
EfficiencyRatio efficiency_ratio(const SymEigResult& gram_inverse_eig, std::size_t n, std::size_t k);

/// Covariance of the oracle-selected estimate under normal errors with
/// standard deviation `sigma`; sigma = 1 gives the design-only matrix Q̄.
QuasiCovariance quasi_covariance(const OlsFit& fit, double sigma);

/// Fourth central moment of component j (zero-based) of the oracle estimate.
FourthMomentReport fourth_moment(const OlsFit& fit, double sigma, std::size_t j);

/// chosen(j) ± t(n−k, 1−α/2)·√Q̄(j,j)·s. The Gaussian approximation of the
/// oracle estimate is used; s is taken from the fit.
Interval confidence_interval(std::span<const double> chosen, const OlsFit& fit, std::size_t j,
                             double alpha);

JointRegion joint_region(std::span<const double> chosen, const OlsFit& fit, double alpha);

namespace detail {

/// b − sign(qᵀδ)·c·√(eᵀe)·q for an arbitrary unit direction q. Only used to
/// check the risk reduction for directions other than z₁.
Vector corrected_estimate(const OlsFit& fit, std::span<const double> q, double c,
                          double projected_error_sign);

}  // namespace detail

}  // namespace quasireg
