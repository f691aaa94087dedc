#include "quasireg/quasi.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "quasireg/special.hpp"

namespace quasireg {

namespace {

constexpr double kTieTol = 1e-8;

void require_dof(std::size_t n, std::size_t k) {
    if (n <= k)
        throw RankError(fmt::format("insufficient degrees of freedom: n = {} must exceed k = {}", n, k));
}

// ln[Γ((m+1)/2)/Γ((m+2)/2)]
double log_gamma_ratio(std::size_t dof) {
    const double m = static_cast<double>(dof);
    return ln_gamma(0.5 * (m + 1.0)) - ln_gamma(0.5 * (m + 2.0));
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

Matrix design_covariance(const OlsFit& fit) {
    const double lambda1 = fit.gram_inverse_eig.values.front();
    const Vector z1 = fit.gram_inverse_eig.vector(0);
    return fit.gram_inverse - (gamma_factor(fit.dof()) * lambda1) * outer(z1, z1);
}

}  // namespace

double JointRegion::distance(std::span<const double> beta) const {
    const Vector d = subtract(beta, center);
    return dot(d, metric * d);
}

double gamma_factor(std::size_t dof) {
    if (dof == 0) throw RankError("insufficient degrees of freedom: n must exceed k");
    return static_cast<double>(dof) / std::numbers::pi * std::exp(2.0 * log_gamma_ratio(dof));
}

double c_tilde(std::size_t n, std::size_t k, double lambda1) {
    require_dof(n, k);
    if (!(lambda1 > 0.0)) throw DomainError("c_tilde: lambda1 must be positive");
    return std::sqrt(lambda1 / std::numbers::pi) * std::exp(log_gamma_ratio(n - k));
}

QuasiAlternatives alternatives(const OlsFit& fit) {
    if (fit.sse < 0.0) throw DomainError("alternatives: negative residual sum of squares");
    const SymEigResult& eig = fit.gram_inverse_eig;
    QuasiAlternatives alts;
    alts.lambda1 = eig.values.front();
    alts.z1 = eig.vector(0);
    alts.c_tilde = c_tilde(fit.n, fit.k, alts.lambda1);
    alts.correction = alts.c_tilde * std::sqrt(fit.sse);
    alts.b_plus = axpy(alts.correction, alts.z1, fit.b);
    alts.b_minus = axpy(-alts.correction, alts.z1, fit.b);
    if (eig.size() > 1 && eig.values[0] - eig.values[1] < kTieTol * eig.values[0]) {
        alts.warning = fmt::format(
            "largest eigenvalues of the inverse Gram matrix nearly tie ({:.6g} vs {:.6g}); "
            "correction direction is not well determined",
            eig.values[0], eig.values[1]);
    }
    return alts;
}

Vector oracle_select(const QuasiAlternatives& alts, const OlsFit& fit, const OracleContext& oracle) {
    if (oracle.beta_true.size() != fit.k)
        throw DimensionError("oracle_select: beta_true length differs from k");
    const Vector delta = subtract(fit.b, oracle.beta_true);
    return sign_nonneg(dot(alts.z1, delta)) > 0.0 ? alts.b_minus : alts.b_plus;
}

EfficiencyRatio efficiency_ratio(const SymEigResult& gram_inverse_eig, std::size_t n, std::size_t k) {
    require_dof(n, k);
    double trace = 0.0;
    for (double l : gram_inverse_eig.values) trace += l;
    const double share = gram_inverse_eig.values.front() / trace;
    const double m = static_cast<double>(n - k);
    const double shrink = 1.0 - 0.25 / m;
    return {1.0 - gamma_factor(n - k) * share,
            1.0 - (2.0 / std::numbers::pi) * shrink * shrink * share};
}

QuasiCovariance quasi_covariance(const OlsFit& fit, double sigma) {
    require_dof(fit.n, fit.k);
    if (!(sigma > 0.0)) throw DomainError("quasi_covariance: sigma must be positive");
    const double s2 = sigma * sigma;
    const auto& values = fit.gram_inverse_eig.values;
    QuasiCovariance out;
    out.q = s2 * design_covariance(fit);
    out.lambda_q = s2 * values.front() * (1.0 - gamma_factor(fit.dof()));
    for (std::size_t i = 1; i < values.size(); ++i) out.eigen_rest.push_back(s2 * values[i]);
    return out;
}

FourthMomentReport fourth_moment(const OlsFit& fit, double sigma, std::size_t j) {
    require_dof(fit.n, fit.k);
    if (!(sigma > 0.0)) throw DomainError("fourth_moment: sigma must be positive");
    if (j >= fit.k) throw DimensionError(fmt::format("fourth_moment: component {} out of range", j));

    const SymEigResult& eig = fit.gram_inverse_eig;
    const double lambda1 = eig.values.front();
    const double m = static_cast<double>(fit.dof());
    const double c = c_tilde(fit.n, fit.k, lambda1);
    const double c2 = c * c;
    const double z1j = eig.vectors(j, 0);

    // A_j = Σ_{i≥2} λᵢ zᵢ(j) X zᵢ
    Vector a(fit.n, 0.0);
    for (std::size_t i = 1; i < eig.size(); ++i) {
        const Vector xz = fit.design * eig.vector(i);
        const double w = eig.values[i] * eig.vectors(j, i);
        for (std::size_t r = 0; r < fit.n; ++r) a[r] += w * xz[r];
    }
    const double aa = dot(a, a);

    const double z2 = z1j * z1j;
    const double mu4_unit = z2 * z2 * (3.0 * lambda1 * lambda1 - 2.0 * m * lambda1 * c2 -
                                       m * (3.0 * m + 2.0) * c2 * c2) +
                            6.0 * z2 * (lambda1 - m * c2) * aa + 3.0 * aa * aa;

    const double s2 = sigma * sigma;
    FourthMomentReport out;
    out.component = j;
    out.mu4 = mu4_unit * s2 * s2;
    const double qjj = design_covariance(fit)(j, j);
    out.variance = qjj * s2;
    out.kurtosis_excess = mu4_unit / (qjj * qjj) - 3.0;
    out.a_norm_sq = aa;
    return out;
}

Interval confidence_interval(std::span<const double> chosen, const OlsFit& fit, std::size_t j,
                             double alpha) {
    check_alpha(alpha);
    require_dof(fit.n, fit.k);
    if (chosen.size() != fit.k) throw DimensionError("confidence_interval: estimate length differs from k");
    if (j >= fit.k) throw DimensionError("confidence_interval: component out of range");
    const double t = t_quantile(static_cast<int>(fit.dof()), 1.0 - alpha / 2.0);
    const double half = t * std::sqrt(design_covariance(fit)(j, j)) * fit.s;
    return {chosen[j] - half, chosen[j] + half};
}

JointRegion joint_region(std::span<const double> chosen, const OlsFit& fit, double alpha) {
    check_alpha(alpha);
    require_dof(fit.n, fit.k);
    if (chosen.size() != fit.k) throw DimensionError("joint_region: estimate length differs from k");
    JointRegion region;
    region.center.assign(chosen.begin(), chosen.end());
    region.shape = design_covariance(fit);
    region.metric = spd_inverse(region.shape);
    region.radius = static_cast<double>(fit.k) * fit.s * fit.s *
                    f_quantile(static_cast<int>(fit.k), static_cast<int>(fit.dof()), 1.0 - alpha);
    return region;
}

namespace detail {

Vector corrected_estimate(const OlsFit& fit, std::span<const double> q, double c,
                          double projected_error_sign) {
    if (q.size() != fit.k) throw DimensionError("corrected_estimate: direction length differs from k");
    return axpy(-sign_nonneg(projected_error_sign) * c * std::sqrt(fit.sse), q, fit.b);
}

}  // namespace detail

}  // namespace quasireg
