#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "quasireg/quasi.hpp"
#include "quasireg/random.hpp"

namespace quasireg {

namespace design {

struct Explicit {
    Matrix x;
};
/// n×1 column of ones: direct measurements of a single quantity.
struct Ones {
    std::size_t n = 10;
};
/// Centred two-column design with a prescribed column correlation.
struct Collinear {
    std::size_t n = 10;
    double correlation = 0.9955;
    std::uint64_t seed = 1;
};

}  // namespace design

using DesignSpec = std::variant<design::Explicit, design::Ones, design::Collinear>;

struct CollinearDesign {
    Matrix x;
    double correlation = 0.0;  ///< achieved sample correlation
    double eigen_ratio = 0.0;  ///< λmax/λmin of (XᵀX)⁻¹
};

/// x₁ is a centred standard normal draw scaled to unit norm; x₂ = ρx₁ + √(1−ρ²)u
/// with u centred, orthogonalised against x₁ and scaled to unit norm. The
/// sample correlation therefore equals ρ up to rounding.
CollinearDesign gen_collinear_design(std::size_t n, double target_correlation, std::uint64_t seed);

Matrix materialize(const DesignSpec& spec);

enum class EstimatorKind { ols, quasi_oracle, ols_box, quasi_box };

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::ols;
    double a1 = 0.0;  ///< box bounds, box estimators only
    double a2 = 0.0;

    std::string label() const;
    friend bool operator==(const EstimatorSpec&, const EstimatorSpec&) = default;
};

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

struct ExperimentSpec {
    std::string name;
    DesignSpec design = design::Ones{};
    Vector beta_true{1.0};
    ErrorModel error_model = error_model::Normal{};
    std::size_t replications = 10000;
    std::uint64_t seed = 1919;
    std::vector<EstimatorSpec> estimators{{EstimatorKind::ols}, {EstimatorKind::quasi_oracle}};
};

/// Throws on empty replications, bad β length, invalid design or error model,
/// or malformed boxes.
void validate(const ExperimentSpec& spec);

struct RunOptions {
    unsigned threads = 1;  ///< 0 picks the hardware concurrency
};

struct EstimatorRisk {
    EstimatorSpec estimator;
    double risk = 0.0;  ///< mean squared distance to β
    double se = 0.0;    ///< Monte-Carlo standard error of `risk`
};

struct DesignSummary {
    std::size_t n = 0;
    std::size_t k = 0;
    double lambda1 = 0.0;
    double trace = 0.0;        ///< Σλᵢ of (XᵀX)⁻¹
    double eigen_ratio = 1.0;  ///< λmax/λmin of (XᵀX)⁻¹
    std::optional<double> column_correlation;  ///< k = 2 only
};

struct RiskReport {
    std::string name;
    std::string error_model;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    DesignSummary design;
    std::vector<EstimatorRisk> risks;
    /// quasi_oracle risk over ols risk, when both estimators ran.
    std::optional<double> ratio;
    std::optional<double> ratio_se;
    double theoretical_ratio = 0.0;  ///< closed form under normal i.i.d. errors
    /// σ²Σλᵢ with σ² the marginal error variance; exact for i.i.d. errors.
    double iid_ols_risk = 0.0;

    const EstimatorRisk* find(const EstimatorSpec& estimator) const;
};

/// Per-replication evaluation of one design: Y = Xβ + ε, OLS, both
/// alternatives and the oracle choice, without refactorizing XᵀX.
class ReplicationKernel {
public:
    ReplicationKernel(const Matrix& x, Vector beta_true);

    struct Result {
        Vector b;
        Vector oracle;       ///< oracle-selected quasi estimate
        double sse = 0.0;
        double correction = 0.0;
        double projected_error = 0.0;  ///< z₁ᵀ(b − β)
    };

    /// `errors` has one entry per row of X.
    Result evaluate(std::span<const double> errors) const;

    const OlsFit& reference_fit() const noexcept { return reference_; }
    const Vector& beta_true() const noexcept { return beta_; }

private:
    OlsFit reference_;  ///< fit of the noiseless response Xβ; supplies the eigen data
    Vector beta_;
    Vector xbeta_;
    Matrix hat_;  ///< (XᵀX)⁻¹Xᵀ
    Vector z1_;
    double c_tilde_ = 0.0;
};

RiskReport run_risk_experiment(const ExperimentSpec& spec, RunOptions options = {});
/// Requires k = 1 and at least one box estimator.
RiskReport run_box_experiment(const ExperimentSpec& spec, RunOptions options = {});

struct PropertyCheck {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;  ///< absolute bound on |observed − expected| (or the stated criterion)
    double standard_error = 0.0;
    bool passed = false;
};

struct MomentReport {
    std::string name;
    std::size_t replications = 0;
    std::vector<PropertyCheck> checks;

    bool all_passed() const;
    const PropertyCheck* find(const std::string& name) const;
};

/// Monte-Carlo checks of the oracle estimate's mean, covariance, projected
/// error variance, fourth moments and risk reduction. Covariance and fourth
/// moment checks run only for normal errors; the projection check runs for
/// any i.i.d. model.
MomentReport run_moment_checks(const ExperimentSpec& spec, RunOptions options = {});

/// Experiment grids behind the standard comparison tables: 1 (ones(10), four
/// error models), 2 (collinear n = 10, ρ = 0.9955, four error models), 4/5/6
/// (ones(6), β = 1, five boxes; normal, uniform, mixture errors).
std::vector<ExperimentSpec> table_preset(int table, std::size_t replications, std::uint64_t seed);

/// The five boxes of the box comparison tables.
std::vector<std::pair<double, double>> standard_boxes();

}  // namespace quasireg
