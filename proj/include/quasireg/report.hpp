#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "quasireg/selection.hpp"
#include "quasireg/simulation.hpp"

namespace quasireg {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "quasireg.report/1";
inline constexpr const char* kRiskSchema = "quasireg.risk/1";

/// Rounds to 6 significant digits, the precision every report carries.
double round6(double v);

struct OlsBlock {
    Vector b;
    double s = 0.0;
    double sse = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    Vector eigenvalues;  ///< of (XᵀX)⁻¹, descending
};

struct QuasiBlock {
    double c_tilde = 0.0;
    double lambda1 = 0.0;
    Vector z1;
    double correction = 0.0;
    Vector b_plus;
    Vector b_minus;
    double ratio_exact = 0.0;
    double ratio_asymptotic = 0.0;
    std::optional<std::string> warning;
};

struct SelectionBlock {
    std::string rule;  ///< human-readable rule description
    bool ambiguous = false;
    std::optional<Vector> chosen;
    std::optional<std::string> source;
    std::vector<std::string> rationale;
};

struct IntervalRow {
    std::string center;  ///< "chosen", "b_plus" or "b_minus"
    std::size_t component = 0;
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct JointRegionBlock {
    std::string center;
    Vector center_value;
    Matrix shape;
    double radius = 0.0;
};

struct InferenceBlock {
    double alpha = 0.05;
    std::vector<IntervalRow> intervals;
    std::vector<JointRegionBlock> regions;
};

struct ProvenanceBlock {
    std::string version = kVersion;
    std::string input;
    std::string input_digest;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> preprocessing;
    std::vector<std::string> columns;  ///< regressor names in fit order
};

/// Everything a fit reports. Numbers are kept at full precision here and
/// rounded to six significant digits when serialized, so a parsed report
/// serializes back to the same document.
struct Report {
    OlsBlock ols;
    QuasiBlock quasi;
    std::optional<SelectionBlock> selection;
    InferenceBlock inference;
    std::optional<double> intercept;
    ProvenanceBlock provenance;
};

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
std::string render_table(const Report& report);

nlohmann::json to_json(const RiskReport& report);
nlohmann::json to_json(const MomentReport& report);
std::string render_table(const std::vector<RiskReport>& reports);

/// Parses one experiment object of a simulation config.
ExperimentSpec experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentSpec& spec);
/// Accepts either a single experiment object or {"experiments": [...]}.
std::vector<ExperimentSpec> experiments_from_config(const nlohmann::json& j);

/// Full simulate output: schema, provenance and one entry per experiment.
nlohmann::json simulation_document(const std::vector<ExperimentSpec>& specs,
                                   const std::vector<RiskReport>& reports,
                                   const std::string& config_digest);

}  // namespace quasireg
