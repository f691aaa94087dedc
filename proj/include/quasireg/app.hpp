#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasireg/csv.hpp"
#include "quasireg/report.hpp"

namespace quasireg::app {

/// Process exit codes of the `quasireg` tool.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kParse = 3,       ///< missing file, malformed CSV/JSON, non-numeric cell
    kRank = 4,        ///< rank deficiency or n <= k
    kConstraint = 5,  ///< invalid selection rule
    kMismatch = 6,    ///< case study outside tolerance
    kInternal = 10,
};

int exit_code_for(const std::exception& e);

struct FitRequest {
    std::string data_path;
    std::string response;
    std::vector<std::string> regressors;
    bool center = false;
    bool intercept = false;
    /// Inverse-variance weights wᵢ; row i is scaled by √wᵢ.
    std::optional<std::string> weights_column;
    /// Probable errors peᵢ; σᵢ = peᵢ/0.6745 and row i is scaled by 1/σᵢ.
    std::optional<std::string> probable_error_column;
    std::optional<SelectionRule> rule;
    double alpha = 0.05;
};

/// "+,-,free" (also "0" or "*" for free).
SignRule parse_signs(const std::string& text);
/// "lo:hi,lo:hi", one interval per component.
RangeRule parse_range(const std::string& text);
/// "a1:a2".
BoxRule parse_box(const std::string& text);
std::string describe(const SelectionRule& rule);

/// ingest → preprocess → OLS → alternatives → optional selection → intervals.
Report cmd_fit(const FitRequest& request);
/// Same pipeline on an already parsed table.
Report fit_table(const CsvTable& table, const FitRequest& request, const std::string& input_name,
                 const std::string& digest);

struct SimulateRequest {
    std::optional<std::string> config_path;
    std::optional<int> table;
    std::optional<std::size_t> replications;  ///< overrides the config/preset
    std::optional<std::uint64_t> seed;        ///< overrides the config/preset
    unsigned threads = 1;
};

struct SimulationResult {
    std::vector<ExperimentSpec> specs;
    std::vector<RiskReport> reports;
    nlohmann::json document;
};

SimulationResult cmd_simulate(const SimulateRequest& request);

struct CaseCheck {
    std::string quantity;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed() const;
};

struct CaseStudyResult {
    std::string name;
    Report report;
    std::vector<CaseCheck> checks;
    bool passed() const;
};

/// "eclipse", "eclipse-pe04" or "diabetes"; data are compiled in.
CaseStudyResult cmd_case_study(const std::string& name);
std::string render_case_study(const CaseStudyResult& result);
nlohmann::json to_json(const CaseStudyResult& result);

}  // namespace quasireg::app
