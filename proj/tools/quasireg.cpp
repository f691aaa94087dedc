// quasireg: two-stage quasi-estimation for linear regression.
//
//   quasireg fit data.csv --response Y --regressors X1,X2 --signs +,-
//   quasireg simulate --table 1 --reps 10000 --seed 1919 --output json
//   quasireg case-study eclipse

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "quasireg/app.hpp"
#include "quasireg/error.hpp"

namespace app = quasireg::app;

namespace {

enum class Output { table, json };

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Two-stage quasi-estimation for linear regression"};
    cli.set_version_flag("--version", std::string(quasireg::kVersion));
    cli.require_subcommand(1);

    Output output = Output::table;
    const std::map<std::string, Output> outputs{{"table", Output::table}, {"json", Output::json}};
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", output, "table or json")
            ->transform(CLI::CheckedTransformer(outputs, CLI::ignore_case));
    };

    // fit
    app::FitRequest fit;
    std::string regressors;
    std::optional<std::string> signs, range, box, weights, pe;
    std::optional<std::uint64_t> fit_seed;
    auto* fit_cmd = cli.add_subcommand("fit", "Fit a CSV and report both alternatives");
    fit_cmd->add_option("data", fit.data_path, "CSV file with a header row")->required();
    fit_cmd->add_option("--response,-y", fit.response, "response column")->required();
    fit_cmd->add_option("--regressors,-x", regressors, "comma-separated regressor columns");
    fit_cmd->add_flag("--center", fit.center, "subtract column means before fitting");
    fit_cmd->add_flag("--intercept", fit.intercept, "append a column of ones");
    auto* w_opt = fit_cmd->add_option("--weights", weights, "column of inverse-variance weights");
    fit_cmd->add_option("--probable-error", pe, "column of probable errors (sigma = pe/0.6745)")->excludes(w_opt);
    auto* s_opt = fit_cmd->add_option("--signs", signs, "sign rule, e.g. +,-,free");
    auto* r_opt = fit_cmd->add_option("--range", range, "admissible ranges, e.g. 0:1.9,-inf:0")->excludes(s_opt);
    fit_cmd->add_option("--box", box, "one-dimensional box a1:a2")->excludes(s_opt)->excludes(r_opt);
    fit_cmd->add_option("--alpha", fit.alpha, "significance level for intervals")->check(CLI::Range(0.0, 1.0));
    fit_cmd->add_option("--seed", fit_seed, "recorded in the provenance block");
    add_output(fit_cmd);

    // simulate
    app::SimulateRequest sim;
    auto* sim_cmd = cli.add_subcommand("simulate", "Monte-Carlo risk comparison");
    auto* cfg_opt = sim_cmd->add_option("config", sim.config_path, "JSON experiment config");
    sim_cmd->add_option("--table", sim.table, "preset grid")->check(CLI::IsMember(std::vector<int>{1, 2, 4, 5, 6}))->excludes(cfg_opt);
    sim_cmd->add_option("--reps", sim.replications, "replications per experiment")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim.seed, "root seed");
    sim_cmd->add_option("--threads", sim.threads, "worker threads, 0 = all cores");
    double sim_alpha = 0.05;
    sim_cmd->add_option("--alpha", sim_alpha, "accepted for symmetry; unused by risk experiments");
    add_output(sim_cmd);

    // case-study
    std::string study;
    auto* case_cmd = cli.add_subcommand("case-study", "Run a bundled example and compare with reference values");
    case_cmd->add_option("name", study, "eclipse, eclipse-pe04 or diabetes")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>{"eclipse", "eclipse-pe04", "diabetes"}));
    add_output(case_cmd);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            fit.regressors.clear();
            if (!regressors.empty()) {
                std::string cur;
                std::istringstream in(regressors);
                while (std::getline(in, cur, ',')) fit.regressors.push_back(cur);
            }
            fit.weights_column = weights;
            fit.probable_error_column = pe;
            if (signs) fit.rule = app::parse_signs(*signs);
            if (range) fit.rule = app::parse_range(*range);
            if (box) fit.rule = app::parse_box(*box);
            quasireg::Report report = app::cmd_fit(fit);
            report.provenance.seed = fit_seed;
            if (output == Output::json) print(quasireg::to_json(report));
            else std::cout << quasireg::render_table(report);
            return app::kOk;
        }
        if (sim_cmd->parsed()) {
            const app::SimulationResult result = app::cmd_simulate(sim);
            if (output == Output::json) print(result.document);
            else std::cout << quasireg::render_table(result.reports);
            return app::kOk;
        }
        const app::CaseStudyResult result = app::cmd_case_study(study);
        if (output == Output::json) print(app::to_json(result));
        else std::cout << app::render_case_study(result);
        return result.passed() ? app::kOk : app::kMismatch;
    } catch (const std::exception& e) {
        std::cerr << "quasireg: " << e.what() << '\n';
        return app::exit_code_for(e);
    }
}
