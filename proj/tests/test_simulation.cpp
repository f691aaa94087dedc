#include <cmath>

#include "doctest.h"

#include "quasireg/error.hpp"
#include "quasireg/simulation.hpp"

using namespace quasireg;

namespace {

ExperimentSpec small_spec(std::size_t reps = 2000) {
    ExperimentSpec s;
    s.name = "small";
    s.design = design::Ones{10};
    s.beta_true = {1.0};
    s.replications = reps;
    s.seed = 99;
    return s;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("replication kernel matches the step-by-step pipeline") {
    const CollinearDesign cd = gen_collinear_design(10, 0.9, 3);
    const Vector beta{1.0, -1.0};
    const ReplicationKernel kernel(cd.x, beta);
    RandomStream rs(1, 0);
    for (int r = 0; r < 20; ++r) {
        const Vector eps = sample_errors(error_model::Normal{1.0}, 10, rs);
        Vector y = cd.x * beta;
        for (std::size_t i = 0; i < 10; ++i) y[i] += eps[i];
        const OlsFit fit = ols_fit(build_problem(cd.x, y));
        const QuasiAlternatives alts = alternatives(fit);
        const Vector chosen = oracle_select(alts, fit, {beta, 1.0});
        const auto k = kernel.evaluate(eps);
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(k.b[j] == doctest::Approx(fit.b[j]).epsilon(1e-10));
            CHECK(k.oracle[j] == doctest::Approx(chosen[j]).epsilon(1e-10));
        }
        CHECK(k.sse == doctest::Approx(fit.sse).epsilon(1e-9));
        CHECK(k.correction == doctest::Approx(alts.correction).epsilon(1e-9));
    }
    CHECK_THROWS_AS(kernel.evaluate(Vector(9, 0.0)), DimensionError);
    CHECK_THROWS_AS(ReplicationKernel(cd.x, Vector{1.0}), DimensionError);
}

TEST_CASE("collinear design generator") {
    for (double rho : {0.0, 0.5, 0.9955, -0.8}) {
        const CollinearDesign cd = gen_collinear_design(10, rho, 7);
        CHECK(cd.x.rows() == 10);
        CHECK(cd.x.cols() == 2);
        CHECK(cd.correlation == doctest::Approx(rho).epsilon(1e-12));
        for (std::size_t j = 0; j < 2; ++j) {
            const Vector c = cd.x.col(j);
            double s = 0;
            for (double v : c) s += v;
            CHECK(std::abs(s) < 1e-12);
            CHECK(norm2(c) == doctest::Approx(1.0));
        }
        // Unit-norm columns: the Gram eigenvalues are 1 ± ρ.
        CHECK(cd.eigen_ratio == doctest::Approx((1 + std::abs(rho)) / (1 - std::abs(rho))).epsilon(1e-9));
    }
    CHECK(gen_collinear_design(10, 0.9955, 1).x == gen_collinear_design(10, 0.9955, 1).x);
    CHECK_FALSE(gen_collinear_design(10, 0.9955, 1).x == gen_collinear_design(10, 0.9955, 2).x);
    CHECK_THROWS_AS(gen_collinear_design(2, 0.5, 1), DomainError);
    CHECK_THROWS_AS(gen_collinear_design(10, 1.0, 1), DomainError);
}

TEST_CASE("experiment validation") {
    ExperimentSpec s = small_spec();
    CHECK_NOTHROW(validate(s));
    SUBCASE("no replications") {
        s.replications = 0;
        CHECK_THROWS_AS(validate(s), DomainError);
    }
    SUBCASE("beta length") {
        s.beta_true = {1.0, 2.0};
        CHECK_THROWS_AS(validate(s), DimensionError);
    }
    SUBCASE("no estimators") {
        s.estimators.clear();
        CHECK_THROWS_AS(validate(s), DomainError);
    }
    SUBCASE("inverted box") {
        s.estimators.push_back({EstimatorKind::ols_box, 1.5, 0.5});
        CHECK_THROWS_AS(validate(s), ConstraintError);
    }
    SUBCASE("box on a two-column design") {
        s.design = design::Collinear{};
        s.beta_true = {1.0, 1.0};
        s.estimators.push_back({EstimatorKind::quasi_box, 0.5, 1.5});
        CHECK_THROWS_AS(validate(s), ConstraintError);
    }
    SUBCASE("invalid error model") {
        s.error_model = error_model::Uniform{1.0, -1.0};
        CHECK_THROWS_AS(validate(s), DomainError);
    }
    SUBCASE("design with n = k") {
        s.design = design::Ones{1};
        CHECK_THROWS_AS(validate(s), RankError);
    }
}

TEST_CASE("results do not depend on the thread count and are reproducible") {
    for (int table : {1, 4}) {
        for (const ExperimentSpec& s : table_preset(table, 3000, 5)) {
            const RiskReport a = run_risk_experiment(s, {1});
            const RiskReport b = run_risk_experiment(s, {3});
            const RiskReport c = run_risk_experiment(s, {1});
            REQUIRE(a.risks.size() == b.risks.size());
            for (std::size_t i = 0; i < a.risks.size(); ++i) {
                CHECK(a.risks[i].risk == b.risks[i].risk);
                CHECK(a.risks[i].se == b.risks[i].se);
                CHECK(a.risks[i].risk == c.risks[i].risk);
            }
            CHECK(a.ratio == b.ratio);
        }
    }
    ExperimentSpec s = small_spec();
    const RiskReport r1 = run_risk_experiment(s);
    s.seed = 100;
    CHECK(run_risk_experiment(s).risks[0].risk != r1.risks[0].risk);
}

TEST_CASE("risk experiment under normal errors agrees with the closed forms") {
    ExperimentSpec s = small_spec(40000);
    const RiskReport r = run_risk_experiment(s);
    REQUIRE(r.ratio.has_value());
    CHECK(std::abs(*r.ratio - r.theoretical_ratio) < 3 * *r.ratio_se);
    const EstimatorRisk* ols = r.find({EstimatorKind::ols});
    REQUIRE(ols != nullptr);
    CHECK(std::abs(ols->risk - r.iid_ols_risk) < 3 * ols->se);
    CHECK(r.design.trace == doctest::Approx(0.1));
    CHECK(r.design.eigen_ratio == doctest::Approx(1.0));
    CHECK_FALSE(r.design.column_correlation.has_value());
    CHECK(r.find({EstimatorKind::ols_box, 0.0, 1.0}) == nullptr);
}

TEST_CASE("box experiments") {
    const auto specs = table_preset(4, 4000, 3);
    REQUIRE(specs.size() == 1);
    const RiskReport r = run_box_experiment(specs[0]);
    CHECK(r.risks.size() == 12);
    for (const auto& [a1, a2] : standard_boxes()) {
        const EstimatorRisk* ob = r.find({EstimatorKind::ols_box, a1, a2});
        const EstimatorRisk* qb = r.find({EstimatorKind::quasi_box, a1, a2});
        REQUIRE(ob != nullptr);
        REQUIRE(qb != nullptr);
        CHECK(qb->risk < ob->risk);
        // Clamping can only help OLS.
        CHECK(ob->risk <= r.find({EstimatorKind::ols})->risk);
    }
    CHECK_THROWS_AS(run_box_experiment(small_spec()), ConstraintError);
}

TEST_CASE("moment checks pass for normal and uniform errors") {
    ExperimentSpec s;
    s.design = design::Collinear{10, 0.9, 4};
    s.beta_true = {1.0, 2.0};
    s.replications = 40000;
    s.seed = 17;
    const MomentReport normal = run_moment_checks(s);
    for (const PropertyCheck& c : normal.checks) CHECK_MESSAGE(c.passed, c.name, " observed ", c.observed, " expected ", c.expected);
    CHECK(normal.find("covariance_frobenius") != nullptr);
    CHECK(normal.find("fourth_moment[1]") != nullptr);

    s.error_model = error_model::Uniform{-2.0, 2.0};
    const MomentReport uniform = run_moment_checks(s);
    CHECK(uniform.find("covariance_frobenius") == nullptr);
    CHECK(uniform.find("projection_variance") != nullptr);
    CHECK(uniform.find("unbiased[0]")->passed);
    CHECK(uniform.find("unbiased[1]")->passed);

    s.error_model = error_model::ArExponential{1.0, 0.3};
    CHECK(run_moment_checks(s).find("projection_variance") == nullptr);
}

TEST_CASE("trace of the quasi covariance scales like 1/n") {
    double prev_n = 0, prev_t = 0;
    for (std::size_t n : {10u, 100u, 1000u}) {
        const Matrix x = materialize(design::Ones{n});
        const OlsFit fit = ReplicationKernel(x, {1.0}).reference_fit();
        const double tr = quasi_covariance(fit, 1.0).q(0, 0);
        if (prev_n > 0) {
            const double slope = std::log(tr / prev_t) / std::log(static_cast<double>(n) / prev_n);
            CHECK(std::abs(slope + 1.0) < 0.05);
        }
        prev_n = static_cast<double>(n);
        prev_t = tr;
    }
}

TEST_CASE("presets") {
    for (int t : {1, 2}) {
        const auto specs = table_preset(t, 100, 1);
        CHECK(specs.size() == 4);
        for (const auto& s : specs) CHECK_NOTHROW(validate(s));
    }
    for (int t : {4, 5, 6}) {
        const auto specs = table_preset(t, 100, 1);
        REQUIRE(specs.size() == 1);
        CHECK(specs[0].estimators.size() == 12);
    }
    CHECK(std::holds_alternative<error_model::Mixture>(table_preset(6, 10, 1)[0].error_model));
    CHECK_THROWS_AS(table_preset(3, 100, 1), DomainError);
    const auto t2 = run_risk_experiment(table_preset(2, 200, 1)[0]);
    REQUIRE(t2.design.column_correlation.has_value());
    CHECK(*t2.design.column_correlation == doctest::Approx(0.9955).epsilon(1e-10));
    CHECK(t2.theoretical_ratio >= 0.39);
    CHECK(t2.theoretical_ratio <= 0.42);
}

TEST_CASE("estimator names") {
    for (EstimatorKind k : {EstimatorKind::ols, EstimatorKind::quasi_oracle, EstimatorKind::ols_box, EstimatorKind::quasi_box})
        CHECK(estimator_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(estimator_kind_from_string("ridge"), DomainError);
    CHECK(EstimatorSpec{EstimatorKind::quasi_box, 0.8, 1.2}.label() == "quasi_box[0.8,1.2]");
}

}  // TEST_SUITE
