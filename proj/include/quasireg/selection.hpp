#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quasireg/quasi.hpp"

namespace quasireg {

enum class SignConstraint { positive, negative, free };

struct SignRule {
    std::vector<SignConstraint> signs;
};

/// One-dimensional a priori box a1 ≤ β ≤ a2.
struct BoxRule {
    double a1 = 0.0;
    double a2 = 0.0;
};

/// Admissible interval for each component.
struct RangeRule {
    std::vector<Interval> admissible;
};

using SelectionRule = std::variant<SignRule, BoxRule, RangeRule>;

enum class DecisionSource { alt_plus, alt_minus, ols, clamp_low, clamp_high };

std::string to_string(DecisionSource source);
std::string to_string(SignConstraint sign);

/// Outcome of a stage-2 choice. When `ambiguous` is set, `chosen` is empty
/// and `rationale` records how each alternative fared.
struct Decision {
    std::optional<Vector> chosen;
    std::optional<DecisionSource> source;
    std::vector<std::string> rationale;
    bool ambiguous = false;
};

Decision choose_by_signs(const QuasiAlternatives& alts, const SignRule& rule);
Decision choose_by_range(const QuasiAlternatives& alts, const RangeRule& rule);
/// Dispatches on the rule; a BoxRule requires k = 1 and uses quasi_box.
Decision choose(const QuasiAlternatives& alts, const OlsFit& fit, const SelectionRule& rule);

/// OLS clamped to [a1, a2].
double ols_box(double b, double a1, double a2);

/// Box-aware choice between the two alternatives for k = 1.
///
/// With b₁ = min and b₂ = max of the alternatives:
///   b₁ if a1 ≤ b ≤ a2 & a1 < b₁ < a2 & b₂ > a2  |  b ≥ a2 & a1 < b₁ < a2
///   b₂ if a1 ≤ b ≤ a2 & b₁ < a1 & a1 < b₂ < a2  |  b ≤ a1 & a1 < b₂ < a2
///   a1 if b < a1 & b₂ < a1                      |  b < a1 & b₂ > a2
///   a2 if b > a2 & b₁ > a2                      |  b > a2 & b₁ < a1
///   b  if a1 ≤ b, b₁, b₂ ≤ a2                   |  a1 ≤ b ≤ a2 & b₁ < a1 & b₂ > a2
/// The second a2 disjunct mirrors the second a1 disjunct so that every
/// configuration is covered. When an alternative sits exactly on a box edge
/// and no line applies, the edge counts as inside the box.
///
/// Requires a1 < a2 and b₁ ≤ b ≤ b₂.
double quasi_box(double b, const QuasiAlternatives& alts, double a1, double a2);
double quasi_box(double b, double lower_alt, double upper_alt, double a1, double a2);

/// E(b_H − β)² for b_H ~ clamp(N(β, σ̃²), β + C1, β + C2), C1 ≤ 0 ≤ C2.
/// Infinite bounds are accepted.
double box_risk_analytic(double sigma_tilde, double c1, double c2);

}  // namespace quasireg
