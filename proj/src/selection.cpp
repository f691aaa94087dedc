#include "quasireg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "quasireg/special.hpp"

namespace quasireg {

namespace {

enum class BoxPick { ols, lower, upper, low_edge, high_edge };

void check_box(double a1, double a2) {
    if (!(a1 < a2)) throw ConstraintError(fmt::format("box requires a1 < a2 (got [{}, {}])", a1, a2));
}

std::string format_vector(std::span<const double> v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{:.6g}", i ? ", " : "", v[i]);
    return out + ")";
}

BoxPick pick_in_box(double b, double l, double h, double a1, double a2) {
    check_box(a1, a2);
    if (!(l <= b && b <= h))
        throw ConstraintError("quasi_box: OLS estimate must lie between the two alternatives");

    const bool b_in = a1 <= b && b <= a2;
    const bool l_strict = a1 < l && l < a2;
    const bool h_strict = a1 < h && h < a2;

    if ((b_in && l_strict && h > a2) || (b >= a2 && l_strict)) return BoxPick::lower;
    if ((b_in && l < a1 && h_strict) || (b <= a1 && h_strict)) return BoxPick::upper;
    if ((b < a1 && h < a1) || (b < a1 && h > a2)) return BoxPick::low_edge;
    if ((b > a2 && l > a2) || (b > a2 && l < a1)) return BoxPick::high_edge;
    if ((b_in && a1 <= l && l <= a2 && a1 <= h && h <= a2) || (b_in && l < a1 && h > a2))
        return BoxPick::ols;

    // An alternative sits exactly on a box edge; count the edge as inside.
    const bool l_in = a1 <= l && l <= a2;
    const bool h_in = a1 <= h && h <= a2;
    if (l_in && h_in) return BoxPick::ols;
    if (l_in) return BoxPick::lower;
    if (h_in) return BoxPick::upper;
    return b < a1 ? BoxPick::low_edge : BoxPick::high_edge;
}

double box_value(BoxPick pick, double b, double l, double h, double a1, double a2) {
    switch (pick) {
        case BoxPick::ols: return b;
        case BoxPick::lower: return l;
        case BoxPick::upper: return h;
        case BoxPick::low_edge: return a1;
        case BoxPick::high_edge: return a2;
    }
    return b;
}

}  // namespace

std::string to_string(DecisionSource source) {
    switch (source) {
        case DecisionSource::alt_plus: return "alt_plus";
        case DecisionSource::alt_minus: return "alt_minus";
        case DecisionSource::ols: return "ols";
        case DecisionSource::clamp_low: return "clamp_low";
        case DecisionSource::clamp_high: return "clamp_high";
    }
    return "unknown";
}

std::string to_string(SignConstraint sign) {
    switch (sign) {
        case SignConstraint::positive: return "+";
        case SignConstraint::negative: return "-";
        case SignConstraint::free: return "free";
    }
    return "?";
}

Decision choose_by_signs(const QuasiAlternatives& alts, const SignRule& rule) {
    const std::size_t k = alts.b_plus.size();
    if (rule.signs.size() != k)
        throw ConstraintError(fmt::format("sign rule has {} entries but k = {}", rule.signs.size(), k));

    Decision d;
    auto check = [&](const Vector& v, const char* label) {
        bool ok = true;
        for (std::size_t j = 0; j < k; ++j) {
            const SignConstraint sc = rule.signs[j];
            if (sc == SignConstraint::free) continue;
            const bool match = sc == SignConstraint::positive ? v[j] > 0.0 : v[j] < 0.0;
            d.rationale.push_back(fmt::format("{}[{}] = {:.6g} {} required sign {}", label, j, v[j],
                                              match ? "satisfies" : "violates", to_string(sc)));
            ok = ok && match;
        }
        return ok;
    };
    const bool plus_ok = check(alts.b_plus, "b_plus");
    const bool minus_ok = check(alts.b_minus, "b_minus");

    if (plus_ok != minus_ok) {
        d.chosen = plus_ok ? alts.b_plus : alts.b_minus;
        d.source = plus_ok ? DecisionSource::alt_plus : DecisionSource::alt_minus;
        d.rationale.push_back(fmt::format("only {} matches every sign constraint", plus_ok ? "b_plus" : "b_minus"));
    } else {
        d.ambiguous = true;
        d.rationale.push_back(plus_ok ? "both alternatives satisfy every sign constraint"
                                      : "neither alternative satisfies the sign constraints");
    }
    return d;
}

Decision choose_by_range(const QuasiAlternatives& alts, const RangeRule& rule) {
    const std::size_t k = alts.b_plus.size();
    if (rule.admissible.size() != k)
        throw ConstraintError(fmt::format("range rule has {} intervals but k = {}", rule.admissible.size(), k));
    for (const Interval& iv : rule.admissible)
        if (!(iv.lo <= iv.hi)) throw ConstraintError("range rule: interval lower bound exceeds upper bound");

    Decision d;
    auto check = [&](const Vector& v, const char* label) {
        bool ok = true;
        for (std::size_t j = 0; j < k; ++j) {
            const Interval& iv = rule.admissible[j];
            const bool in = iv.contains(v[j]);
            d.rationale.push_back(fmt::format("{}[{}] = {:.6g} is {} [{:.6g}, {:.6g}]", label, j, v[j],
                                              in ? "inside" : "outside", iv.lo, iv.hi));
            ok = ok && in;
        }
        return ok;
    };
    const bool plus_ok = check(alts.b_plus, "b_plus");
    const bool minus_ok = check(alts.b_minus, "b_minus");

    if (plus_ok != minus_ok) {
        d.chosen = plus_ok ? alts.b_plus : alts.b_minus;
        d.source = plus_ok ? DecisionSource::alt_plus : DecisionSource::alt_minus;
        d.rationale.push_back(fmt::format("only {} is admissible", plus_ok ? "b_plus" : "b_minus"));
    } else {
        d.ambiguous = true;
        d.rationale.push_back(plus_ok ? "both alternatives are admissible"
                                      : "no alternative is admissible");
    }
    return d;
}

Decision choose(const QuasiAlternatives& alts, const OlsFit& fit, const SelectionRule& rule) {
    if (const auto* signs = std::get_if<SignRule>(&rule)) return choose_by_signs(alts, *signs);
    if (const auto* range = std::get_if<RangeRule>(&rule)) return choose_by_range(alts, *range);

    const auto& box = std::get<BoxRule>(rule);
    if (fit.k != 1) throw ConstraintError("box rule applies to one-dimensional problems only");
    const double b = fit.b[0];
    const bool plus_is_upper = alts.b_plus[0] >= alts.b_minus[0];
    const double l = std::min(alts.b_plus[0], alts.b_minus[0]);
    const double h = std::max(alts.b_plus[0], alts.b_minus[0]);
    const BoxPick pick = pick_in_box(b, l, h, box.a1, box.a2);

    Decision d;
    d.chosen = Vector{box_value(pick, b, l, h, box.a1, box.a2)};
    switch (pick) {
        case BoxPick::ols: d.source = DecisionSource::ols; break;
        case BoxPick::lower: d.source = plus_is_upper ? DecisionSource::alt_minus : DecisionSource::alt_plus; break;
        case BoxPick::upper: d.source = plus_is_upper ? DecisionSource::alt_plus : DecisionSource::alt_minus; break;
        case BoxPick::low_edge: d.source = DecisionSource::clamp_low; break;
        case BoxPick::high_edge: d.source = DecisionSource::clamp_high; break;
    }
    d.rationale.push_back(fmt::format("b = {:.6g}, alternatives {} against box [{:.6g}, {:.6g}] -> {}", b,
                                      format_vector(Vector{l, h}), box.a1, box.a2, to_string(*d.source)));
    return d;
}

double ols_box(double b, double a1, double a2) {
    check_box(a1, a2);
    return std::clamp(b, a1, a2);
}

double quasi_box(double b, double lower_alt, double upper_alt, double a1, double a2) {
    const double l = std::min(lower_alt, upper_alt);
    const double h = std::max(lower_alt, upper_alt);
    return box_value(pick_in_box(b, l, h, a1, a2), b, l, h, a1, a2);
}

double quasi_box(double b, const QuasiAlternatives& alts, double a1, double a2) {
    if (alts.b_plus.size() != 1) throw ConstraintError("quasi_box applies to one-dimensional problems only");
    return quasi_box(b, alts.b_plus[0], alts.b_minus[0], a1, a2);
}

double box_risk_analytic(double sigma_tilde, double c1, double c2) {
    if (!(sigma_tilde > 0.0)) throw DomainError("box_risk_analytic: sigma must be positive");
    if (!(c1 <= 0.0 && c2 >= 0.0)) throw ConstraintError("box_risk_analytic: requires C1 <= 0 <= C2");

    const double s = sigma_tilde;
    const double root2 = std::numbers::sqrt2;
    const double phi1 = std::isinf(c1) ? -1.0 : laplace_phi(c1 / (s * root2));
    const double phi2 = std::isinf(c2) ? 1.0 : laplace_phi(c2 / (s * root2));
    const double inv_root_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

    double risk = 0.5 * s * s * (phi2 - phi1);
    if (!std::isinf(c1)) {
        risk += 0.5 * c1 * c1 * (1.0 + phi1);
        risk += c1 * s * inv_root_2pi * std::exp(-c1 * c1 / (2.0 * s * s));
    }
    if (!std::isinf(c2)) {
        risk += 0.5 * c2 * c2 * (1.0 - phi2);
        risk -= c2 * s * inv_root_2pi * std::exp(-c2 * c2 / (2.0 * s * s));
    }
    return risk;
}

}  // namespace quasireg
