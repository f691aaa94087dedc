#include "quasireg/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "quasireg/error.hpp"

namespace quasireg {

namespace {

// Lanczos coefficients for g = 671/128 (Numerical Recipes, 3rd ed., gammln).
constexpr double kLanczosG = 671.0 / 128.0;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

void check_probability(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError(std::string(who) + ": probability must lie in (0, 1)");
}

void check_df(int df, const char* who) {
    if (df < 1) throw DomainError(std::string(who) + ": degrees of freedom must be positive");
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ln_gamma: argument must be positive");
    double ser = kLanczosC0;
    double y = x;
    for (double c : kLanczos) ser += c / ++y;
    const double tmp = x + kLanczosG;
    return (x + 0.5) * std::log(tmp) - tmp + std::log(kSqrtTwoPi * ser / x);
}

double laplace_phi(double x) { return std::erf(x); }

double t_cdf(int df, double t) {
    check_df(df, "t_cdf");
    return boost::math::cdf(boost::math::students_t_distribution<double>(df), t);
}

double t_quantile(int df, double p) {
    check_df(df, "t_quantile");
    check_probability(p, "t_quantile");
    if (p == 0.5) return 0.0;
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

double f_cdf(int d1, int d2, double x) {
    check_df(d1, "f_cdf");
    check_df(d2, "f_cdf");
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(boost::math::fisher_f_distribution<double>(d1, d2), x);
}

double f_quantile(int d1, int d2, double p) {
    check_df(d1, "f_quantile");
    check_df(d2, "f_quantile");
    check_probability(p, "f_quantile");
    return boost::math::quantile(boost::math::fisher_f_distribution<double>(d1, d2), p);
}

}  // namespace quasireg
