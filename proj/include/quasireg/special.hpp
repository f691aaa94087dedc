#pragma once

namespace quasireg {

/// ln Γ(x) for x > 0 (Lanczos approximation, g = 671/128, 15 terms).
/// Relative error of exp(ln_gamma(x)) is below 1e-12 on [0.5, 200].
double ln_gamma(double x);

/// Laplace integral Φ(x) = (2/√π)∫₀ˣ exp(−t²) dt, i.e. erf(x).
double laplace_phi(double x);

/// Student t distribution with `df` degrees of freedom.
double t_cdf(int df, double t);
double t_quantile(int df, double p);

/// Fisher F distribution with (d1, d2) degrees of freedom.
double f_cdf(int d1, int d2, double x);
double f_quantile(int d1, int d2, double p);

}  // namespace quasireg
