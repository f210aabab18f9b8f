#pragma once

// Scalar special functions used by the closed-form metric formulas and the
// exact samplers: regularized incomplete gamma, normal CDF, noncentral
// chi-square CDF, and a couple of test-statistic helpers.

namespace cutofflab {

// Regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a), and the
// upper complement Q(a, x) = 1 - P(a, x).  Series/continued-fraction split at
// x = a + 1; absolute accuracy ~1e-14.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double normal_pdf(double x);
double normal_cdf(double x);

// CDF of the noncentral chi-square with k degrees of freedom (k > 0 real) and
// noncentrality lambda >= 0, evaluated at x.  Poisson-mixture summation for
// moderate parameters, skewness-corrected (Edgeworth) normal approximation for
// very large k + lambda.
double noncentral_chi2_cdf(double k, double lambda, double x);

// Survival function of the Kolmogorov distribution, Q(x) = P(sup|B| > x).
double kolmogorov_q(double x);

// Wilson 95% score interval for a binomial proportion.
struct WilsonInterval {
  double lower;
  double upper;
};
WilsonInterval wilson_interval_95(long successes, long trials);

}  // namespace cutofflab
