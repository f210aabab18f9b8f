#pragma once

#include <cstddef>
#include <utility>
#include <vector>

// Closed-form distances and divergences between Gaussian laws, the Kraft /
// Pinsker sandwich for total variation, tensorization combinators, and the
// Gamma-law crossing computation used for small initial conditions.

namespace cutofflab {

enum class MetricKind { Wasserstein, TV, Hellinger, Kullback, Chi2, Fisher };

struct GaussianLaw {
  // Either a scalar-diagonal covariance sigma2 * I_d, or a full d x d SPD
  // matrix stored row-major.
  std::vector<double> mean;
  bool is_isotropic = true;
  double sigma2 = 1.0;               // used when is_isotropic
  std::vector<double> covariance;    // used otherwise (d*d, row-major)

  static GaussianLaw isotropic(std::vector<double> mean, double sigma2);
  static GaussianLaw full(std::vector<double> mean, std::vector<double> cov);
  std::size_t dim() const { return mean.size(); }
};

struct GammaLaw {
  double shape;
  double rate;
};

// The supremum of each metric over all pairs of laws (1 for TV/Hellinger,
// +infinity otherwise).
double metric_max(MetricKind kind);

// Closed-form value of the requested metric between p and q (divergences are
// oriented as div(p | q)).  Chi2 returns +infinity when 2*Sigma_q - Sigma_p is
// not positive definite.  TV has no closed form and throws; use
// tv_gauss_bounds.
double gauss_distance(MetricKind kind, const GaussianLaw& p,
                      const GaussianLaw& q);

// Kraft sandwich [Hellinger^2, Hellinger*sqrt(2 - Hellinger^2)] tightened by
// the Pinsker-type bound sqrt(2*Kullback) and capped at 1.
std::pair<double, double> tv_gauss_bounds(const GaussianLaw& p,
                                          const GaussianLaw& q);

// Exact TV between two 1D Gaussians by density-crossing integration.
double gaussian_tv_1d(double mean1, double var1, double mean2, double var2);

// Discriminating-event TV between Gamma(n/2, n/2) and
// Gamma(n/2, n/(2(1-e^{-2t}))) — the laws of the squared radius at
// equilibrium and at time t from the origin.  Returns (alpha_t, tv).
std::pair<double, double> tv_gamma_crossing(double t, std::size_t n);

// Combine per-coordinate metric values into the product-law value.
// Hellinger: 1 - prod(1 - h_i^2) under the square; Kullback/Fisher: sums;
// Chi2: prod(chi2_i + 1) - 1; Wasserstein: square root of the sum of squares.
// TV throws (only sandwich bounds tensorize); use tv_tensorize_bounds.
double tensorize(MetricKind kind, const std::vector<double>& components);
std::pair<double, double> tv_tensorize_bounds(
    const std::vector<double>& components);

}  // namespace cutofflab
