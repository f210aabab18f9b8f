#include "cutofflab/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutofflab/linalg.hpp"

namespace cutofflab {

DouParams::DouParams(std::size_t n_arg, double beta_arg)
    : n(n_arg), beta(beta_arg) {
  if (n < 1) throw std::invalid_argument("DouParams: n < 1");
  if (beta < 0.0 || (beta > 0.0 && beta < 1.0))
    throw std::invalid_argument(
        "DouParams: beta must be 0 or >= 1 (the 0 < beta < 1 collision regime "
        "is excluded)");
}

double RegularizerSpec::eta(std::size_t n) const {
  if (kappa <= 0.0) throw std::invalid_argument("RegularizerSpec: kappa <= 0");
  return std::pow(static_cast<double>(n), -(kappa + 1.0));
}

double energy(const std::vector<double>& x, const DouParams& params) {
  const std::size_t n = x.size();
  if (n != params.n) throw std::invalid_argument("energy: size mismatch");
  double confinement = 0.0;
  for (double xi : x) confinement += 0.5 * xi * xi;
  double e = static_cast<double>(n) * confinement;
  if (params.beta > 0.0) {
    double log_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double gap = std::fabs(x[i] - x[j]);
        if (gap == 0.0) return std::numeric_limits<double>::infinity();
        log_sum += std::log(gap);
      }
    e -= params.beta * log_sum;
  }
  return e;
}

double pi_sum(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi;
  return s;
}

double radius2(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

ParticleState reorder(std::vector<double> x, double t) {
  std::stable_sort(x.begin(), x.end());
  return {std::move(x), t};
}

ParticleState regularize_initial(const ParticleState& x0,
                                 const RegularizerSpec& spec, RngStream& rng) {
  const std::size_t n = x0.x.size();
  const double eta = spec.eta(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double base = x0.x[i] + 3.0 * static_cast<double>(i + 1) * eta;
    y[i] = base + eta * rng.uniform();
  }
  return {std::move(y), x0.t};
}

double semicircle_cdf(double x, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("semicircle_cdf: beta <= 0");
  const double edge = std::sqrt(2.0 * beta);
  if (x <= -edge) return 0.0;
  if (x >= edge) return 1.0;
  return (x * std::sqrt(2.0 * beta - x * x) +
          2.0 * beta * std::asin(x / edge)) /
             (2.0 * M_PI * beta) +
         0.5;
}

std::vector<double> semicircle_quantiles(const DouParams& params) {
  const std::size_t n = params.n;
  if (params.beta == 0.0) return std::vector<double>(n, 0.0);
  const double edge = std::sqrt(2.0 * params.beta);
  std::vector<double> rho(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(n);
    if (p >= 1.0) {
      rho[i - 1] = edge;
      continue;
    }
    double lo = -edge, hi = edge;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      if (semicircle_cdf(mid, params.beta) >= p)
        hi = mid;
      else
        lo = mid;
    }
    rho[i - 1] = hi;
  }
  return rho;
}

ParticleState equilibrium_sample(const DouParams& params, RngStream& rng) {
  const std::size_t n = params.n;
  if (params.beta == 0.0) {
    std::vector<double> x(n);
    const double sd = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) x[i] = sd * rng.normal();
    std::sort(x.begin(), x.end());
    return {std::move(x), 0.0};
  }
  // Tridiagonal beta-Hermite model: diagonal N(0,2)/sqrt(2), off-diagonal
  // chi_{(n-k) beta}/sqrt(2); its spectrum has density prop. to
  // e^{-|l|^2/2} prod |l_i-l_j|^beta, so x = l/sqrt(n) matches the target
  // e^{-n|x|^2/2} prod |x_i-x_j|^beta (pinned by E|X|^2 = 1+beta(n-1)/2).
  std::vector<double> diag(n), sub(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = rng.normal();
  for (std::size_t k = 1; k < n; ++k)
    sub[k - 1] = rng.chi(static_cast<double>(n - k) * params.beta) /
                 std::sqrt(2.0);
  std::vector<double> lambda = tridiagonal_eigenvalues(diag, sub);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& l : lambda) l *= scale;
  return {std::move(lambda), 0.0};
}

std::pair<double, double> mean_field_moments(std::pair<double, double> m0,
                                             double beta, double t) {
  const double eps = std::exp(-2.0 * t);
  return {m0.first * std::exp(-t),
          m0.second * eps + 0.5 * beta * (1.0 - eps)};
}

}  // namespace cutofflab
