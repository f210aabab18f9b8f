#include "cutofflab/gauss_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutofflab/linalg.hpp"
#include "cutofflab/special_functions.hpp"

namespace cutofflab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Mat = std::vector<double>;  // row-major, dimension carried separately

Mat mat_mul(const Mat& a, const Mat& b, std::size_t n) {
  Mat c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

// Apply an analytic function to an SPD matrix through its spectrum.
template <typename F>
Mat spd_function(const Mat& a, std::size_t n, F f) {
  std::vector<double> vals, vecs;
  jacobi_eigen(a, n, vals, vecs);
  Mat out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double fk = f(vals[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out[i * n + j] += fk * vecs[i * n + k] * vecs[j * n + k];
  }
  return out;
}

double log_det_spd(const Mat& a, std::size_t n) {
  std::vector<double> vals, vecs;
  jacobi_eigen(a, n, vals, vecs);
  double s = 0.0;
  for (double v : vals) {
    if (v <= 0.0) throw std::invalid_argument("covariance not positive definite");
    s += std::log(v);
  }
  return s;
}

double min_eigenvalue(const Mat& a, std::size_t n) {
  std::vector<double> vals, vecs;
  jacobi_eigen(a, n, vals, vecs);
  return vals.front();
}

double trace(const Mat& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i * n + i];
  return s;
}

double quad_form(const Mat& a, const std::vector<double>& x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += x[i] * a[i * n + j] * x[j];
  return s;
}

Mat to_full(const GaussianLaw& g) {
  if (!g.is_isotropic) return g.covariance;
  std::size_t d = g.dim();
  Mat m(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] = g.sigma2;
  return m;
}

// ---- 1D closed forms (divergences oriented as div(p|q), delta = m_q - m_p)

double hellinger2_1d(double d, double v1, double v2) {
  double ratio = std::sqrt(std::sqrt(v1 * v2) / (0.5 * (v1 + v2)));
  return 1.0 - ratio * std::exp(-d * d / (4.0 * (v1 + v2)));
}

double kullback_1d(double d, double v1, double v2) {
  return 0.5 * (d * d / v2 + v1 / v2 - 1.0 + std::log(v2 / v1));
}

double chi2_1d(double d, double v1, double v2) {
  double denom = 2.0 * v2 - v1;
  if (denom <= 0.0) return kInf;
  return v2 / std::sqrt(v1 * denom) * std::exp(d * d / denom) - 1.0;
}

double fisher_1d(double d, double v1, double v2) {
  double dv = v2 - v1;
  return d * d / (v2 * v2) + dv * dv / (v2 * v2 * v1);
}

double wasserstein2_1d(double d, double v1, double v2) {
  double ds = std::sqrt(v1) - std::sqrt(v2);
  return d * d + ds * ds;
}

double gauss_distance_isotropic(MetricKind kind, const GaussianLaw& p,
                                const GaussianLaw& q) {
  const std::size_t d = p.dim();
  const double v1 = p.sigma2, v2 = q.sigma2;
  std::vector<double> comp(d);
  switch (kind) {
    case MetricKind::Hellinger: {
      double log_keep = 0.0;  // log prod (1 - h_i^2)
      for (std::size_t i = 0; i < d; ++i) {
        double h2 = hellinger2_1d(q.mean[i] - p.mean[i], v1, v2);
        log_keep += std::log1p(-h2);
      }
      return std::sqrt(-std::expm1(log_keep));
    }
    case MetricKind::Kullback: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        s += kullback_1d(q.mean[i] - p.mean[i], v1, v2);
      return s;
    }
    case MetricKind::Chi2: {
      double log_prod = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        double c = chi2_1d(q.mean[i] - p.mean[i], v1, v2);
        if (c == kInf) return kInf;
        log_prod += std::log1p(c);
      }
      return std::expm1(log_prod);
    }
    case MetricKind::Fisher: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        s += fisher_1d(q.mean[i] - p.mean[i], v1, v2);
      return s;
    }
    case MetricKind::Wasserstein: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        s += wasserstein2_1d(q.mean[i] - p.mean[i], v1, v2);
      return std::sqrt(s);
    }
    default:
      throw std::logic_error("unreachable");
  }
}

double gauss_distance_full(MetricKind kind, const GaussianLaw& p,
                           const GaussianLaw& q) {
  const std::size_t n = p.dim();
  const Mat s1 = to_full(p), s2 = to_full(q);
  std::vector<double> delta(n);  // m_q - m_p
  for (std::size_t i = 0; i < n; ++i) delta[i] = q.mean[i] - p.mean[i];

  switch (kind) {
    case MetricKind::Hellinger: {
      Mat avg(n * n);
      for (std::size_t i = 0; i < n * n; ++i) avg[i] = 0.5 * (s1[i] + s2[i]);
      Mat avg_inv = spd_function(avg, n, [](double l) { return 1.0 / l; });
      double log_ratio = 0.25 * (log_det_spd(s1, n) + log_det_spd(s2, n)) -
                         0.5 * log_det_spd(avg, n);
      double h2 = 1.0 - std::exp(log_ratio - 0.125 * quad_form(avg_inv, delta, n));
      return std::sqrt(std::max(0.0, h2));
    }
    case MetricKind::Kullback: {
      Mat s2_inv = spd_function(s2, n, [](double l) { return 1.0 / l; });
      double t = trace(mat_mul(s2_inv, s1, n), n) - static_cast<double>(n);
      double logdet = log_det_spd(s2, n) - log_det_spd(s1, n);
      return 0.5 * (quad_form(s2_inv, delta, n) + t + logdet);
    }
    case MetricKind::Chi2: {
      Mat two_s2_minus_s1(n * n);
      for (std::size_t i = 0; i < n * n; ++i)
        two_s2_minus_s1[i] = 2.0 * s2[i] - s1[i];
      if (min_eigenvalue(two_s2_minus_s1, n) <= 0.0) return kInf;
      Mat s1_inv = spd_function(s1, n, [](double l) { return 1.0 / l; });
      Mat s2_inv = spd_function(s2, n, [](double l) { return 1.0 / l; });
      // 2 Sigma2 Sigma1^{-1} Sigma2 - Sigma2
      Mat inner = mat_mul(mat_mul(s2, s1_inv, n), s2, n);
      for (std::size_t i = 0; i < n * n; ++i) inner[i] = 2.0 * inner[i] - s2[i];
      Mat inner_inv = spd_function(inner, n, [](double l) { return 1.0 / l; });
      double expo = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          expo += 0.5 * delta[i] * (s2_inv[i * n + j] + inner_inv[i * n + j]) *
                  delta[j];
      double log_pref = log_det_spd(s2, n) -
                        0.5 * (log_det_spd(s1, n) + log_det_spd(two_s2_minus_s1, n));
      return std::exp(log_pref + expo) - 1.0;
    }
    case MetricKind::Fisher: {
      Mat s1_inv = spd_function(s1, n, [](double l) { return 1.0 / l; });
      Mat s2_inv = spd_function(s2, n, [](double l) { return 1.0 / l; });
      std::vector<double> w(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          w[i] += s2_inv[i * n + j] * delta[j];
      double mean_term = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean_term += w[i] * w[i];
      Mat s2_inv2 = mat_mul(s2_inv, s2_inv, n);
      double tr = trace(mat_mul(s2_inv2, s1, n), n) - 2.0 * trace(s2_inv, n) +
                  trace(s1_inv, n);
      return mean_term + tr;
    }
    case MetricKind::Wasserstein: {
      Mat r1 = spd_function(s1, n, [](double l) { return std::sqrt(l); });
      Mat mid = mat_mul(mat_mul(r1, s2, n), r1, n);
      Mat mid_root = spd_function(mid, n, [](double l) {
        return std::sqrt(std::max(0.0, l));
      });
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) d2 += delta[i] * delta[i];
      double w2 = d2 + trace(s1, n) + trace(s2, n) - 2.0 * trace(mid_root, n);
      return std::sqrt(std::max(0.0, w2));
    }
    default:
      throw std::logic_error("unreachable");
  }
}

}  // namespace

GaussianLaw GaussianLaw::isotropic(std::vector<double> mean, double sigma2) {
  if (sigma2 <= 0.0) throw std::invalid_argument("GaussianLaw: sigma2 <= 0");
  GaussianLaw g;
  g.mean = std::move(mean);
  g.is_isotropic = true;
  g.sigma2 = sigma2;
  return g;
}

GaussianLaw GaussianLaw::full(std::vector<double> mean,
                              std::vector<double> cov) {
  const std::size_t d = mean.size();
  if (cov.size() != d * d)
    throw std::invalid_argument("GaussianLaw: covariance size mismatch");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::fabs(cov[i * d + j] - cov[j * d + i]) > 1e-12)
        throw std::invalid_argument("GaussianLaw: covariance not symmetric");
  GaussianLaw g;
  g.mean = std::move(mean);
  g.is_isotropic = false;
  g.covariance = std::move(cov);
  if (min_eigenvalue(g.covariance, d) <= 0.0)
    throw std::invalid_argument("GaussianLaw: covariance not positive definite");
  return g;
}

double metric_max(MetricKind kind) {
  switch (kind) {
    case MetricKind::TV:
    case MetricKind::Hellinger:
      return 1.0;
    default:
      return kInf;
  }
}

double gauss_distance(MetricKind kind, const GaussianLaw& p,
                      const GaussianLaw& q) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("gauss_distance: dimension mismatch");
  if (kind == MetricKind::TV)
    throw std::invalid_argument(
        "gauss_distance: no exact TV formula; use tv_gauss_bounds");
  if (p.is_isotropic && q.is_isotropic)
    return gauss_distance_isotropic(kind, p, q);
  return gauss_distance_full(kind, p, q);
}

std::pair<double, double> tv_gauss_bounds(const GaussianLaw& p,
                                          const GaussianLaw& q) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("tv_gauss_bounds: dimension mismatch");
  double h = gauss_distance(MetricKind::Hellinger, p, q);
  double kl = gauss_distance(MetricKind::Kullback, p, q);
  double lower = h * h;
  double upper = h * std::sqrt(std::max(0.0, 2.0 - h * h));
  if (std::isfinite(kl)) upper = std::min(upper, std::sqrt(2.0 * kl));
  upper = std::min(upper, 1.0);
  upper = std::max(upper, lower);
  return {lower, upper};
}

double gaussian_tv_1d(double m1, double v1, double m2, double v2) {
  if (v1 <= 0.0 || v2 <= 0.0)
    throw std::invalid_argument("gaussian_tv_1d: nonpositive variance");
  auto cdf1 = [&](double x) { return normal_cdf((x - m1) / std::sqrt(v1)); };
  auto cdf2 = [&](double x) { return normal_cdf((x - m2) / std::sqrt(v2)); };
  if (std::fabs(v1 - v2) < 1e-300 * (v1 + v2) || v1 == v2) {
    if (m1 == m2) return 0.0;
    double c = 0.5 * (m1 + m2);
    return std::fabs(cdf1(c) - cdf2(c));
  }
  // density crossings: quadratic in x from log f1 = log f2
  double a = 0.5 * (1.0 / v2 - 1.0 / v1);
  double b = m1 / v1 - m2 / v2;
  double c = 0.5 * (m2 * m2 / v2 - m1 * m1 / v1) - 0.5 * std::log(v1 / v2);
  double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) {
    // numerically tangent densities; fall back to midpoint split
    double mid = 0.5 * (m1 + m2);
    return std::fabs(cdf1(mid) - cdf2(mid));
  }
  double r1 = (-b - std::sqrt(disc)) / (2.0 * a);
  double r2 = (-b + std::sqrt(disc)) / (2.0 * a);
  if (r1 > r2) std::swap(r1, r2);
  double diff = (cdf1(r2) - cdf1(r1)) - (cdf2(r2) - cdf2(r1));
  return std::fabs(diff);
}

std::pair<double, double> tv_gamma_crossing(double t, std::size_t n) {
  if (t <= 0.0) throw std::domain_error("tv_gamma_crossing: t must be > 0");
  if (n < 1) throw std::invalid_argument("tv_gamma_crossing: n < 1");
  const double eps = std::exp(-2.0 * t);
  const double one_minus = -std::expm1(-2.0 * t);  // 1 - e^{-2t}
  const double alpha = -std::log(one_minus) * one_minus / eps;
  const double half_n = 0.5 * static_cast<double>(n);
  // equilibrium |Z_inf|^2 ~ Gamma(n/2, n/2); S_t ~ Gamma(n/2, n/(2(1-eps)))
  double p_eq = regularized_gamma_q(half_n, half_n * alpha);
  double p_t = regularized_gamma_q(half_n, half_n * alpha / one_minus);
  return {alpha, p_eq - p_t};
}

double tensorize(MetricKind kind, const std::vector<double>& components) {
  switch (kind) {
    case MetricKind::Hellinger: {
      double log_keep = 0.0;
      for (double h : components) {
        if (h < 0.0 || h > 1.0)
          throw std::invalid_argument("tensorize: Hellinger value outside [0,1]");
        log_keep += std::log1p(-h * h);
      }
      return std::sqrt(-std::expm1(log_keep));
    }
    case MetricKind::Kullback:
    case MetricKind::Fisher: {
      double s = 0.0;
      for (double v : components) s += v;
      return s;
    }
    case MetricKind::Chi2: {
      double log_prod = 0.0;
      for (double v : components) {
        if (v == kInf) return kInf;
        log_prod += std::log1p(v);
      }
      return std::expm1(log_prod);
    }
    case MetricKind::Wasserstein: {
      double s = 0.0;
      for (double v : components) s += v * v;
      return std::sqrt(s);
    }
    case MetricKind::TV:
      throw std::invalid_argument(
          "tensorize: TV only tensorizes as bounds; use tv_tensorize_bounds");
  }
  throw std::logic_error("unreachable");
}

std::pair<double, double> tv_tensorize_bounds(
    const std::vector<double>& components) {
  double lo = 0.0, sum = 0.0;
  for (double v : components) {
    lo = std::max(lo, v);
    sum += v;
  }
  return {lo, std::min(1.0, sum)};
}

}  // namespace cutofflab
