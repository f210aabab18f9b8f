#include "cutofflab/ou_exact.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutofflab/special_functions.hpp"

namespace cutofflab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double OuSpec::z0_norm2() const {
  double s = 0.0;
  for (double z : z0) s += z * z;
  return s;
}

GaussianLaw ou_law_at(const OuSpec& spec, double t) {
  if (spec.n < 1 || spec.z0.size() != spec.n)
    throw std::invalid_argument("ou_law_at: bad spec");
  if (t <= 0.0)
    throw std::domain_error("ou_law_at: law is degenerate at t = 0");
  std::vector<double> mean(spec.n);
  const double decay = std::exp(-t);
  for (std::size_t i = 0; i < spec.n; ++i) mean[i] = spec.z0[i] * decay;
  const double var = -std::expm1(-2.0 * t) / static_cast<double>(spec.n);
  return GaussianLaw::isotropic(std::move(mean), var);
}

double ou_curve_value(MetricKind kind, std::size_t n, double z0norm2,
                      double t) {
  if (t <= 0.0) throw std::domain_error("ou_curve_value: t must be > 0");
  const double nn = static_cast<double>(n);
  const double eps = std::exp(-2.0 * t);
  const double om = -std::expm1(-2.0 * t);  // 1 - e^{-2t}
  switch (kind) {
    case MetricKind::Hellinger: {
      // 1 - H^2 = exp( (n/4) log(4(1-eps)/(2-eps)^2) - n|z0|^2 eps /(4(2-eps)) )
      double b = 0.25 * nn * (std::log1p(-eps) - 2.0 * std::log1p(-0.5 * eps));
      double a = nn * z0norm2 * eps / (4.0 * (2.0 - eps));
      double h2 = -std::expm1(b - a);
      return std::sqrt(std::max(0.0, h2));
    }
    case MetricKind::Kullback:
      return 0.5 * (nn * z0norm2 * eps - nn * eps - nn * std::log1p(-eps));
    case MetricKind::Chi2: {
      double l = -0.5 * nn * std::log1p(-eps * eps) +
                 nn * z0norm2 * eps / (1.0 + eps);
      if (l > 700.0) return kInf;
      return std::expm1(l);
    }
    case MetricKind::Fisher:
      return nn * nn * z0norm2 * eps + nn * nn * eps * eps / om;
    case MetricKind::Wasserstein: {
      double w2 = z0norm2 * eps + 2.0 * (1.0 - std::sqrt(om) - 0.5 * eps);
      return std::sqrt(std::max(0.0, w2));
    }
    case MetricKind::TV:
      throw std::invalid_argument(
          "ou_curve_value: TV has no closed form; use ou_tv_bounds/ou_tv_exact");
  }
  throw std::logic_error("unreachable");
}

std::pair<double, double> ou_tv_bounds(std::size_t n, double z0norm2,
                                       double t) {
  double h = ou_curve_value(MetricKind::Hellinger, n, z0norm2, t);
  double kl = ou_curve_value(MetricKind::Kullback, n, z0norm2, t);
  double lower = h * h;
  double upper = h * std::sqrt(std::max(0.0, 2.0 - h * h));
  if (std::isfinite(kl)) upper = std::min(upper, std::sqrt(2.0 * kl));
  upper = std::min(upper, 1.0);
  return {lower, std::max(lower, upper)};
}

double ou_tv_exact(std::size_t n, double z0norm2, double t) {
  if (t <= 0.0) throw std::domain_error("ou_tv_exact: t must be > 0");
  const double nn = static_cast<double>(n);
  const double eps = std::exp(-2.0 * t);
  const double om = -std::expm1(-2.0 * t);
  if (z0norm2 == 0.0) return tv_gamma_crossing(t, n).second;

  // Laws N(m1, s1^2 I) vs N(0, s2^2 I) with s1^2 = (1-eps)/n, s2^2 = 1/n,
  // |m1|^2 = |z0|^2 eps.  The likelihood-ratio statistic is a scaled
  // noncentral chi-square under both laws; the TV is the difference of the
  // two CDFs at the density-crossing threshold.
  const double m2 = z0norm2 * eps;   // |m1|^2
  const double s1_over_s2 = om;      // s1^2 / s2^2
  const double kappa = eps;          // 1 - s1^2/s2^2
  const double m2_over_s1 = m2 * nn / om;
  const double c = -m2_over_s1 * (1.0 - kappa) / kappa;
  const double big_l = -nn * std::log1p(-eps);
  const double lambda1 = m2_over_s1 * (1.0 - kappa) * (1.0 - kappa) /
                         (kappa * kappa);
  const double lambda2 = m2 * nn / (kappa * kappa);
  const double u1 = (big_l - c) / kappa;
  const double u2 = (big_l - c) * s1_over_s2 / kappa;
  double tv = noncentral_chi2_cdf(nn, lambda1, u1) -
              noncentral_chi2_cdf(nn, lambda2, u2);
  if (tv < 0.0) tv = 0.0;
  if (tv > 1.0) tv = 1.0;
  return tv;
}

CurveTable ou_distance_curve(const OuSpec& spec, MetricKind kind,
                             const std::vector<double>& ts, bool exact_tv) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] <= 0.0 || (i > 0 && ts[i] <= ts[i - 1]))
      throw std::invalid_argument(
          "ou_distance_curve: grid must be positive and strictly increasing");
  }
  const double z0norm2 = spec.z0_norm2();
  CurveTable table;
  for (double t : ts) {
    if (kind == MetricKind::TV) {
      if (exact_tv) {
        table.rows.push_back({"ou-curve", spec.n, 0.0, t, metric_name(kind),
                              BoundType::Exact,
                              ou_tv_exact(spec.n, z0norm2, t), {}, {}, 0, 0});
      } else {
        auto [lo, hi] = ou_tv_bounds(spec.n, z0norm2, t);
        table.rows.push_back({"ou-curve", spec.n, 0.0, t, metric_name(kind),
                              BoundType::Lower, lo, {}, {}, 0, 0});
        table.rows.push_back({"ou-curve", spec.n, 0.0, t, metric_name(kind),
                              BoundType::Upper, hi, {}, {}, 0, 0});
      }
    } else {
      table.rows.push_back({"ou-curve", spec.n, 0.0, t, metric_name(kind),
                            BoundType::Exact,
                            ou_curve_value(kind, spec.n, z0norm2, t),
                            {}, {}, 0, 0});
    }
  }
  return table;
}

CutoffTime cutoff_time(MetricKind kind, std::size_t n, double z0norm) {
  const double nn = static_cast<double>(n);
  switch (kind) {
    case MetricKind::TV:
    case MetricKind::Hellinger:
    case MetricKind::Kullback:
    case MetricKind::Chi2:
      return {std::max(std::log(std::sqrt(nn) * z0norm), 0.25 * std::log(nn)),
              true};
    case MetricKind::Fisher:
      return {std::max(std::log(nn * z0norm), 0.5 * std::log(nn)), true};
    case MetricKind::Wasserstein: {
      // Cutoff only along sequences with |z0| -> infinity; every bounded
      // z0norm sits on the no-cutoff branch.
      double t = std::log(z0norm);
      return {std::max(t, 0.0), std::isinf(z0norm)};
    }
  }
  throw std::logic_error("unreachable");
}

double profile_value(MetricKind kind, const ProfileRegime& regime, double b) {
  const double a = regime.a;
  if (a < 0.0) throw std::invalid_argument("profile_value: a < 0");
  const bool inf_a = std::isinf(a);
  const double e2 = std::exp(-2.0 * b);
  const double e4 = std::exp(-4.0 * b);
  switch (kind) {
    case MetricKind::Hellinger: {
      double expo = inf_a ? e2 / 8.0 : a * e2 / 8.0 + e4 / 16.0;
      if (!inf_a && a == 0.0) expo = e4 / 16.0;
      return std::sqrt(-std::expm1(-expo));
    }
    case MetricKind::Kullback: {
      if (inf_a) return 0.5 * e2;
      if (a == 0.0) return 0.25 * e4;
      return 0.5 * a * e2 + 0.25 * e4;
    }
    case MetricKind::Chi2: {
      double expo = inf_a ? e2 : (a == 0.0 ? 0.5 * e4 : a * e2 + 0.5 * e4);
      return std::expm1(expo);
    }
    case MetricKind::Fisher: {
      if (inf_a) return e2;
      if (a == 0.0) return e4;
      return a * e2 + e4;
    }
    case MetricKind::TV: {
      if (inf_a) return std::erf(std::exp(-b) / (2.0 * std::sqrt(2.0)));
      if (a == 0.0) return std::erf(e2 / 4.0);
      return std::erf(std::sqrt(2.0 * a * e2 + e4) / 4.0);
    }
    case MetricKind::Wasserstein:
      throw std::invalid_argument(
          "profile_value: Wasserstein profile lives on the log|z0| scale; use "
          "wasserstein_profile");
  }
  throw std::logic_error("unreachable");
}

double wasserstein_profile(double b) { return std::exp(-b); }

double profile_time(MetricKind kind, std::size_t n, double z0norm,
                    const ProfileRegime& regime, double b) {
  const double nn = static_cast<double>(n);
  if (kind == MetricKind::Wasserstein) return std::log(z0norm) + b;
  if (kind == MetricKind::Fisher) {
    if (std::isinf(regime.a)) return std::log(nn * z0norm) + b;
    return 0.5 * std::log(nn) + b;
  }
  if (std::isinf(regime.a)) return std::log(std::sqrt(nn) * z0norm) + b;
  return 0.25 * std::log(nn) + b;
}

double wasserstein_no_cutoff_limit2(double alpha, double t) {
  const double eps = std::exp(-2.0 * t);
  const double om = -std::expm1(-2.0 * t);
  return alpha * alpha * eps + 2.0 * (1.0 - std::sqrt(om) - 0.5 * eps);
}

double mixing_time(MetricKind kind, const OuSpec& spec, double eta) {
  if (eta <= 0.0 || eta >= metric_max(kind))
    throw std::invalid_argument("mixing_time: eta outside (0, max)");
  const double z0norm2 = spec.z0_norm2();
  auto curve = [&](double t) {
    if (kind == MetricKind::TV) return ou_tv_exact(spec.n, z0norm2, t);
    return ou_curve_value(kind, spec.n, z0norm2, t);
  };
  const double horizon =
      10.0 * (1.0 + cutoff_time(kind, spec.n, std::sqrt(z0norm2)).time);
  double lo = 1e-12, hi = horizon;
  if (curve(hi) > eta)
    throw std::runtime_error("mixing_time: curve stays above eta on horizon");
  if (curve(lo) <= eta) return 0.0;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (curve(mid) <= eta)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace cutofflab
