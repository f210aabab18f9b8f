#include "cutofflab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cutofflab/special_functions.hpp"

namespace cutofflab {

KsResult ks_test_one_sample(std::vector<double> data,
                            const std::function<double(double)>& cdf) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("ks_test_one_sample: empty sample");
  std::sort(data.begin(), data.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(data[i]);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    d = std::max({d, std::abs(f - lo), std::abs(hi - f)});
  }
  const double sn = std::sqrt(static_cast<double>(n));
  // Stephens' small-sample correction to the asymptotic null distribution.
  const double x = d * (sn + 0.12 + 0.11 / sn);
  return {d, kolmogorov_q(x)};
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0)
    throw std::invalid_argument("ks_test_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < na && j < nb) {
    const double va = a[i], vb = b[j];
    if (va <= vb) while (i < na && a[i] == va) ++i;
    if (vb <= va) while (j < nb && b[j] == vb) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(na);
    const double fb = static_cast<double>(j) / static_cast<double>(nb);
    d = std::max(d, std::abs(fa - fb));
  }
  const double ne = static_cast<double>(na) * static_cast<double>(nb) /
                    static_cast<double>(na + nb);
  const double sn = std::sqrt(ne);
  const double x = d * (sn + 0.12 + 0.11 / sn);
  return {d, kolmogorov_q(x)};
}

MomentSummary summarize(const std::vector<double>& data) {
  MomentSummary out;
  out.count = data.size();
  if (data.empty()) throw std::invalid_argument("summarize: empty sample");
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= static_cast<double>(data.size());
  double ss = 0.0;
  for (double v : data) {
    const double d = v - mean;
    ss += d * d;
  }
  out.mean = mean;
  out.variance =
      data.size() > 1 ? ss / static_cast<double>(data.size() - 1) : 0.0;
  out.stderr_mean =
      std::sqrt(out.variance / static_cast<double>(data.size()));
  return out;
}

}  // namespace cutofflab
