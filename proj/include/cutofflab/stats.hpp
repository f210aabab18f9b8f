#pragma once

#include <cstddef>
#include <functional>
#include <vector>

// Small statistics toolkit: Kolmogorov-Smirnov tests (one- and two-sample)
// and moment summaries with standard errors.

namespace cutofflab {

struct KsResult {
  double statistic = 0.0;  // sup-norm distance between the compared CDFs
  double p_value = 1.0;
};

// One-sample KS test of `data` against the continuous CDF `cdf`.
// `data` need not be sorted.
KsResult ks_test_one_sample(std::vector<double> data,
                            const std::function<double(double)>& cdf);

// Two-sample KS test.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double stderr_mean = 0.0;
  std::size_t count = 0;
};

MomentSummary summarize(const std::vector<double>& data);

}  // namespace cutofflab
