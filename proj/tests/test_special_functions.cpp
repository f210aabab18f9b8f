#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cutofflab/rng.hpp"
#include "cutofflab/special_functions.hpp"
#include "oracles.hpp"

using namespace cutofflab;

TEST_CASE("regularized gamma: closed-form spot values") {
  // P(1, x) = 1 - e^{-x}
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(regularized_gamma_p(1.0, x) ==
          doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
  }
  // Q(1/2, x) = erfc(sqrt(x))
  for (double x : {0.05, 0.3, 1.0, 4.0, 9.0}) {
    CHECK(regularized_gamma_q(0.5, x) ==
          doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
  }
  CHECK(regularized_gamma_p(2.5, 0.0) == 0.0);
  CHECK(regularized_gamma_q(2.5, 0.0) == 1.0);
}

TEST_CASE("regularized gamma: quadrature oracle") {
  for (double a : {0.7, 1.0, 2.3, 5.0, 17.5}) {
    for (double x : {0.2, 1.0, 3.0, 8.0, 25.0}) {
      const double numeric = oracle::gamma_p(a, x);
      CHECK(regularized_gamma_p(a, x) ==
            doctest::Approx(numeric).epsilon(1e-9));
      CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("normal cdf/pdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double x : {-3.0, -1.0, -0.2, 0.7, 2.5}) {
    CHECK(normal_cdf(x) ==
          doctest::Approx(0.5 * std::erfc(-x / std::sqrt(2.0)))
              .epsilon(1e-14));
    CHECK(normal_pdf(x) ==
          doctest::Approx(std::exp(-0.5 * x * x) /
                          std::sqrt(2.0 * 3.14159265358979323846))
              .epsilon(1e-14));
  }
}

namespace {

// Independent oracle: Poisson mixture of central chi-square CDFs, each term
// evaluated by quadrature of the gamma density.
double ncchi2_oracle(double k, double lambda, double x) {
  double total = 0.0;
  const double half_l = 0.5 * lambda;
  for (int j = 0; j < 220; ++j) {
    const double log_w = -half_l + j * std::log(half_l > 0 ? half_l : 1.0) -
                         std::lgamma(j + 1.0);
    const double w = half_l > 0 ? std::exp(log_w) : (j == 0 ? 1.0 : 0.0);
    if (w < 1e-18 && j > half_l) break;
    const double a = 0.5 * k + j;
    total += w * oracle::gamma_p(a, 0.5 * x);
  }
  return total;
}

}  // namespace

TEST_CASE("noncentral chi-square CDF: mixture branch vs oracle") {
  struct Case {
    double k, lambda, x;
  };
  for (const Case& c : {Case{3.0, 0.0, 2.5}, Case{3.0, 4.0, 6.0},
                        Case{8.0, 1.5, 10.0}, Case{16.0, 25.0, 40.0},
                        Case{1.0, 9.0, 12.0}, Case{50.0, 80.0, 130.0}}) {
    CHECK(noncentral_chi2_cdf(c.k, c.lambda, c.x) ==
          doctest::Approx(ncchi2_oracle(c.k, c.lambda, c.x)).epsilon(1e-8));
  }
}

TEST_CASE("noncentral chi-square CDF: basic shape") {
  CHECK(noncentral_chi2_cdf(4.0, 2.0, 0.0) == doctest::Approx(0.0));
  CHECK(noncentral_chi2_cdf(4.0, 2.0, 1e6) == doctest::Approx(1.0));
  double prev = 0.0;
  for (double x = 0.5; x < 30.0; x += 0.5) {
    const double cur = noncentral_chi2_cdf(4.0, 2.0, x);
    CHECK(cur >= prev);
    prev = cur;
  }
  // huge-parameter branch: median near mean, monotone, consistent with the
  // normal limit
  const double k = 2e5, lambda = 5e4;
  const double mean = k + lambda;
  const double sd = std::sqrt(2.0 * (k + 2.0 * lambda));
  CHECK(noncentral_chi2_cdf(k, lambda, mean) ==
        doctest::Approx(0.5).epsilon(0.01));
  CHECK(noncentral_chi2_cdf(k, lambda, mean + 3.0 * sd) ==
        doctest::Approx(normal_cdf(3.0)).epsilon(0.01));
  CHECK(noncentral_chi2_cdf(k, lambda, mean + sd) >
        noncentral_chi2_cdf(k, lambda, mean));
}

TEST_CASE("kolmogorov survival function") {
  // alternating-series oracle (converges for the tested arguments)
  auto q_series = [](double x) {
    double s = 0.0;
    for (int j = 1; j < 200; ++j) {
      const double term = std::exp(-2.0 * j * j * x * x);
      s += (j % 2 == 1 ? term : -term);
      if (term < 1e-18) break;
    }
    return 2.0 * s;
  };
  for (double x : {0.5, 0.8, 1.0, 1.2, 1.5, 2.0}) {
    CHECK(kolmogorov_q(x) == doctest::Approx(q_series(x)).epsilon(1e-10));
  }
  CHECK(kolmogorov_q(1e-4) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kolmogorov_q(8.0) < 1e-20);
}

TEST_CASE("wilson interval") {
  const WilsonInterval wi = wilson_interval_95(8, 100);
  // hand-computed score interval, z = 1.959963984540054
  const double z = 1.959963984540054;
  const double p = 0.08, n = 100.0;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  CHECK(wi.lower == doctest::Approx(center - half).epsilon(1e-12));
  CHECK(wi.upper == doctest::Approx(center + half).epsilon(1e-12));
  const WilsonInterval zero = wilson_interval_95(0, 50);
  CHECK(zero.lower == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zero.upper > 0.0);
  CHECK(zero.upper < 0.1);
}

TEST_CASE("rng: moments and determinism") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool identical = true, distinct = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    if (va != b.next_u64()) identical = false;
    if (va != c.next_u64()) distinct = true;
  }
  CHECK(identical);
  CHECK(distinct);

  RngStream r(123, 0);
  double sum = 0.0, sum2 = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(sum / m == doctest::Approx(0.0).epsilon(1.0).scale(0.01));
  CHECK(sum2 / m == doctest::Approx(1.0).epsilon(0.02));

  double gsum = 0.0;
  const double shape = 3.7;
  for (int i = 0; i < m / 4; ++i) gsum += r.gamma(shape);
  CHECK(gsum / (m / 4) == doctest::Approx(shape).epsilon(0.03));

  double psum = 0.0;
  const double rate = 12.5;
  for (int i = 0; i < m / 4; ++i) psum += static_cast<double>(r.poisson(rate));
  CHECK(psum / (m / 4) == doctest::Approx(rate).epsilon(0.03));
}
