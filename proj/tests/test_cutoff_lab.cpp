#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cutofflab/cutoff_lab.hpp"
#include "cutofflab/ou_exact.hpp"
#include "cutofflab/rng.hpp"
#include "cutofflab/sde_kernels.hpp"
#include "oracles.hpp"

using namespace cutofflab;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (std::getline(in, tok, sep)) out.push_back(tok);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

// Schema validator shared by the CSV-producing tests.
void validate_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line ==
          "experiment,n,beta,t,metric,bound_type,value,mc_estimate,mc_stderr,"
          "replicas,seed");
  while (std::getline(in, line)) {
    const std::vector<std::string> f = split(line, ',');
    REQUIRE(f.size() == 11);
    CHECK(!f[0].empty());
    CHECK(std::stoull(f[1]) >= 0);
    CHECK((f[5] == "exact" || f[5] == "lower" || f[5] == "upper"));
    // value parses as a double (inf/nan spellings included)
    CHECK((f[6] == "inf" || f[6] == "-inf" || f[6] == "nan" ||
           std::isfinite(std::stod(f[6]))));
    CHECK(f[7].empty() == f[8].empty());
  }
}

ParticleState ones_state(std::size_t n, double a = 1.0) {
  return ParticleState{std::vector<double>(n, a), 0.0};
}

}  // namespace

TEST_CASE("lower bounds: beta-universal bytes and exactness") {
  const std::vector<double> ts = {0.3, 1.0, 2.7};
  const ParticleState x0 = ones_state(16);
  std::string reference;
  for (double beta : {0.0, 1.0, 2.0}) {
    DouParams params(16, beta);
    CurveTable t = lower_bound_curve(x0, params, MetricKind::TV, ts);
    if (reference.empty()) reference = t.to_csv();
    CHECK(t.to_csv() == reference);
  }
  validate_csv(reference);
}

TEST_CASE("lower bounds: match the exact 1D projection computation") {
  const ParticleState x0{{0.5, -0.2, 1.1, 0.3}, 0.0};
  DouParams params(4, 2.0);
  const double pi0 = 0.5 - 0.2 + 1.1 + 0.3;
  for (double t : {0.4, 1.2, 3.0}) {
    const double eps = std::exp(-2.0 * t);
    const oracle::Gauss1 p{pi0 * std::exp(-t), 1.0 - eps};
    const oracle::Gauss1 q{0.0, 1.0};
    CurveTable tv = lower_bound_curve(x0, params, MetricKind::TV, {t});
    CHECK(tv.rows[0].value ==
          doctest::Approx(oracle::hellinger2(p, q)).epsilon(1e-7));
    CurveTable kl = lower_bound_curve(x0, params, MetricKind::Kullback, {t});
    CHECK(kl.rows[0].value ==
          doctest::Approx(oracle::kullback(p, q)).epsilon(1e-7));
    CurveTable c2 = lower_bound_curve(x0, params, MetricKind::Chi2, {t});
    CHECK(c2.rows[0].value ==
          doctest::Approx(oracle::chi2(p, q)).epsilon(1e-6));
    CurveTable w = lower_bound_curve(x0, params, MetricKind::Wasserstein, {t});
    CHECK(w.rows[0].value ==
          doctest::Approx(std::sqrt(oracle::wasserstein2(p, q) / 4.0))
              .epsilon(1e-5));
    // the lower bounds never exceed the exact beta = 0 curves
    CHECK(tv.rows[0].value <=
          ou_tv_exact(4, radius2(x0.x), t) + 1e-9);
  }
  CHECK_THROWS_AS(lower_bound_curve(x0, params, MetricKind::Fisher, {1.0}),
                  std::invalid_argument);
  // t = 0: degenerate vs continuous
  CHECK(lower_bound_curve(x0, params, MetricKind::TV, {0.0}).rows[0].value ==
        doctest::Approx(1.0));
}

TEST_CASE("mehta log partition") {
  // n = 1: Gaussian integral
  CHECK(mehta_log_partition_star(DouParams(1, 2.0)) ==
        doctest::Approx(0.5 * std::log(2.0 * 3.14159265358979323846))
            .epsilon(1e-13));
  // n = 2, beta = 2 against direct 2D quadrature of e^{-(x^2+y^2)} (x-y)^2
  const double numeric = oracle::integrate2d(
      [](double x, double y) {
        const double d = x - y;
        return std::exp(-(x * x + y * y)) * d * d;
      },
      -8.0, 8.0, -8.0, 8.0, 48);
  CHECK(std::exp(mehta_log_partition_star(DouParams(2, 2.0))) ==
        doctest::Approx(numeric).epsilon(1e-6));
  // ordered-chamber value: star minus log n!
  CHECK(mehta_log_partition(DouParams(2, 2.0)) ==
        doctest::Approx(mehta_log_partition_star(DouParams(2, 2.0)) -
                        std::log(2.0)));
  // quadratic growth with a fitted constant
  for (std::size_t n : {4, 8, 16, 32, 64}) {
    const double v = mehta_log_partition_star(DouParams(n, 2.0));
    CHECK(std::abs(v) <= 3.0 * static_cast<double>(n) * n);
  }
}

TEST_CASE("entropy upper curve: decay, budget, consistency") {
  const std::size_t n = 16;
  DouParams params(n, 2.0);
  RegularizerSpec spec{2.0};
  const ParticleState x0 = ones_state(n);
  const double budget = entropy_budget(x0, params, spec);
  CHECK(budget > 0.0);
  const std::vector<double> ts = {0.5, 1.0, 2.0, 4.0};
  CurveTable curve = entropy_upper_curve(x0, params, spec, ts);
  validate_csv(curve.to_csv());
  double kl_at_1 = -1.0, kl_at_2 = -1.0;
  for (const CurveRow& r : curve.rows) {
    CHECK(r.bound_type == BoundType::Upper);
    if (r.metric == "kullback" && r.t == 1.0) kl_at_1 = r.value;
    if (r.metric == "kullback" && r.t == 2.0) kl_at_2 = r.value;
    if (r.metric == "tv") CHECK(r.value <= 1.0);
  }
  // exact e^{-2t} decay between grid times
  CHECK(kl_at_2 == doctest::Approx(kl_at_1 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(kl_at_1 == doctest::Approx(budget * std::exp(-2.0)).epsilon(1e-12));
  // crossing consistency: the time where the TV band drops below 0.01 is not
  // earlier than the time where the exact TV lower bound drops below 1/2
  const double t_upper = 0.5 * std::log(2.0 * budget / (0.01 * 0.01));
  double t_lower = 0.0;
  for (double t = 0.05; t < 20.0; t += 0.05) {
    if (lower_bound_curve(x0, params, MetricKind::TV, {t}).rows[0].value <
        0.5) {
      t_lower = t;
      break;
    }
  }
  CHECK(t_upper >= t_lower);
  CHECK_THROWS_AS(entropy_upper_curve(x0, DouParams(n, 0.0), spec, ts),
                  std::invalid_argument);
}

TEST_CASE("douk budget") {
  DouParams params(2, 2.0);
  InitBudget unit = douk_budget(
      {UniformLaw{0.0, 1.0}, UniformLaw{2.0, 3.0}}, params);
  CHECK(unit.entropy_sum == doctest::Approx(0.0));
  CHECK(unit.first_moment_flag);
  CHECK(unit.mean_offset == doctest::Approx(1.5));

  // pairwise log term for Uniform[0,1] x Uniform[2,3]: the mean of
  // log 1/|x-y| lies between -log 3 and 0
  const double quad = oracle::integrate2d(
      [](double x, double y) { return std::log(1.0 / std::abs(x - y)); },
      0.0, 1.0, 2.0, 3.0, 32);
  CHECK(quad >= -std::log(3.0) - 1e-9);
  CHECK(quad <= 0.0 + 1e-9);
  const double confinement =
      2.0 * ((0.0 + 0.0 + 1.0) / 6.0 + (4.0 + 6.0 + 9.0) / 6.0);
  // Sum over i != j counts the pair twice: beta/2 * 2 = beta = 2
  CHECK(unit.interaction_sum ==
        doctest::Approx(confinement + 2.0 * quad).epsilon(1e-8));

  // overlapping supports stay finite
  InitBudget overlap = douk_budget(
      {UniformLaw{0.0, 1.0}, UniformLaw{0.5, 1.5}}, params);
  CHECK(std::isfinite(overlap.interaction_sum));
  // centered components: no first-moment divergence flag
  InitBudget centered = douk_budget(
      {UniformLaw{-1.0, 1.0}, UniformLaw{-0.5, 0.5}}, params);
  CHECK_FALSE(centered.first_moment_flag);
  CHECK_THROWS_AS(douk_budget({UniformLaw{0.0, 0.0}, UniformLaw{0.0, 1.0}},
                              params),
                  std::invalid_argument);
}

TEST_CASE("empirical tv via pi") {
  const ParticleState centered{std::vector<double>(8, 0.0), 0.0};
  TvEstimate far = empirical_tv_via_pi({}, centered, 8.0);
  CHECK(far.tv_lower < 1e-6);
  CHECK(far.stderr_est == 0.0);

  // consistency with the Hellinger^2-based bound ordering
  const ParticleState x0 = ones_state(8);
  DouParams params(8, 2.0);
  for (double t : {0.5, 1.5, 3.0}) {
    const double tv = empirical_tv_via_pi({}, x0, t).tv_lower;
    const double h2 =
        lower_bound_curve(x0, params, MetricKind::TV, {t}).rows[0].value;
    CHECK(tv >= h2 - 1e-10);
  }

  // beta-independence through simulated samples, plus the KS sanity check
  const double t = 1.0;
  // beta = 1 is the collision-critical case where the adaptive integrator is
  // allowed to give up at the minimum step; stick to the repulsive betas here
  for (double beta : {2.0, 4.0}) {
    DouParams p(4, beta);
    ParticleState start = reorder({0.8, 0.9, 1.1, 1.2}, 0.0);
    SimPlan plan{1e-3, Scheme::AdaptiveDOU, 3000, {t}, 13};
    SimResult sim = simulate_paths(
        plan, start, p,
        {{"pi", [](const std::vector<double>& x) { return pi_sum(x); }}}, 1);
    std::vector<double> pis;
    for (const auto& rep : sim.values) pis.push_back(rep[0][0]);
    TvEstimate est = empirical_tv_via_pi(pis, start, t);
    CHECK(est.ks_p_value > 1e-3);
    CHECK(est.tv_lower ==
          doctest::Approx(empirical_tv_via_pi({}, start, t).tv_lower));
  }

  // data-quality rejection on deliberately wrong samples
  std::vector<double> junk(2000);
  RngStream rng(1, 0);
  for (double& v : junk) v = 25.0 + rng.normal();
  CHECK_THROWS_AS(empirical_tv_via_pi(junk, x0, 1.0), std::runtime_error);
  CHECK_THROWS_AS(empirical_tv_via_pi({}, x0, 0.0), std::domain_error);
}

TEST_CASE("transient moment crossings on the exact formulas") {
  const std::size_t n = 256;
  const double beta = 1.0;
  const double beta_n = 1.0 + beta * (n - 1.0) / 2.0;
  const ParticleState x0 = ones_state(n);
  const double pi0 = pi_sum(x0.x);
  const double r0 = radius2(x0.x);
  // |E pi(X_t)| = pi0 e^{-t} crosses 1 at t = log n
  const double t_pi = std::log(pi0);
  CHECK(t_pi == doctest::Approx(std::log(static_cast<double>(n))));
  CHECK(pi0 * std::exp(-(t_pi - 0.1)) > 1.0);
  CHECK(pi0 * std::exp(-(t_pi + 0.1)) < 1.0);
  // |E|X_t|^2 - beta_n| crosses 1 near t = (1/2) log n
  const double t_r = 0.5 * std::log(std::abs(r0 - beta_n));
  CHECK(t_r ==
        doctest::Approx(0.5 * std::log(static_cast<double>(n)))
            .epsilon(0.2));
  CHECK(std::abs(r0 - beta_n) * std::exp(-2.0 * (t_r - 0.1)) > 1.0);
  CHECK(std::abs(r0 - beta_n) * std::exp(-2.0 * (t_r + 0.1)) < 1.0);
}

TEST_CASE("run_experiment: hellinger figure") {
  ExperimentConfig config;
  config.name = "hellinger-figure";
  for (double t = 0.25; t <= 8.0; t += 0.25) config.ts.push_back(t);
  ExperimentResult res = run_experiment(config);
  validate_csv(res.table.to_csv());
  REQUIRE(!res.table.rows.empty());
  // midpoint crossing near log 50
  double crossing = 0.0;
  for (const CurveRow& r : res.table.rows)
    if (r.value >= 0.5) crossing = std::max(crossing, r.t);
  CHECK(std::abs(crossing - std::log(50.0)) < 0.5 + 0.25);
}

TEST_CASE("run_experiment: oudou figure writes per-beta trajectories") {
  const std::string dir = "oudou_test_out";
  std::filesystem::remove_all(dir);
  ExperimentConfig config;
  config.name = "oudou-figure";
  config.dt = 5e-3;
  for (double t = 0.1; t <= 1.0; t += 0.1) config.ts.push_back(t);
  config.output_dir = dir;
  ExperimentResult res = run_experiment(config);
  REQUIRE(res.files_written.size() == 3);  // two trajectories + the table
  for (const std::string& f : res.files_written)
    CHECK(std::filesystem::exists(f));
  // same driving noise: at t = 0.1 the beta = 0 and beta = 2 paths are close
  // but not identical
  bool has_beta0 = false, has_beta2 = false;
  for (const CurveRow& r : res.table.rows) {
    if (r.beta == 0.0) has_beta0 = true;
    if (r.beta == 2.0) has_beta2 = true;
  }
  CHECK(has_beta0);
  CHECK(has_beta2);
  // determinism
  ExperimentResult res2 = run_experiment(config);
  CHECK(res.table.to_csv() == res2.table.to_csv());
  std::filesystem::remove_all(dir);
}

TEST_CASE("run_experiment: empty grid and unknown name") {
  ExperimentConfig config;
  config.name = "cutoff-sweep";
  ExperimentResult res = run_experiment(config);
  CHECK(res.table.rows.empty());
  config.name = "nonsense";
  CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}

TEST_CASE("run_experiment: sweep sandwich") {
  ExperimentConfig config;
  config.name = "cutoff-sweep";
  config.ns = {16};
  config.betas = {0.0, 2.0};
  config.ts = {1.0, 2.0, 3.5};
  ExperimentResult res = run_experiment(config);
  validate_csv(res.table.to_csv());
  // for each (t, metric) with both a lower and an upper row: lower <= upper
  for (const CurveRow& lo : res.table.rows) {
    if (lo.bound_type != BoundType::Lower) continue;
    for (const CurveRow& hi : res.table.rows) {
      if (hi.bound_type != BoundType::Upper || hi.t != lo.t ||
          hi.metric != lo.metric)
        continue;
      if (!std::isfinite(lo.value) || !std::isfinite(hi.value)) continue;
      CAPTURE(lo.metric);
      CAPTURE(lo.t);
      CHECK(lo.value <= hi.value + 1e-12);
    }
  }
}
