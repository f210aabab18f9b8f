#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cutofflab/couplings.hpp"
#include "cutofflab/dyson.hpp"
#include "cutofflab/stats.hpp"

using namespace cutofflab;

TEST_CASE("parallel coupling, beta = 0: contraction is deterministic") {
  DouParams params(6, 0.0);
  ParticleState x0{{-2.0, -1.0, 0.0, 1.0, 2.0, 3.0}, 0.0};
  ParticleState y0 = x0;
  const double gap0 = 0.5;
  for (double& v : y0.x) v += gap0;
  SimPlan plan{1e-3, Scheme::AdaptiveDOU, 1, {0.5, 1.0, 2.0}, 42};
  ParallelCouplingResult res = parallel_coupling_run(x0, y0, params, plan, 0);
  for (std::size_t g = 0; g < res.t_grid.size(); ++g) {
    const double t = res.t_grid[g];
    // Euler factor (1 - dt)^k lies just below e^{-t}
    CHECK(res.max_gap[g] <= gap0 * std::exp(-t) + 1e-12);
    CHECK(res.max_gap[g] >= gap0 * std::exp(-t) * (1.0 - 2e-3 * t) - 1e-12);
    CHECK(res.euclid_gap[g] ==
          doctest::Approx(res.max_gap[g] * std::sqrt(6.0)).epsilon(1e-9));
  }
}

TEST_CASE("parallel coupling, beta = 2: pathwise exponential decay") {
  DouParams params(8, 2.0);
  ParticleState x0{semicircle_quantiles(params), 0.0};
  ParticleState y0 = x0;
  const double gap0 = 0.3;
  for (double& v : y0.x) v += gap0;
  SimPlan plan{2e-3, Scheme::AdaptiveDOU, 1, {0.5, 1.0, 2.0, 3.0}, 5};
  for (std::uint64_t r = 0; r < 20; ++r) {
    ParallelCouplingResult res =
        parallel_coupling_run(x0, y0, params, plan, r);
    for (std::size_t g = 0; g < res.t_grid.size(); ++g) {
      const double t = res.t_grid[g];
      CHECK(res.max_gap[g] >= 0.0);
      CHECK(res.max_gap[g] * std::exp(t) <= gap0 * (1.0 + 0.05));
    }
  }
}

TEST_CASE("merge coupling: ordering, area, quadratic variation accounting") {
  DouParams params(8, 2.0);
  ParticleState x0{semicircle_quantiles(params), 0.0};
  RegularizerSpec spec{2.0};
  std::vector<double> grid;
  for (double t = 0.25; t <= 6.0; t += 0.25) grid.push_back(t);
  SimPlan plan{5e-3, Scheme::AdaptiveDOU, 1, grid, 11};
  int merged_count = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    MergeCouplingResult res = merge_coupling_run(x0, params, spec, plan, r);
    CHECK(res.ordering_ok);
    double prev_qv = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      CHECK(res.area_path[g] >= -1e-15);
      CHECK(res.quad_variation_path[g] >= prev_qv);
      // rate never exceeds the all-active value 2
      CHECK(res.quad_variation_path[g] <= 2.0 * grid[g] + 1e-9);
      prev_qv = res.quad_variation_path[g];
      if (res.n_active_path[g] == 0) CHECK(res.area_path[g] == 0.0);
    }
    if (!res.censored) {
      ++merged_count;
      CHECK(res.tau <= grid.back());
      CHECK(res.area_path.back() == 0.0);
    }
  }
  // the regularized copy starts an O(n eta) area away: merging within the
  // horizon should be the rule, not the exception
  CHECK(merged_count >= 15);
}

TEST_CASE("merge coupling: determinism per stream id") {
  DouParams params(5, 2.0);
  ParticleState x0{semicircle_quantiles(params), 0.0};
  RegularizerSpec spec{2.0};
  SimPlan plan{1e-2, Scheme::AdaptiveDOU, 1, {1.0, 2.0}, 3};
  MergeCouplingResult a = merge_coupling_run(x0, params, spec, plan, 4);
  MergeCouplingResult b = merge_coupling_run(x0, params, spec, plan, 4);
  CHECK(a.tau == b.tau);
  CHECK(a.area_path == b.area_path);
  CHECK(a.quad_variation_path == b.quad_variation_path);
  MergeCouplingResult c = merge_coupling_run(x0, params, spec, plan, 5);
  // after merging the area paths are identically zero, but the accumulated
  // quadratic variation keeps the stream-to-stream randomness visible
  CHECK(a.quad_variation_path != c.quad_variation_path);
}

TEST_CASE("supermartingale tail: bound holds on a small run") {
  DouParams params(4, 2.0);
  std::vector<double> grid;
  for (double t = 1.0; t <= 10.0; t += 1.0) grid.push_back(t);
  SimPlan plan{1e-2, Scheme::AdaptiveDOU, 1, grid, 29};
  TailExperimentResult res = supermartingale_tail_experiment(
      0.5, {4.0, 25.0}, 200, params, plan, 1);
  REQUIRE(res.rows.size() == 2);
  for (const TailRow& row : res.rows) {
    CHECK(row.bound == doctest::Approx(4.0 / std::sqrt(row.u)));
    CHECK(row.empirical >= 0.0);
    CHECK(row.empirical <= 1.0);
    CHECK(row.wilson_lower <= row.empirical + 1e-12);
    CHECK(row.empirical <= row.wilson_upper + 1e-12);
    CHECK(row.wilson_upper <= row.bound);
  }
  CHECK(res.rows[0].empirical >= res.rows[1].empirical);
}

TEST_CASE("error contracts") {
  DouParams params(4, 2.0);
  ParticleState x0{semicircle_quantiles(params), 0.0};
  ParticleState bad = x0;
  bad.x[2] = x0.x[2] - 1.0;  // y0 below x0
  SimPlan plan{1e-2, Scheme::AdaptiveDOU, 1, {1.0}, 0};
  CHECK_THROWS_AS(merge_coupling_from_pair(x0, bad, params, plan, 0),
                  std::invalid_argument);
  SimPlan empty{1e-2, Scheme::AdaptiveDOU, 1, {}, 0};
  CHECK_THROWS_AS(parallel_coupling_run(x0, x0, params, empty, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(supermartingale_tail_experiment(-1.0, {4.0}, 10, params,
                                                  plan, 1),
                  std::invalid_argument);
}
