#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "cutofflab/dyson.hpp"
#include "cutofflab/sde_kernels.hpp"

// The two coupling constructions: the parallel coupling (shared noise, used
// for Wasserstein-type decay) and the merge coupling with its area process
// A_t = pi(Y) - pi(X) (used for the TV upper bound), plus the supermartingale
// tail experiment on the accumulated quadratic variation of A.

namespace cutofflab {

struct CoupledPair {
  ParticleState x;
  ParticleState y;
  std::vector<bool> merged_mask;  // per-coordinate y_i == x_i
  double area = 0.0;              // sum of gaps = pi(y) - pi(x)
  std::size_t n_active = 0;       // #{i : x_i != y_i}
};

struct ParallelCouplingResult {
  std::vector<double> t_grid;
  std::vector<double> euclid_gap;  // |X_t - Y_t|
  std::vector<double> max_gap;     // max_i (y_i - x_i)
};

// Both paths driven by the same Brownian increments.
ParallelCouplingResult parallel_coupling_run(const ParticleState& x0,
                                             const ParticleState& y0,
                                             const DouParams& params,
                                             const SimPlan& plan,
                                             std::uint64_t stream_id = 0);

struct MergeCouplingResult {
  std::vector<double> t_grid;
  std::vector<double> area_path;
  std::vector<std::size_t> n_active_path;
  std::vector<double> quad_variation_path;  // accumulated (2/n) N_t dt
  double tau = 0.0;
  bool censored = false;
  bool ordering_ok = true;  // y_i >= x_i held at every grid time
};

// Switching-noise pair: X driven by stream B; coordinate i of Y driven by B
// where y_i = x_i and by an independent stream W otherwise.  Coordinates only
// merge collectively, when the area reaches the merge tolerance n * 1e-12.
// y0 is sampled by regularize_initial(x0, spec).
MergeCouplingResult merge_coupling_run(const ParticleState& x0,
                                       const DouParams& params,
                                       const RegularizerSpec& spec,
                                       const SimPlan& plan,
                                       std::uint64_t stream_id = 0);

// Same dynamics from the explicit pair (x0, y0) (y0 >= x0 coordinatewise).
MergeCouplingResult merge_coupling_from_pair(const ParticleState& x0,
                                             const ParticleState& y0,
                                             const DouParams& params,
                                             const SimPlan& plan,
                                             std::uint64_t stream_id);

struct TailRow {
  double u;
  double bound;        // 4 u^{-1/2}
  double empirical;    // P(<A>_tau >= a^2 u), censored counted as exceeding
  double wilson_lower;
  double wilson_upper;
  long exceed_count;
};

struct TailExperimentResult {
  std::vector<TailRow> rows;
  std::size_t replicas = 0;
  std::size_t censored = 0;
};

// Merge-coupling replicas started from A_0 = a (y0 = x0 + a/n on the
// semicircle-quantile configuration), tallying P(<A>_tau >= a^2 u) against
// the 4 u^{-1/2} tail bound with Wilson 95% intervals.
TailExperimentResult supermartingale_tail_experiment(
    double a, const std::vector<double>& u_grid, std::size_t replicas,
    const DouParams& params, const SimPlan& plan, unsigned threads = 1);

}  // namespace cutofflab
