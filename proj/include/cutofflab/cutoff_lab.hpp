#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutofflab/curve_table.hpp"
#include "cutofflab/dyson.hpp"

// Experiment orchestration: exact projection lower-bound curves, the explicit
// entropy-budget upper band, the log-partition function of the equilibrium
// measure, initial-condition budgets for product laws, and the sweep harness
// behind the CLI.

namespace cutofflab {

// Exact 1D lower bounds obtained by projecting onto pi(x) = sum_i x_i, whose
// law under the dynamics is N(pi(x0) e^{-t}, 1 - e^{-2t}) for every beta.
// The rows carry beta = NaN because the bound is beta-independent.
// Supported kinds: TV, Hellinger, Kullback, Chi2, Wasserstein.
CurveTable lower_bound_curve(const ParticleState& x0, const DouParams& params,
                             MetricKind kind, const std::vector<double>& ts);

// Explicit entropy budget B = n log(n^{kappa+1}) + E-hat + log C_n^beta of the
// regularized initial condition; emits kullback upper rows B e^{-2t} and the
// induced tv upper band min(1, sqrt(2 B e^{-2t})).  Requires beta >= 1 (the
// beta = 0 process has exact closed forms instead).
CurveTable entropy_upper_curve(const ParticleState& x0, const DouParams& params,
                               const RegularizerSpec& spec,
                               const std::vector<double>& ts);

// The raw budget constant B (useful for tests and crossing-time computations).
double entropy_budget(const ParticleState& x0, const DouParams& params,
                      const RegularizerSpec& spec);

// log of the Gaussian beta-ensemble partition function
// integral of e^{-(n/2)|x|^2} prod_{i<j} |x_i - x_j|^beta over R^n
// (Selberg/Mehta closed form, evaluated in log-Gamma arithmetic).
double mehta_log_partition_star(const DouParams& params);
// Same integral restricted to the ordered chamber: star value minus log n!.
double mehta_log_partition(const DouParams& params);

struct UniformLaw {
  double lo;
  double hi;
};

struct InitBudget {
  double entropy_sum = 0.0;      // sum_i S(mu_i), S(Uniform of length L) = -log L
  double interaction_sum = 0.0;  // sum_{i != j} double integral of Phi
  double log_partition = 0.0;    // log C_n^beta
  double mean_offset = 0.0;      // (1/n) sum_i mean(mu_i)
  bool first_moment_flag = false;   // mean_offset != 0
  double entropy_per_n2 = 0.0;      // n^{-2} entropy_sum
  double interaction_per_n2 = 0.0;  // n^{-2} interaction_sum
  // Finite-n evaluation only; boundedness of the n^{-2}-scaled terms along a
  // sequence of configurations cannot be certified from a single n.
  std::string note;
};

// Budget terms for a product of uniform interval laws.  Overlapping intervals
// are fine (the log singularity is integrable and the closed form covers it).
InitBudget douk_budget(const std::vector<UniformLaw>& components,
                       const DouParams& params);

struct TvEstimate {
  double tv_lower = 0.0;  // exact 1D TV through the pi projection
  double stderr_est = 0.0;  // 0: the value is exact, not sampled
  double ks_p_value = 1.0;  // sanity check of the samples against the 1D law
};

// Exact TV between N(pi(x0) e^{-t}, 1 - e^{-2t}) and N(0, 1); the pi samples
// only feed a KS sanity check and a data-quality error (p < 1e-4) when the
// integrator that produced them was too coarse.
TvEstimate empirical_tv_via_pi(const std::vector<double>& pi_samples,
                               const ParticleState& x0, double t);

struct ExperimentConfig {
  std::string name;  // "hellinger-figure" | "oudou-figure" | "cutoff-sweep"
  std::vector<std::size_t> ns;
  std::vector<double> betas;
  std::vector<double> ts;
  std::vector<MetricKind> kinds;
  double z0_scale = 1.0;  // x0 = z0_scale * (1, ..., 1)
  std::size_t replicas = 0;
  double dt = 1e-3;
  double kappa = 2.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string output_dir;  // empty: no files written
};

struct ExperimentResult {
  CurveTable table;
  std::vector<std::string> files_written;
};

// Deterministic sweep harness; sorts the table canonically and optionally
// writes CSV artifacts under output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace cutofflab
