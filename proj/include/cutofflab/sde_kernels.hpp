#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cutofflab/dyson.hpp"
#include "cutofflab/rng.hpp"

// Time-stepping kernels: exact OU and CIR transition sampling, and the
// order-preserving DOU integrator (explicit Euler with collision guard and
// Brownian-bridge-consistent step halving).

namespace cutofflab {

struct CirParams {
  double a;
  double b;
  double sigma;

  double feller_ratio() const { return 2.0 * a / (sigma * sigma); }
  // CIR parameters of the squared-radius process |X_t|^2 of the DOU.
  static CirParams radius2_of_dou(const DouParams& params);
};

enum class Scheme { ExactOU, ExactCIR, EulerDOU, AdaptiveDOU };

struct SimPlan {
  double dt;
  Scheme scheme;
  std::size_t replicas;
  std::vector<double> t_grid;  // increasing, t_grid[0] >= 0
  std::uint64_t base_seed;
};

// Exact draw from N(z e^{-rho dt}, (theta^2/2)(1 - e^{-2 rho dt})/rho * I).
std::vector<double> ou_transition_sample(const std::vector<double>& z,
                                         double dt, double theta, double rho,
                                         RngStream& rng);

// Exact draw from the CIR transition kernel started at r (scaled noncentral
// chi-square via the Gamma + Poisson mixture).
double cir_transition_sample(double r, double dt, const CirParams& p,
                             RngStream& rng);

// Advance an ordered configuration by dt with the given per-coordinate
// Brownian increments (law N(0, dt) each).  On an ordering violation the step
// is halved and the increment split by a Brownian bridge (AdaptiveDOU) or the
// call fails (EulerDOU).  min_dt is the smallest admissible substep.
std::vector<double> dou_advance(const std::vector<double>& x, double dt,
                                const std::vector<double>& increments,
                                const DouParams& params, RngStream& rng,
                                double min_dt, bool adaptive);

// One integrator step of size dt (draws its own increments).
ParticleState dou_step(const ParticleState& state, double dt,
                       const DouParams& params, RngStream& rng,
                       Scheme scheme = Scheme::AdaptiveDOU,
                       double min_dt_factor = 1e-9);

struct Observable {
  std::string label;
  std::function<double(const std::vector<double>&)> fn;
};

struct SimResult {
  std::vector<double> t_grid;
  std::vector<std::string> labels;
  // values[replica][grid_index][observable_index]
  std::vector<std::vector<std::vector<double>>> values;
};

// Replica sweep: each replica r uses RngStream(base_seed, r), so the result
// is bitwise reproducible and independent of any parallel scheduling.
// threads <= 1 runs serially.
SimResult simulate_paths(const SimPlan& plan, const ParticleState& initial,
                         const DouParams& params,
                         const std::vector<Observable>& observables,
                         unsigned threads = 1);

}  // namespace cutofflab
