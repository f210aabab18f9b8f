#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cutofflab/rng.hpp"

// DOU-specific state construction and observables: configuration energy,
// eigen-observables, the regularized initial condition, semicircle utilities,
// and exact equilibrium sampling through the tridiagonal random matrix model.

namespace cutofflab {

struct DouParams {
  std::size_t n;
  double beta;

  DouParams(std::size_t n_arg, double beta_arg);
};

struct ParticleState {
  std::vector<double> x;  // non-decreasing
  double t = 0.0;
};

struct RegularizerSpec {
  double kappa;  // > 3/2 for the TV experiments

  double eta(std::size_t n) const;
};

// E(x) = n sum V(x_i) + beta sum_{i>j} log 1/|x_i - x_j|, V(x) = x^2/2.
// +infinity for coincident coordinates when beta > 0.
double energy(const std::vector<double>& x, const DouParams& params);

double pi_sum(const std::vector<double>& x);
double radius2(const std::vector<double>& x);

ParticleState reorder(std::vector<double> x, double t = 0.0);

// Sample of the product law (x) Uniform[x_i + 3 i eta, x_i + 3 i eta + eta]
// (1-based i): supports pairwise >= eta apart, sup-displacement <= (3n+1) eta.
ParticleState regularize_initial(const ParticleState& x0,
                                 const RegularizerSpec& spec, RngStream& rng);

// CDF of the semicircle law on [-sqrt(2 beta), sqrt(2 beta)].
double semicircle_cdf(double x, double beta);

// 1/n-quantiles rho_{n,i} = inf{t : F(t) >= i/n}; zero vector when beta = 0.
std::vector<double> semicircle_quantiles(const DouParams& params);

// Exact equilibrium sample: iid N(0,1/n) sorted when beta = 0, rescaled
// tridiagonal beta-Hermite eigenvalues when beta >= 1.
ParticleState equilibrium_sample(const DouParams& params, RngStream& rng);

// Moment flow of the mean-field limit: m1(t) = m1(0) e^{-t},
// m2(t) = m2(0) e^{-2t} + (beta/2)(1 - e^{-2t}).
std::pair<double, double> mean_field_moments(std::pair<double, double> m0,
                                             double beta, double t);

}  // namespace cutofflab
