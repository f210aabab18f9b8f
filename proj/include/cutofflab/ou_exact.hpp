#pragma once

#include <cstddef>
#include <vector>

#include "cutofflab/curve_table.hpp"
#include "cutofflab/gauss_metrics.hpp"

// Everything exactly solvable about the n-dimensional OU process
// dZ = sqrt(2/n) dB - Z dt: its Gaussian law at time t, the five
// distance-to-equilibrium curves, exact TV through the radial reduction,
// cutoff times, and cutoff profiles.

namespace cutofflab {

struct OuSpec {
  std::size_t n;
  std::vector<double> z0;

  double z0_norm2() const;
};

// Regime parameter a = lim sqrt(n) |z0|^2; +infinity allowed.
struct ProfileRegime {
  double a;
};

// Law of Z_t: N(z0 e^{-t}, (1-e^{-2t})/n * I).  Throws for t <= 0 (the law is
// degenerate there and density-based metrics are undefined).
GaussianLaw ou_law_at(const OuSpec& spec, double t);

// Exact curve value for the five closed-form metrics, as a function of
// (n, |z0|^2, t).  TV is not closed-form; see ou_tv_bounds / ou_tv_exact.
double ou_curve_value(MetricKind kind, std::size_t n, double z0norm2, double t);

// Kraft/Pinsker sandwich for the TV curve.
std::pair<double, double> ou_tv_bounds(std::size_t n, double z0norm2, double t);

// Exact TV between Law(Z_t) and N(0, I/n) via the 1D reduction of the
// log-likelihood-ratio statistic: a difference of two noncentral chi-square
// CDFs (Gamma CDFs when z0 = 0).
double ou_tv_exact(std::size_t n, double z0norm2, double t);

// CurveTable over a time grid: exact rows for the closed-form metrics, a
// lower/upper pair per time for TV (exact TV rows when exact_tv is set).
CurveTable ou_distance_curve(const OuSpec& spec, MetricKind kind,
                             const std::vector<double>& ts,
                             bool exact_tv = false);

struct CutoffTime {
  double time;
  bool has_cutoff;  // false only for the bounded-|z0| Wasserstein branch
};

CutoffTime cutoff_time(MetricKind kind, std::size_t n, double z0norm);

// phi(b) from the profile table; TV uses the erf limit laws.  Wasserstein
// throws (its profile lives on the log|z0| time scale); use
// wasserstein_profile.
double profile_value(MetricKind kind, const ProfileRegime& regime, double b);
double wasserstein_profile(double b);

// The time t_{n,b} at which the profile is attained for finite n.
double profile_time(MetricKind kind, std::size_t n, double z0norm,
                    const ProfileRegime& regime, double b);

// Limiting squared Wasserstein distance in the no-cutoff branch
// (|z0| -> alpha finite).
double wasserstein_no_cutoff_limit2(double alpha, double t);

// Smallest t with curve(t) <= eta, by bisection to 1e-9; horizon defaults to
// 10*(1+cutoff_time).  TV uses the exact radial computation.
double mixing_time(MetricKind kind, const OuSpec& spec, double eta);

}  // namespace cutofflab
