#include "cutofflab/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cutofflab/parallel.hpp"
#include "cutofflab/special_functions.hpp"

namespace cutofflab {

namespace {

constexpr std::uint64_t kIndependentStreamFlag = 0x8000000000000000ull;

bool strictly_ordered(const std::vector<double>& x) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1])) return false;
  return true;
}

void dou_drift(const std::vector<double>& x, const DouParams& params,
               std::vector<double>& out) {
  const std::size_t n = x.size();
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = -x[i];
  if (params.beta > 0.0) {
    const double coef = params.beta / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        s += 1.0 / (x[i] - x[j]);
      }
      out[i] += coef * s;
    }
  }
}

void euler(const std::vector<double>& x, double dt,
           const std::vector<double>& inc, const DouParams& params,
           std::vector<double>& out) {
  const double noise_scale = std::sqrt(2.0 / static_cast<double>(x.size()));
  std::vector<double> drift;
  dou_drift(x, params, drift);
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = x[i] + dt * drift[i] + noise_scale * inc[i];
}

void bridge_split(const std::vector<double>& w, double dt, RngStream& rng,
                  std::vector<double>& w1, std::vector<double>& w2) {
  const double half_sd = 0.5 * std::sqrt(dt);
  w1.resize(w.size());
  w2.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w1[i] = 0.5 * w[i] + half_sd * rng.normal();
    w2[i] = w[i] - w1[i];
  }
}

// Shared-noise joint substep with bridge-consistent halving.
void advance_shared(std::vector<double>& x, std::vector<double>& y, double dt,
                    const std::vector<double>& w, const DouParams& params,
                    RngStream& rng, double min_dt) {
  std::vector<double> xn, yn;
  euler(x, dt, w, params, xn);
  euler(y, dt, w, params, yn);
  if (params.beta == 0.0 || (strictly_ordered(xn) && strictly_ordered(yn))) {
    x.swap(xn);
    y.swap(yn);
    return;
  }
  if (0.5 * dt < min_dt)
    throw std::runtime_error("advance_shared: near-collision below min dt");
  std::vector<double> w1, w2;
  bridge_split(w, dt, rng, w1, w2);
  advance_shared(x, y, 0.5 * dt, w1, params, rng, min_dt);
  advance_shared(x, y, 0.5 * dt, w2, params, rng, min_dt);
}

// Switching-noise joint substep; accumulates the quadratic variation of the
// area martingale at rate (2/n) N_t.  A coordinate pair whose gap hits zero
// is identified for good: the upper copy is pinned to the lower one, which
// is what makes the area reach exactly zero once every pair has met.
void advance_merge(std::vector<double>& x, std::vector<double>& y, double dt,
                   const std::vector<double>& b, const std::vector<double>& w,
                   const DouParams& params, RngStream& rng_b, RngStream& rng_w,
                   double min_dt, double& quad_variation,
                   std::vector<char>& merged) {
  const std::size_t n = x.size();
  std::vector<double> inc_y(n);
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (merged[i]) {
      inc_y[i] = b[i];
    } else {
      inc_y[i] = w[i];
      ++active;
    }
  }
  std::vector<double> xn, yn;
  euler(x, dt, b, params, xn);
  euler(y, dt, inc_y, params, yn);
  for (std::size_t i = 0; i < n; ++i)
    if (merged[i]) yn[i] = xn[i];
  if (params.beta == 0.0 || (strictly_ordered(xn) && strictly_ordered(yn))) {
    quad_variation +=
        2.0 * static_cast<double>(active) / static_cast<double>(n) * dt;
    for (std::size_t i = 0; i < n; ++i) {
      if (!merged[i] && yn[i] <= xn[i]) {
        yn[i] = xn[i];
        merged[i] = 1;
      }
    }
    x.swap(xn);
    y.swap(yn);
    return;
  }
  if (0.5 * dt < min_dt)
    throw std::runtime_error("advance_merge: near-collision below min dt");
  std::vector<double> b1, b2, w1, w2;
  bridge_split(b, dt, rng_b, b1, b2);
  bridge_split(w, dt, rng_w, w1, w2);
  advance_merge(x, y, 0.5 * dt, b1, w1, params, rng_b, rng_w, min_dt,
                quad_variation, merged);
  advance_merge(x, y, 0.5 * dt, b2, w2, params, rng_b, rng_w, min_dt,
                quad_variation, merged);
}

double area_of(const std::vector<double>& x, const std::vector<double>& y) {
  double a = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) a += y[i] - x[i];
  return a;
}

void validate_plan(const SimPlan& plan) {
  if (plan.dt <= 0.0) throw std::invalid_argument("coupling: dt <= 0");
  if (plan.t_grid.empty())
    throw std::invalid_argument("coupling: empty time grid");
  for (std::size_t i = 0; i < plan.t_grid.size(); ++i)
    if (plan.t_grid[i] < 0.0 ||
        (i > 0 && plan.t_grid[i] <= plan.t_grid[i - 1]))
      throw std::invalid_argument("coupling: bad time grid");
}

}  // namespace

ParallelCouplingResult parallel_coupling_run(const ParticleState& x0,
                                             const ParticleState& y0,
                                             const DouParams& params,
                                             const SimPlan& plan,
                                             std::uint64_t stream_id) {
  validate_plan(plan);
  if (x0.x.size() != params.n || y0.x.size() != params.n)
    throw std::invalid_argument("parallel_coupling_run: size mismatch");
  RngStream rng(plan.base_seed, stream_id);
  std::vector<double> x = x0.x, y = y0.x;
  const double min_dt = 1e-9 * plan.dt;
  ParallelCouplingResult result;
  result.t_grid = plan.t_grid;
  double t = 0.0;
  std::vector<double> w(params.n);
  for (double target : plan.t_grid) {
    while (t < target - 1e-15) {
      const double h = std::min(plan.dt, target - t);
      const double sd = std::sqrt(h);
      for (std::size_t i = 0; i < params.n; ++i) w[i] = sd * rng.normal();
      advance_shared(x, y, h, w, params, rng, min_dt);
      t += h;
    }
    double g2 = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < params.n; ++i) {
      double d = y[i] - x[i];
      g2 += d * d;
      mg = std::max(mg, d);
    }
    result.euclid_gap.push_back(std::sqrt(g2));
    result.max_gap.push_back(mg);
  }
  return result;
}

MergeCouplingResult merge_coupling_from_pair(const ParticleState& x0,
                                             const ParticleState& y0,
                                             const DouParams& params,
                                             const SimPlan& plan,
                                             std::uint64_t stream_id) {
  validate_plan(plan);
  if (x0.x.size() != params.n || y0.x.size() != params.n)
    throw std::invalid_argument("merge_coupling: size mismatch");
  for (std::size_t i = 0; i < params.n; ++i)
    if (y0.x[i] < x0.x[i])
      throw std::invalid_argument("merge_coupling: y0 must dominate x0");

  RngStream rng_b(plan.base_seed, stream_id);
  RngStream rng_w(plan.base_seed, stream_id ^ kIndependentStreamFlag);
  const double min_dt = 1e-9 * plan.dt;
  const double merge_tol = static_cast<double>(params.n) * 1e-12;

  std::vector<double> x = x0.x, y = y0.x;
  std::vector<char> pair_merged(params.n);
  for (std::size_t i = 0; i < params.n; ++i)
    pair_merged[i] = y[i] <= x[i] ? 1 : 0;
  double t = 0.0, qv = 0.0;
  bool merged = area_of(x, y) <= merge_tol;
  MergeCouplingResult result;
  result.t_grid = plan.t_grid;
  result.tau = merged ? 0.0 : plan.t_grid.back();
  result.censored = !merged;

  std::vector<double> b(params.n), w(params.n);
  for (double target : plan.t_grid) {
    while (t < target - 1e-15) {
      const double h = std::min(plan.dt, target - t);
      if (merged) {
        // identified pair: one path, shared noise
        const double sd = std::sqrt(h);
        for (std::size_t i = 0; i < params.n; ++i) b[i] = sd * rng_b.normal();
        std::vector<double> dummy_y = x;
        advance_shared(x, dummy_y, h, b, params, rng_b, min_dt);
        y = x;
      } else {
        const double sd = std::sqrt(h);
        for (std::size_t i = 0; i < params.n; ++i) {
          b[i] = sd * rng_b.normal();
          w[i] = sd * rng_w.normal();
        }
        advance_merge(x, y, h, b, w, params, rng_b, rng_w, min_dt, qv,
                      pair_merged);
        if (area_of(x, y) <= merge_tol) {
          merged = true;
          y = x;
          result.tau = t + h;
          result.censored = false;
        }
      }
      t += h;
    }
    for (std::size_t i = 0; i < params.n; ++i)
      if (y[i] < x[i]) result.ordering_ok = false;
    result.area_path.push_back(area_of(x, y));
    std::size_t active = 0;
    for (std::size_t i = 0; i < params.n; ++i)
      if (y[i] != x[i]) ++active;
    result.n_active_path.push_back(active);
    result.quad_variation_path.push_back(qv);
  }
  return result;
}

MergeCouplingResult merge_coupling_run(const ParticleState& x0,
                                       const DouParams& params,
                                       const RegularizerSpec& spec,
                                       const SimPlan& plan,
                                       std::uint64_t stream_id) {
  RngStream init_rng(plan.base_seed, stream_id ^ 0x4000000000000000ull);
  ParticleState y0 = regularize_initial(x0, spec, init_rng);
  return merge_coupling_from_pair(x0, y0, params, plan, stream_id);
}

TailExperimentResult supermartingale_tail_experiment(
    double a, const std::vector<double>& u_grid, std::size_t replicas,
    const DouParams& params, const SimPlan& plan, unsigned threads) {
  if (a <= 0.0)
    throw std::invalid_argument("supermartingale_tail_experiment: a <= 0");
  for (double u : u_grid)
    if (u < 1.0)
      throw std::invalid_argument(
          "supermartingale_tail_experiment: u_grid must be >= 1");
  ParticleState x0{semicircle_quantiles(params), 0.0};
  ParticleState y0 = x0;
  const double shift = a / static_cast<double>(params.n);
  for (double& v : y0.x) v += shift;

  std::vector<double> qv_at_tau(replicas, 0.0);
  std::vector<char> censored(replicas, 0);
  parallel_for(replicas, threads, [&](std::size_t r) {
    MergeCouplingResult res =
        merge_coupling_from_pair(x0, y0, params, plan, r);
    qv_at_tau[r] = res.quad_variation_path.back();
    censored[r] = res.censored ? 1 : 0;
  });

  TailExperimentResult out;
  out.replicas = replicas;
  for (char c : censored) out.censored += (c != 0);
  for (double u : u_grid) {
    const double threshold = a * a * u;
    long exceed = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
      // censored replicas may still accumulate variation; count them as
      // exceedances so the empirical estimate errs on the safe side
      if (qv_at_tau[r] >= threshold || censored[r]) ++exceed;
    }
    WilsonInterval wi = wilson_interval_95(exceed, static_cast<long>(replicas));
    out.rows.push_back({u, 4.0 / std::sqrt(u),
                        static_cast<double>(exceed) /
                            static_cast<double>(replicas),
                        wi.lower, wi.upper, exceed});
  }
  return out;
}

}  // namespace cutofflab
