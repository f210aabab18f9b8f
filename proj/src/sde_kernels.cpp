#include "cutofflab/sde_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cutofflab/parallel.hpp"

namespace cutofflab {

namespace {

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

}  // namespace

CirParams CirParams::radius2_of_dou(const DouParams& params) {
  const double n = static_cast<double>(params.n);
  return {2.0 + params.beta * (n - 1.0), 2.0, std::sqrt(8.0 / n)};
}

std::vector<double> ou_transition_sample(const std::vector<double>& z,
                                         double dt, double theta, double rho,
                                         RngStream& rng) {
  if (dt <= 0.0) throw std::invalid_argument("ou_transition_sample: dt <= 0");
  if (rho <= 0.0) throw std::invalid_argument("ou_transition_sample: rho <= 0");
  const double decay = std::exp(-rho * dt);
  const double sd =
      theta * std::sqrt(-std::expm1(-2.0 * rho * dt) / (2.0 * rho));
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = z[i] * decay + sd * rng.normal();
  return out;
}

double cir_transition_sample(double r, double dt, const CirParams& p,
                             RngStream& rng) {
  if (r < 0.0) throw std::invalid_argument("cir_transition_sample: r < 0");
  if (dt <= 0.0) throw std::invalid_argument("cir_transition_sample: dt <= 0");
  if (p.a < 0.0 || p.b <= 0.0 || p.sigma <= 0.0)
    throw std::invalid_argument("cir_transition_sample: bad parameters");
  // R_{t+dt} = c * chi'^2(k, lambda), c = sigma^2(1-e^{-b dt})/(4b),
  // k = 4a/sigma^2, lambda = r e^{-b dt} / c.
  const double c =
      p.sigma * p.sigma * (-std::expm1(-p.b * dt)) / (4.0 * p.b);
  const double k = p.feller_ratio() * 2.0;  // 4a/sigma^2
  const double lambda = r * std::exp(-p.b * dt) / c;
  const long mix = rng.poisson(0.5 * lambda);
  const double chi2 = 2.0 * rng.gamma(0.5 * k + static_cast<double>(mix));
  return c * chi2;
}

std::vector<double> dou_advance(const std::vector<double>& x, double dt,
                                const std::vector<double>& increments,
                                const DouParams& params, RngStream& rng,
                                double min_dt, bool adaptive) {
  const std::size_t n = x.size();
  const double noise_scale = std::sqrt(2.0 / static_cast<double>(n));
  std::vector<double> drift;
  dou_drift(x, params, drift);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] + dt * drift[i] + noise_scale * increments[i];
  if (params.beta == 0.0 || strictly_ordered(y)) return y;
  if (!adaptive)
    throw std::runtime_error("dou_advance: ordering violated (EulerDOU)");
  if (0.5 * dt < min_dt)
    throw std::runtime_error(
        "dou_advance: near-collision below minimum step size");
  // Brownian-bridge split: the first half-increment conditioned on the total.
  std::vector<double> w1(n), w2(n);
  const double half_sd = 0.5 * std::sqrt(dt);
  for (std::size_t i = 0; i < n; ++i) {
    w1[i] = 0.5 * increments[i] + half_sd * rng.normal();
    w2[i] = increments[i] - w1[i];
  }
  std::vector<double> mid =
      dou_advance(x, 0.5 * dt, w1, params, rng, min_dt, true);
  return dou_advance(mid, 0.5 * dt, w2, params, rng, min_dt, true);
}

ParticleState dou_step(const ParticleState& state, double dt,
                       const DouParams& params, RngStream& rng, Scheme scheme,
                       double min_dt_factor) {
  if (dt <= 0.0) throw std::invalid_argument("dou_step: dt <= 0");
  if (scheme != Scheme::EulerDOU && scheme != Scheme::AdaptiveDOU)
    throw std::invalid_argument("dou_step: not a DOU scheme");
  const std::size_t n = state.x.size();
  if (n != params.n) throw std::invalid_argument("dou_step: size mismatch");
  std::vector<double> w(n);
  const double sd = std::sqrt(dt);
  for (std::size_t i = 0; i < n; ++i) w[i] = sd * rng.normal();
  std::vector<double> y =
      dou_advance(state.x, dt, w, params, rng, min_dt_factor * dt,
                  scheme == Scheme::AdaptiveDOU);
  return {std::move(y), state.t + dt};
}

SimResult simulate_paths(const SimPlan& plan, const ParticleState& initial,
                         const DouParams& params,
                         const std::vector<Observable>& observables,
                         unsigned threads) {
  if (plan.dt <= 0.0) throw std::invalid_argument("simulate_paths: dt <= 0");
  if (plan.t_grid.empty())
    throw std::invalid_argument("simulate_paths: empty time grid");
  for (std::size_t i = 0; i < plan.t_grid.size(); ++i) {
    if (plan.t_grid[i] < 0.0 ||
        (i > 0 && plan.t_grid[i] <= plan.t_grid[i - 1]))
      throw std::invalid_argument("simulate_paths: bad time grid");
  }
  if (plan.scheme == Scheme::ExactCIR && initial.x.size() != 1)
    throw std::invalid_argument(
        "simulate_paths: ExactCIR drives the scalar squared-radius state");

  SimResult result;
  result.t_grid = plan.t_grid;
  for (const auto& o : observables) result.labels.push_back(o.label);
  result.values.assign(
      plan.replicas,
      std::vector<std::vector<double>>(
          plan.t_grid.size(), std::vector<double>(observables.size(), 0.0)));

  const CirParams cir = CirParams::radius2_of_dou(params);
  const double theta = std::sqrt(2.0 / static_cast<double>(params.n));

  parallel_for(plan.replicas, threads, [&](std::size_t r) {
    RngStream rng(plan.base_seed, r);
    std::vector<double> x = initial.x;
    double t = 0.0;
    for (std::size_t g = 0; g < plan.t_grid.size(); ++g) {
      const double target = plan.t_grid[g];
      while (t < target - 1e-15) {
        const double remaining = target - t;
        switch (plan.scheme) {
          case Scheme::ExactOU:
            x = ou_transition_sample(x, remaining, theta, 1.0, rng);
            t = target;
            break;
          case Scheme::ExactCIR:
            x[0] = cir_transition_sample(x[0], remaining, cir, rng);
            t = target;
            break;
          case Scheme::EulerDOU:
          case Scheme::AdaptiveDOU: {
            const double h = std::min(plan.dt, remaining);
            ParticleState st{x, t};
            try {
              st = dou_step(st, h, params, rng, plan.scheme);
            } catch (const std::exception& e) {
              throw std::runtime_error(
                  "simulate_paths: replica " + std::to_string(r) + " at t=" +
                  std::to_string(t) + ": " + e.what());
            }
            x = std::move(st.x);
            t = st.t;
            break;
          }
        }
      }
      for (std::size_t o = 0; o < observables.size(); ++o)
        result.values[r][g][o] = observables[o].fn(x);
    }
  });
  return result;
}

}  // namespace cutofflab
