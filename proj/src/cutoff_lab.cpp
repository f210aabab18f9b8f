#include "cutofflab/cutoff_lab.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "cutofflab/ou_exact.hpp"
#include "cutofflab/sde_kernels.hpp"
#include "cutofflab/special_functions.hpp"
#include "cutofflab/stats.hpp"

namespace cutofflab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Squared 1D Hellinger distance between N(pi0 e^{-t}, 1 - eps) and N(0, 1),
// eps = e^{-2t}; equals 1 at t = 0 where the first law is degenerate.
double hellinger2_1d(double pi0, double eps) {
  const double log_factor =
      0.25 * std::log1p(-eps) - 0.5 * std::log1p(-0.5 * eps);
  const double exponent = pi0 * pi0 * eps / (4.0 * (2.0 - eps));
  return -std::expm1(log_factor - exponent);
}

double lower_bound_value(MetricKind kind, std::size_t n, double pi0,
                         double t) {
  const double eps = std::exp(-2.0 * t);
  const double p2 = pi0 * pi0;
  switch (kind) {
    case MetricKind::TV:
      return hellinger2_1d(pi0, eps);
    case MetricKind::Hellinger:
      return std::sqrt(hellinger2_1d(pi0, eps));
    case MetricKind::Kullback:
      return 0.5 * (p2 * eps - eps - std::log1p(-eps));
    case MetricKind::Chi2: {
      const double l =
          p2 * eps / (1.0 + eps) - 0.5 * std::log1p(-eps * eps);
      return l > 700.0 ? kInf : std::expm1(l);
    }
    case MetricKind::Wasserstein: {
      // exact 1D W^2 = pi0^2 eps + (1 - sqrt(1 - eps))^2, with the second
      // factor written in cancellation-free form
      const double s = eps / (1.0 + std::sqrt(1.0 - eps));
      return std::sqrt(p2 * eps + s * s) / std::sqrt(static_cast<double>(n));
    }
    case MetricKind::Fisher:
      break;
  }
  throw std::invalid_argument(
      "lower_bound_curve: unsupported metric (tv, hellinger, kullback, chi2, "
      "wasserstein only)");
}

// G(u) = u^2 (2 log|u| - 3) / 4 is an antiderivative kernel for the double
// integral of log|x - y| over a rectangle.
double log_kernel_G(double u) {
  if (u == 0.0) return 0.0;
  return u * u * (2.0 * std::log(std::abs(u)) - 3.0) / 4.0;
}

// Mean of log|x - y| over Uniform[a, b] x Uniform[c, d]; finite even for
// overlapping intervals (the singularity is integrable).
double mean_log_gap(double a, double b, double c, double d) {
  const double integral = log_kernel_G(b - c) + log_kernel_G(a - d) -
                          log_kernel_G(b - d) - log_kernel_G(a - c);
  return integral / ((b - a) * (d - c));
}

void write_csv_file(const std::string& path, const CurveTable& table,
                    std::vector<std::string>& files_written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("run_experiment: cannot write " + path);
  out << table.to_csv();
  if (!out) throw std::runtime_error("run_experiment: write failed: " + path);
  files_written.push_back(path);
}

std::vector<double> ones_config(std::size_t n, double scale) {
  return std::vector<double>(n, scale);
}

}  // namespace

CurveTable lower_bound_curve(const ParticleState& x0, const DouParams& params,
                             MetricKind kind, const std::vector<double>& ts) {
  if (x0.x.size() != params.n)
    throw std::invalid_argument("lower_bound_curve: size mismatch");
  const double pi0 = pi_sum(x0.x);
  CurveTable table;
  for (double t : ts) {
    if (t < 0.0) throw std::domain_error("lower_bound_curve: t < 0");
    CurveRow row;
    row.experiment = "lower-bound";
    row.n = params.n;
    row.beta = kNan;  // the projection bound holds for every beta
    row.t = t;
    row.metric = metric_name(kind);
    row.bound_type = BoundType::Lower;
    row.value = lower_bound_value(kind, params.n, pi0, t);
    table.rows.push_back(std::move(row));
  }
  table.sort_canonical();
  return table;
}

double mehta_log_partition_star(const DouParams& params) {
  const double n = static_cast<double>(params.n);
  const double beta = params.beta;
  double value = (-0.5 * n - beta * n * (n - 1.0) / 4.0) * std::log(n) +
                 0.5 * n * std::log(2.0 * std::acos(-1.0));
  for (std::size_t j = 1; j <= params.n; ++j)
    value += std::lgamma(1.0 + 0.5 * beta * static_cast<double>(j)) -
             std::lgamma(1.0 + 0.5 * beta);
  return value;
}

double mehta_log_partition(const DouParams& params) {
  return mehta_log_partition_star(params) -
         std::lgamma(static_cast<double>(params.n) + 1.0);
}

double entropy_budget(const ParticleState& x0, const DouParams& params,
                      const RegularizerSpec& spec) {
  if (params.beta < 1.0)
    throw std::invalid_argument(
        "entropy_budget: beta >= 1 required (beta = 0 has exact closed "
        "forms)");
  if (x0.x.size() != params.n)
    throw std::invalid_argument("entropy_budget: size mismatch");
  const std::size_t n = params.n;
  const double eta = spec.eta(n);
  ParticleState sorted = reorder(x0.x, x0.t);

  // Boltzmann-Shannon entropy of the product of n uniform laws of length eta.
  const double entropy_term = -static_cast<double>(n) * std::log(eta);

  // Exact expectation of the energy under the product law: the confinement
  // moment is elementary, the pairwise log-gap means are in closed form.
  std::vector<double> lo(n);
  for (std::size_t i = 0; i < n; ++i)
    lo[i] = sorted.x[i] + 3.0 * static_cast<double>(i + 1) * eta;
  double confinement = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    confinement += lo[i] * lo[i] + lo[i] * eta + eta * eta / 3.0;
  confinement *= 0.5 * static_cast<double>(n);
  double interaction = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      interaction -= mean_log_gap(lo[i], lo[i] + eta, lo[j], lo[j] + eta);
  interaction *= params.beta;

  return entropy_term + confinement + interaction +
         mehta_log_partition(params);
}

CurveTable entropy_upper_curve(const ParticleState& x0, const DouParams& params,
                               const RegularizerSpec& spec,
                               const std::vector<double>& ts) {
  const double budget = entropy_budget(x0, params, spec);
  CurveTable table;
  for (double t : ts) {
    if (t < 0.0) throw std::domain_error("entropy_upper_curve: t < 0");
    const double kl = budget * std::exp(-2.0 * t);
    CurveRow row;
    row.experiment = "entropy-upper";
    row.n = params.n;
    row.beta = params.beta;
    row.t = t;
    row.metric = metric_name(MetricKind::Kullback);
    row.bound_type = BoundType::Upper;
    row.value = kl;
    table.rows.push_back(row);
    row.metric = metric_name(MetricKind::TV);
    row.value = std::min(1.0, std::sqrt(2.0 * kl));
    table.rows.push_back(std::move(row));
  }
  table.sort_canonical();
  return table;
}

InitBudget douk_budget(const std::vector<UniformLaw>& components,
                       const DouParams& params) {
  const std::size_t n = params.n;
  if (components.size() != n)
    throw std::invalid_argument("douk_budget: component count != n");
  for (const UniformLaw& c : components)
    if (!(c.hi > c.lo))
      throw std::invalid_argument("douk_budget: degenerate interval");

  InitBudget out;
  double mean_sum = 0.0;
  double second_moment_half_sum = 0.0;
  for (const UniformLaw& c : components) {
    out.entropy_sum += -std::log(c.hi - c.lo);
    mean_sum += 0.5 * (c.lo + c.hi);
    second_moment_half_sum +=
        (c.lo * c.lo + c.lo * c.hi + c.hi * c.hi) / 6.0;
  }
  // sum over ordered pairs of the pair potential Phi: the confinement part
  // telescopes to n * sum_i E[V], the log part uses the closed-form rectangle
  // integral (valid for overlapping supports)
  out.interaction_sum = static_cast<double>(n) * second_moment_half_sum;
  if (params.beta > 0.0 && n > 1) {
    double log_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        log_sum -= mean_log_gap(components[i].lo, components[i].hi,
                                components[j].lo, components[j].hi);
    out.interaction_sum += params.beta * log_sum;
  }
  out.log_partition = mehta_log_partition(params);
  out.mean_offset = mean_sum / static_cast<double>(n);
  out.first_moment_flag = out.mean_offset != 0.0;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  out.entropy_per_n2 = out.entropy_sum / n2;
  out.interaction_per_n2 = out.interaction_sum / n2;
  out.note =
      "finite-n evaluation; boundedness of the n^-2-scaled terms along a "
      "sequence cannot be certified from a single n";
  return out;
}

TvEstimate empirical_tv_via_pi(const std::vector<double>& pi_samples,
                               const ParticleState& x0, double t) {
  if (t <= 0.0)
    throw std::domain_error("empirical_tv_via_pi: t <= 0 (degenerate law)");
  const double mean = pi_sum(x0.x) * std::exp(-t);
  const double var = -std::expm1(-2.0 * t);
  TvEstimate out;
  out.tv_lower = gaussian_tv_1d(mean, var, 0.0, 1.0);
  out.stderr_est = 0.0;
  if (!pi_samples.empty()) {
    const double sd = std::sqrt(var);
    KsResult ks = ks_test_one_sample(pi_samples, [mean, sd](double x) {
      return normal_cdf((x - mean) / sd);
    });
    out.ks_p_value = ks.p_value;
    if (ks.p_value < 1e-4)
      throw std::runtime_error(
          "empirical_tv_via_pi: samples reject the exact projection law "
          "(KS p < 1e-4); the integrator that produced them is too coarse");
  }
  return out;
}

namespace {

void append_renamed(CurveTable& dst, CurveTable src, const std::string& name) {
  for (CurveRow& r : src.rows) {
    r.experiment = name;
    dst.rows.push_back(std::move(r));
  }
}

void run_hellinger_figure(const ExperimentConfig& config, CurveTable& table) {
  std::vector<std::size_t> ns = config.ns;
  if (ns.empty()) ns.push_back(50);
  for (std::size_t n : ns) {
    OuSpec spec{n, ones_config(n, config.z0_scale)};
    append_renamed(table,
                   ou_distance_curve(spec, MetricKind::Hellinger, config.ts),
                   config.name);
  }
}

void run_oudou_figure(const ExperimentConfig& config, CurveTable& table,
                      std::vector<std::string>& files_written) {
  std::vector<double> betas = config.betas;
  if (betas.empty()) betas = {0.0, 2.0};
  const std::vector<double> x0 = {-10.0, 0.0, 10.0};
  std::vector<Observable> obs;
  for (std::size_t i = 0; i < x0.size(); ++i)
    obs.push_back({"x" + std::to_string(i + 1),
                   [i](const std::vector<double>& x) { return x[i]; }});
  for (double beta : betas) {
    DouParams params(x0.size(), beta);
    SimPlan plan{config.dt, Scheme::AdaptiveDOU, 1, config.ts, config.seed};
    if (config.ts.empty()) continue;
    // one replica per beta, all betas driven by the same noise stream
    SimResult sim =
        simulate_paths(plan, ParticleState{x0, 0.0}, params, obs, 1);
    CurveTable traj;
    for (std::size_t g = 0; g < sim.t_grid.size(); ++g)
      for (std::size_t o = 0; o < obs.size(); ++o) {
        CurveRow row;
        row.experiment = config.name;
        row.n = x0.size();
        row.beta = beta;
        row.t = sim.t_grid[g];
        row.metric = sim.labels[o];
        row.bound_type = BoundType::Exact;
        row.value = sim.values[0][g][o];
        row.replicas = 1;
        row.seed = config.seed;
        traj.rows.push_back(std::move(row));
      }
    traj.sort_canonical();
    if (!config.output_dir.empty()) {
      std::string path = config.output_dir + "/oudou-beta" +
                         format_double(beta) + ".csv";
      write_csv_file(path, traj, files_written);
    }
    for (CurveRow& r : traj.rows) table.rows.push_back(std::move(r));
  }
}

void run_cutoff_sweep(const ExperimentConfig& config, CurveTable& table) {
  std::vector<std::size_t> ns = config.ns;
  if (ns.empty()) ns = {16, 64};
  std::vector<double> betas = config.betas;
  if (betas.empty()) betas = {0.0, 2.0};
  std::vector<MetricKind> kinds = config.kinds;
  if (kinds.empty())
    kinds = {MetricKind::TV, MetricKind::Hellinger, MetricKind::Kullback,
             MetricKind::Chi2, MetricKind::Wasserstein};

  for (std::size_t n : ns) {
    ParticleState x0{ones_config(n, config.z0_scale), 0.0};
    // the projection lower bounds are beta-independent: one block per n
    DouParams any_beta(n, 0.0);
    for (MetricKind kind : kinds)
      append_renamed(table, lower_bound_curve(x0, any_beta, kind, config.ts),
                     config.name);
    for (double beta : betas) {
      DouParams params(n, beta);
      if (beta == 0.0) {
        OuSpec spec{n, x0.x};
        for (MetricKind kind : kinds)
          append_renamed(table,
                         ou_distance_curve(spec, kind, config.ts,
                                           kind == MetricKind::TV),
                         config.name);
      } else {
        RegularizerSpec reg{config.kappa};
        append_renamed(table, entropy_upper_curve(x0, params, reg, config.ts),
                       config.name);
      }
      if (config.replicas > 0 && !config.ts.empty()) {
        ParticleState initial = x0;
        if (beta > 0.0) {
          RegularizerSpec reg{config.kappa};
          RngStream reg_rng(config.seed, 0x7265670000000000ull + n);
          initial = regularize_initial(x0, reg, reg_rng);
        }
        SimPlan plan{config.dt, Scheme::AdaptiveDOU, config.replicas,
                     config.ts, config.seed};
        std::vector<Observable> obs = {
            {"pi", [](const std::vector<double>& x) { return pi_sum(x); }},
            {"radius2",
             [](const std::vector<double>& x) { return radius2(x); }}};
        SimResult sim =
            simulate_paths(plan, initial, params, obs, config.threads);
        const double pi0 = pi_sum(initial.x);
        const double r0 = radius2(initial.x);
        const double beta_n =
            1.0 + beta * (static_cast<double>(n) - 1.0) / 2.0;
        for (std::size_t g = 0; g < sim.t_grid.size(); ++g) {
          const double t = sim.t_grid[g];
          for (std::size_t o = 0; o < obs.size(); ++o) {
            std::vector<double> vals(config.replicas);
            for (std::size_t r = 0; r < config.replicas; ++r)
              vals[r] = sim.values[r][g][o];
            MomentSummary ms = summarize(vals);
            CurveRow row;
            row.experiment = config.name;
            row.n = n;
            row.beta = beta;
            row.t = t;
            row.metric = sim.labels[o] + "-mean";
            row.bound_type = BoundType::Exact;
            row.value = o == 0 ? pi0 * std::exp(-t)
                               : beta_n + (r0 - beta_n) * std::exp(-2.0 * t);
            row.mc_estimate = ms.mean;
            row.mc_stderr = ms.stderr_mean;
            row.replicas = config.replicas;
            row.seed = config.seed;
            table.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.dt <= 0.0)
    throw std::invalid_argument("run_experiment: dt <= 0");
  for (std::size_t i = 1; i < config.ts.size(); ++i)
    if (config.ts[i] <= config.ts[i - 1])
      throw std::invalid_argument("run_experiment: time grid not increasing");
  if (!config.output_dir.empty())
    std::filesystem::create_directories(config.output_dir);

  ExperimentResult result;
  if (config.name == "hellinger-figure") {
    run_hellinger_figure(config, result.table);
  } else if (config.name == "oudou-figure") {
    run_oudou_figure(config, result.table, result.files_written);
  } else if (config.name == "cutoff-sweep") {
    run_cutoff_sweep(config, result.table);
  } else {
    throw std::invalid_argument("run_experiment: unknown experiment '" +
                                config.name + "'");
  }
  result.table.sort_canonical();
  if (!config.output_dir.empty())
    write_csv_file(config.output_dir + "/" + config.name + ".csv",
                   result.table, result.files_written);
  return result;
}

}  // namespace cutofflab
