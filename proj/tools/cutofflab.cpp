// Command-line surface for the cutoff laboratory: exact curves and profiles,
// particle and matrix simulations, couplings, and the sweep harness.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cutofflab/couplings.hpp"
#include "cutofflab/curve_table.hpp"
#include "cutofflab/cutoff_lab.hpp"
#include "cutofflab/dyson.hpp"
#include "cutofflab/matrix_ou.hpp"
#include "cutofflab/ou_exact.hpp"
#include "cutofflab/sde_kernels.hpp"
#include "cutofflab/stats.hpp"

namespace {

using namespace cutofflab;

unsigned thread_count() {
  const char* env = std::getenv("CUTOFFLAB_THREADS");
  if (!env) return 1;
  long v = std::strtol(env, nullptr, 10);
  return v > 1 ? static_cast<unsigned>(v) : 1;
}

// "start:stop:count" or a comma-separated explicit list
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') ||
        !std::getline(in, c))
      throw std::invalid_argument("grid: expected start:stop:count");
    const double start = std::stod(a), stop = std::stod(b);
    const long count = std::stol(c);
    if (count < 1 || (count > 1 && stop <= start))
      throw std::invalid_argument("grid: bad start:stop:count");
    for (long i = 0; i < count; ++i)
      out.push_back(count == 1 ? start
                               : start + (stop - start) *
                                             static_cast<double>(i) /
                                             static_cast<double>(count - 1));
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("grid: empty");
  return out;
}

MetricKind parse_metric(const std::string& name) {
  if (name == "wasserstein") return MetricKind::Wasserstein;
  if (name == "tv") return MetricKind::TV;
  if (name == "hellinger") return MetricKind::Hellinger;
  if (name == "kullback") return MetricKind::Kullback;
  if (name == "chi2") return MetricKind::Chi2;
  if (name == "fisher") return MetricKind::Fisher;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

void emit(const CurveTable& table, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << table.to_csv();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << table.to_csv();
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string t_grid = "0.5:5:10";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "base seed for all randomness");
  cmd->add_option("--out", opts.out, "output CSV path (default: stdout)");
  static std::string config_sink;
  cmd->add_option("--config", config_sink,
                  "flat key=value config file (flags take precedence)");
}

// Expands `--config FILE` into `--key value` arguments for every key the
// command line does not already carry, giving flags > file > defaults.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::vector<std::string> expanded = args;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t eq = line.find('=', first);
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + line +
                                  "'");
    auto trim = [](std::string s) {
      const std::size_t a = s.find_first_not_of(" \t\r");
      const std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: empty key in '" + line + "'");
    const std::string flag = "--" + key;
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;
    expanded.push_back(flag);
    expanded.push_back(value);
  }
  return expanded;
}

std::vector<double> initial_config(const std::string& spec_text, std::size_t n,
                                   double shift, const DouParams& params) {
  std::vector<double> x0;
  if (spec_text == "ones") {
    x0.assign(n, 1.0);
  } else if (spec_text == "zeros") {
    x0.assign(n, 0.0);
  } else if (spec_text == "semicircle") {
    x0 = semicircle_quantiles(params);
  } else {
    std::istringstream in(spec_text);
    std::string tok;
    while (std::getline(in, tok, ',')) x0.push_back(std::stod(tok));
    if (x0.size() != n)
      throw std::invalid_argument("--x0 list length does not match --n");
  }
  for (double& v : x0) v += shift;
  return x0;
}

std::vector<Observable> standard_observables() {
  return {{"pi", [](const std::vector<double>& x) { return pi_sum(x); }},
          {"radius2", [](const std::vector<double>& x) { return radius2(x); }}};
}

void attach_mc_rows(CurveTable& table, const SimResult& sim,
                    const std::string& experiment, std::size_t n, double beta,
                    std::size_t replicas, std::uint64_t seed) {
  for (std::size_t g = 0; g < sim.t_grid.size(); ++g)
    for (std::size_t o = 0; o < sim.labels.size(); ++o) {
      std::vector<double> vals;
      vals.reserve(sim.values.size());
      for (const auto& rep : sim.values) vals.push_back(rep[g][o]);
      MomentSummary ms = summarize(vals);
      CurveRow row;
      row.experiment = experiment;
      row.n = n;
      row.beta = beta;
      row.t = sim.t_grid[g];
      row.metric = sim.labels[o];
      row.bound_type = BoundType::Exact;
      row.value = ms.mean;
      row.mc_estimate = ms.mean;
      row.mc_stderr = ms.stderr_mean;
      row.replicas = replicas;
      row.seed = seed;
      table.rows.push_back(std::move(row));
    }
}

int run(int argc, char** argv) {
  CLI::App app{"numerical laboratory for interacting-particle cutoff"};
  app.require_subcommand(1);
  const unsigned threads = thread_count();

  // ou-curves -------------------------------------------------------------
  auto* ou_curves = app.add_subcommand(
      "ou-curves", "exact distance-to-equilibrium curves of the OU process");
  CommonOpts oc_common;
  std::size_t oc_n = 50;
  double oc_z0n = 1.0;
  std::string oc_metric = "hellinger";
  bool oc_exact_tv = false;
  ou_curves->add_option("--n", oc_n, "dimension")->check(CLI::PositiveNumber);
  ou_curves->add_option("--z0-norm2-over-n", oc_z0n, "|z0|^2 / n");
  ou_curves->add_option("--metric", oc_metric,
                        "wasserstein|tv|hellinger|kullback|chi2|fisher|all");
  ou_curves->add_flag("--exact-tv", oc_exact_tv,
                      "exact TV rows instead of the sandwich");
  ou_curves->add_option("--t-grid", oc_common.t_grid,
                        "start:stop:count or comma list");
  add_common(ou_curves, oc_common);

  // ou-profile ------------------------------------------------------------
  auto* ou_profile =
      app.add_subcommand("ou-profile", "limiting cutoff profiles phi(b)");
  CommonOpts op_common;
  op_common.t_grid = "-2:2:9";
  std::string op_metric = "tv";
  std::string op_a = "inf";
  std::size_t op_n = 0;
  double op_z0norm = 1.0;
  ou_profile->add_option("--metric", op_metric, "profile metric");
  ou_profile->add_option("--a", op_a,
                         "regime parameter lim sqrt(n)|z0|^2 (or 'inf')");
  ou_profile->add_option("--n", op_n,
                         "if set, also emit the finite-n profile times");
  ou_profile->add_option("--z0-norm", op_z0norm, "|z0| for the time rows");
  ou_profile->add_option("--b-grid", op_common.t_grid,
                         "start:stop:count or comma list of window offsets");
  add_common(ou_profile, op_common);

  // dou-sim ---------------------------------------------------------------
  auto* dou_sim =
      app.add_subcommand("dou-sim", "simulate DOU paths with observables");
  CommonOpts ds_common;
  std::size_t ds_n = 8;
  double ds_beta = 2.0, ds_dt = 1e-3, ds_shift = 0.0;
  std::size_t ds_replicas = 100;
  std::string ds_x0 = "semicircle", ds_scheme = "adaptive";
  dou_sim->add_option("--n", ds_n, "particles")->check(CLI::PositiveNumber);
  dou_sim->add_option("--beta", ds_beta, "repulsion strength (0 or >= 1)");
  dou_sim->add_option("--dt", ds_dt, "macro step")->check(CLI::PositiveNumber);
  dou_sim->add_option("--replicas", ds_replicas, "independent paths")
      ->check(CLI::PositiveNumber);
  dou_sim->add_option("--x0", ds_x0, "ones|zeros|semicircle|comma list");
  dou_sim->add_option("--x0-shift", ds_shift, "added to every coordinate");
  dou_sim->add_option("--scheme", ds_scheme, "euler|adaptive|exact-ou");
  dou_sim->add_option("--t-grid", ds_common.t_grid,
                      "start:stop:count or comma list");
  add_common(dou_sim, ds_common);

  // equilibrium-check -----------------------------------------------------
  auto* eq_check = app.add_subcommand(
      "equilibrium-check", "tridiagonal equilibrium sampler statistics");
  CommonOpts ec_common;
  std::size_t ec_n = 64, ec_replicas = 10000;
  double ec_beta = 2.0;
  eq_check->add_option("--n", ec_n, "particles")->check(CLI::PositiveNumber);
  eq_check->add_option("--beta", ec_beta, "repulsion strength");
  eq_check->add_option("--replicas", ec_replicas, "samples")
      ->check(CLI::PositiveNumber);
  add_common(eq_check, ec_common);

  // matrix-check ----------------------------------------------------------
  auto* mx_check = app.add_subcommand(
      "matrix-check", "matrix OU eigenvalue projection vs exact moments");
  CommonOpts mx_common;
  std::size_t mx_n = 8, mx_replicas = 1000;
  double mx_beta = 2.0, mx_shift = 1.0;
  mx_check->add_option("--n", mx_n, "matrix size")->check(CLI::PositiveNumber);
  mx_check->add_option("--beta", mx_beta, "1 (GOE) or 2 (GUE)");
  mx_check->add_option("--replicas", mx_replicas, "paths")
      ->check(CLI::PositiveNumber);
  mx_check->add_option("--x0-shift", mx_shift,
                       "shift of the semicircle initial spectrum");
  mx_check->add_option("--t-grid", mx_common.t_grid,
                       "start:stop:count or comma list");
  add_common(mx_check, mx_common);

  // coupling --------------------------------------------------------------
  auto* coupling =
      app.add_subcommand("coupling", "parallel / merge / tail experiments");
  CommonOpts cp_common;
  std::string cp_mode = "parallel";
  std::size_t cp_n = 8, cp_replicas = 100;
  double cp_beta = 2.0, cp_dt = 1e-3, cp_shift = 0.5, cp_a = 1.0,
         cp_kappa = 2.0;
  std::string cp_u_grid = "4,25,100";
  coupling->add_option("--mode", cp_mode, "parallel|merge|tail")->required();
  coupling->add_option("--n", cp_n, "particles")->check(CLI::PositiveNumber);
  coupling->add_option("--beta", cp_beta, "repulsion strength");
  coupling->add_option("--dt", cp_dt, "macro step")->check(CLI::PositiveNumber);
  coupling->add_option("--replicas", cp_replicas, "replicas")
      ->check(CLI::PositiveNumber);
  coupling->add_option("--shift", cp_shift,
                       "parallel mode: y0 = x0 + shift per coordinate");
  coupling->add_option("--a", cp_a, "tail mode: initial area A_0");
  coupling->add_option("--u-grid", cp_u_grid, "tail mode: thresholds");
  coupling->add_option("--kappa", cp_kappa, "merge mode: regularizer kappa");
  coupling->add_option("--t-grid", cp_common.t_grid,
                       "start:stop:count or comma list");
  add_common(coupling, cp_common);

  // cutoff-sweep ----------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "cutoff-sweep", "lower/upper bound sweep over (n, beta, t, metric)");
  CommonOpts sw_common;
  std::string sw_ns = "16,64", sw_betas = "0,2", sw_kinds = "";
  double sw_scale = 1.0, sw_dt = 1e-3, sw_kappa = 2.0;
  std::size_t sw_replicas = 0;
  std::string sw_out_dir;
  sweep->add_option("--n-list", sw_ns, "comma list of n");
  sweep->add_option("--beta-list", sw_betas, "comma list of beta");
  sweep->add_option("--metrics", sw_kinds, "comma list (default: all five)");
  sweep->add_option("--z0-scale", sw_scale, "x0 = scale * ones");
  sweep->add_option("--dt", sw_dt, "macro step for MC rows");
  sweep->add_option("--kappa", sw_kappa, "regularizer kappa");
  sweep->add_option("--replicas", sw_replicas, "MC replicas (0: exact only)");
  sweep->add_option("--out-dir", sw_out_dir, "directory for CSV artifacts");
  sweep->add_option("--t-grid", sw_common.t_grid,
                    "start:stop:count or comma list");
  add_common(sweep, sw_common);

  // figures ---------------------------------------------------------------
  auto* figures =
      app.add_subcommand("figures", "reference figure reproductions");
  CommonOpts fg_common;
  std::string fg_out_dir;
  double fg_dt = 1e-3;
  figures->add_option("--out-dir", fg_out_dir, "directory for CSV artifacts");
  figures->add_option("--dt", fg_dt, "trajectory step");
  figures->add_option("--t-grid", fg_common.t_grid,
                      "start:stop:count or comma list");
  add_common(figures, fg_common);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::vector<const char*> ptrs = {argv[0]};
    for (const std::string& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()),
              const_cast<char**>(ptrs.data()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  if (ou_curves->parsed()) {
    std::vector<double> ts = parse_grid(oc_common.t_grid);
    OuSpec spec{oc_n, std::vector<double>(
                          oc_n, std::sqrt(std::max(0.0, oc_z0n)))};
    CurveTable table;
    std::vector<MetricKind> kinds;
    if (oc_metric == "all")
      kinds = {MetricKind::Wasserstein, MetricKind::TV, MetricKind::Hellinger,
               MetricKind::Kullback, MetricKind::Chi2, MetricKind::Fisher};
    else
      kinds = {parse_metric(oc_metric)};
    for (MetricKind kind : kinds) {
      CurveTable part = ou_distance_curve(spec, kind, ts, oc_exact_tv);
      for (CurveRow& r : part.rows) table.rows.push_back(std::move(r));
    }
    table.sort_canonical();
    emit(table, oc_common.out);
    return 0;
  }

  if (ou_profile->parsed()) {
    std::vector<double> bs = parse_grid(op_common.t_grid);
    MetricKind kind = parse_metric(op_metric);
    ProfileRegime regime{op_a == "inf"
                             ? std::numeric_limits<double>::infinity()
                             : std::stod(op_a)};
    CurveTable table;
    for (double b : bs) {
      CurveRow row;
      row.experiment = "ou-profile";
      row.n = op_n;
      row.beta = 0.0;
      row.t = b;
      row.metric = metric_name(kind);
      row.bound_type = BoundType::Exact;
      row.value = kind == MetricKind::Wasserstein
                      ? wasserstein_profile(b)
                      : profile_value(kind, regime, b);
      table.rows.push_back(row);
      if (op_n > 0) {
        row.metric = metric_name(kind) + "-time";
        row.value = profile_time(kind, op_n, op_z0norm, regime, b);
        table.rows.push_back(row);
      }
    }
    table.sort_canonical();
    emit(table, op_common.out);
    return 0;
  }

  if (dou_sim->parsed()) {
    DouParams params(ds_n, ds_beta);
    std::vector<double> ts = parse_grid(ds_common.t_grid);
    Scheme scheme;
    if (ds_scheme == "euler") scheme = Scheme::EulerDOU;
    else if (ds_scheme == "adaptive") scheme = Scheme::AdaptiveDOU;
    else if (ds_scheme == "exact-ou") scheme = Scheme::ExactOU;
    else throw std::invalid_argument("unknown scheme '" + ds_scheme + "'");
    if (scheme == Scheme::ExactOU && ds_beta != 0.0)
      throw std::invalid_argument("exact-ou requires beta = 0");
    ParticleState x0 =
        reorder(initial_config(ds_x0, ds_n, ds_shift, params), 0.0);
    SimPlan plan{ds_dt, scheme, ds_replicas, ts, ds_common.seed};
    SimResult sim =
        simulate_paths(plan, x0, params, standard_observables(), threads);
    CurveTable table;
    attach_mc_rows(table, sim, "dou-sim", ds_n, ds_beta, ds_replicas,
                   ds_common.seed);
    table.sort_canonical();
    emit(table, ds_common.out);
    return 0;
  }

  if (eq_check->parsed()) {
    DouParams params(ec_n, ec_beta);
    std::vector<double> r2(ec_replicas), pi(ec_replicas);
    RngStream rng(ec_common.seed, 0);
    for (std::size_t r = 0; r < ec_replicas; ++r) {
      ParticleState s = equilibrium_sample(params, rng);
      r2[r] = radius2(s.x);
      pi[r] = pi_sum(s.x);
    }
    MomentSummary mr2 = summarize(r2), mpi = summarize(pi);
    const double nn = static_cast<double>(ec_n);
    CurveTable table;
    CurveRow row;
    row.experiment = "equilibrium-check";
    row.n = ec_n;
    row.beta = ec_beta;
    row.t = 0.0;
    row.bound_type = BoundType::Exact;
    row.replicas = ec_replicas;
    row.seed = ec_common.seed;
    row.metric = "radius2-mean";
    row.value = 1.0 + ec_beta * (nn - 1.0) / 2.0;
    row.mc_estimate = mr2.mean;
    row.mc_stderr = mr2.stderr_mean;
    table.rows.push_back(row);
    row.metric = "pi-mean";
    row.value = 0.0;
    row.mc_estimate = mpi.mean;
    row.mc_stderr = mpi.stderr_mean;
    table.rows.push_back(row);
    row.metric = "pi-var";
    row.value = 1.0;
    row.mc_estimate = mpi.variance;
    // variance of the sample variance of a near-Gaussian statistic
    row.mc_stderr = mpi.variance * std::sqrt(2.0 / (ec_replicas - 1.0));
    table.rows.push_back(row);
    table.sort_canonical();
    emit(table, ec_common.out);
    return 0;
  }

  if (mx_check->parsed()) {
    if (mx_beta != 1.0 && mx_beta != 2.0)
      throw std::invalid_argument("matrix-check: beta must be 1 or 2");
    EnsembleKind kind =
        mx_beta == 1.0 ? EnsembleKind::GOE : EnsembleKind::GUE;
    DouParams params(mx_n, mx_beta);
    std::vector<double> spectrum = semicircle_quantiles(params);
    for (double& v : spectrum) v += mx_shift;
    std::vector<double> ts = parse_grid(mx_common.t_grid);
    MatrixEnsemble h0 = diagonal_ensemble(kind, spectrum);
    const double pi0 = pi_sum(spectrum);
    const double r0 = radius2(spectrum);
    const double beta_n =
        1.0 + mx_beta * (static_cast<double>(mx_n) - 1.0) / 2.0;
    std::vector<std::vector<double>> pis(ts.size()), r2s(ts.size());
    for (std::size_t r = 0; r < mx_replicas; ++r) {
      RngStream rng(mx_common.seed, r);
      MatrixEnsemble h = h0;
      double prev = 0.0;
      for (std::size_t g = 0; g < ts.size(); ++g) {
        h = matrix_ou_step(h, ts[g] - prev, rng);
        prev = ts[g];
        std::vector<double> lambda = eigenvalues(h);
        pis[g].push_back(pi_sum(lambda));
        r2s[g].push_back(radius2(lambda));
      }
    }
    CurveTable table;
    for (std::size_t g = 0; g < ts.size(); ++g) {
      MomentSummary mpi = summarize(pis[g]), mr2 = summarize(r2s[g]);
      CurveRow row;
      row.experiment = "matrix-check";
      row.n = mx_n;
      row.beta = mx_beta;
      row.t = ts[g];
      row.bound_type = BoundType::Exact;
      row.replicas = mx_replicas;
      row.seed = mx_common.seed;
      row.metric = "pi-mean";
      row.value = pi0 * std::exp(-ts[g]);
      row.mc_estimate = mpi.mean;
      row.mc_stderr = mpi.stderr_mean;
      table.rows.push_back(row);
      row.metric = "radius2-mean";
      row.value = beta_n + (r0 - beta_n) * std::exp(-2.0 * ts[g]);
      row.mc_estimate = mr2.mean;
      row.mc_stderr = mr2.stderr_mean;
      table.rows.push_back(row);
    }
    table.sort_canonical();
    emit(table, mx_common.out);
    return 0;
  }

  if (coupling->parsed()) {
    DouParams params(cp_n, cp_beta);
    std::vector<double> ts = parse_grid(cp_common.t_grid);
    SimPlan plan{cp_dt, Scheme::AdaptiveDOU, cp_replicas, ts, cp_common.seed};
    CurveTable table;
    if (cp_mode == "parallel") {
      ParticleState x0{semicircle_quantiles(params), 0.0};
      ParticleState y0 = x0;
      for (double& v : y0.x) v += cp_shift;
      std::vector<std::vector<double>> max_gaps(ts.size());
      for (std::size_t r = 0; r < cp_replicas; ++r) {
        ParallelCouplingResult res =
            parallel_coupling_run(x0, y0, params, plan, r);
        for (std::size_t g = 0; g < ts.size(); ++g)
          max_gaps[g].push_back(res.max_gap[g]);
      }
      for (std::size_t g = 0; g < ts.size(); ++g) {
        MomentSummary ms = summarize(max_gaps[g]);
        CurveRow row;
        row.experiment = "coupling-parallel";
        row.n = cp_n;
        row.beta = cp_beta;
        row.t = ts[g];
        row.metric = "max-gap";
        row.bound_type = BoundType::Upper;
        row.value = cp_shift * std::exp(-ts[g]);
        row.mc_estimate = ms.mean;
        row.mc_stderr = ms.stderr_mean;
        row.replicas = cp_replicas;
        row.seed = cp_common.seed;
        table.rows.push_back(std::move(row));
      }
    } else if (cp_mode == "merge") {
      ParticleState x0{semicircle_quantiles(params), 0.0};
      RegularizerSpec reg{cp_kappa};
      std::vector<double> taus;
      std::size_t censored = 0;
      for (std::size_t r = 0; r < cp_replicas; ++r) {
        MergeCouplingResult res =
            merge_coupling_run(x0, params, reg, plan, r);
        taus.push_back(res.tau);
        censored += res.censored ? 1 : 0;
      }
      MomentSummary ms = summarize(taus);
      CurveRow row;
      row.experiment = "coupling-merge";
      row.n = cp_n;
      row.beta = cp_beta;
      row.t = ts.back();
      row.metric = "merge-time";
      row.bound_type = BoundType::Exact;
      row.value = ms.mean;
      row.mc_estimate = ms.mean;
      row.mc_stderr = ms.stderr_mean;
      row.replicas = cp_replicas;
      row.seed = cp_common.seed;
      table.rows.push_back(row);
      row.metric = "censored-fraction";
      row.value = static_cast<double>(censored) /
                  static_cast<double>(cp_replicas);
      row.mc_estimate.reset();
      row.mc_stderr.reset();
      table.rows.push_back(row);
    } else if (cp_mode == "tail") {
      std::vector<double> us = parse_grid(cp_u_grid);
      TailExperimentResult res = supermartingale_tail_experiment(
          cp_a, us, cp_replicas, params, plan, threads);
      for (const TailRow& tr : res.rows) {
        CurveRow row;
        row.experiment = "coupling-tail";
        row.n = cp_n;
        row.beta = cp_beta;
        row.t = tr.u;
        row.metric = "tail-probability";
        row.bound_type = BoundType::Upper;
        row.value = tr.bound;
        row.mc_estimate = tr.empirical;
        row.mc_stderr = 0.5 * (tr.wilson_upper - tr.wilson_lower);
        row.replicas = cp_replicas;
        row.seed = cp_common.seed;
        table.rows.push_back(std::move(row));
      }
    } else {
      throw std::invalid_argument("coupling: --mode must be parallel, merge "
                                  "or tail");
    }
    table.sort_canonical();
    emit(table, cp_common.out);
    return 0;
  }

  if (sweep->parsed()) {
    ExperimentConfig config;
    config.name = "cutoff-sweep";
    for (double v : parse_grid(sw_ns))
      config.ns.push_back(static_cast<std::size_t>(v));
    config.betas = parse_grid(sw_betas);
    for (double b : config.betas) {
      DouParams check(16, b);
      (void)check;
    }
    config.ts = parse_grid(sw_common.t_grid);
    if (!sw_kinds.empty()) {
      std::istringstream in(sw_kinds);
      std::string tok;
      while (std::getline(in, tok, ','))
        config.kinds.push_back(parse_metric(tok));
    }
    config.z0_scale = sw_scale;
    config.replicas = sw_replicas;
    config.dt = sw_dt;
    config.kappa = sw_kappa;
    config.seed = sw_common.seed;
    config.threads = threads;
    config.output_dir = sw_out_dir;
    ExperimentResult res = run_experiment(config);
    emit(res.table, sw_common.out);
    for (const std::string& f : res.files_written)
      std::cerr << "wrote " << f << "\n";
    return 0;
  }

  if (figures->parsed()) {
    ExperimentConfig config;
    config.name = "hellinger-figure";
    config.ns = {50};
    config.ts = parse_grid(fg_common.t_grid);
    config.seed = fg_common.seed;
    config.dt = fg_dt;
    config.threads = threads;
    config.output_dir = fg_out_dir;
    ExperimentResult hell = run_experiment(config);
    config.name = "oudou-figure";
    config.ns.clear();
    ExperimentResult oudou = run_experiment(config);
    CurveTable table = std::move(hell.table);
    for (CurveRow& r : oudou.table.rows) table.rows.push_back(std::move(r));
    table.sort_canonical();
    emit(table, fg_common.out);
    for (const std::string& f : hell.files_written)
      std::cerr << "wrote " << f << "\n";
    for (const std::string& f : oudou.files_written)
      std::cerr << "wrote " << f << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 1;
  }
}
