// solgas CLI: samplers, the N-soliton engine and the experiment drivers.
// Exit codes: 0 success, 1 usage or config error, 2 numerical failure,
// 3 run completed but a soft check failed (report still written).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "solgas/core.hpp"
#include "solgas/domains.hpp"
#include "solgas/engine.hpp"
#include "solgas/experiments.hpp"
#include "solgas/io.hpp"
#include "solgas/sampling.hpp"

namespace {

constexpr const char* kVersion = "solgas 0.1.0";

using namespace solgas;

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::ConfigError ? 1 : 2;
}

void add_version(CLI::App* cmd) {
  cmd->add_flag_callback(
      "--version",
      [] {
        std::printf("%s\n", kVersion);
        throw CLI::Success();
      },
      "print version and exit");
}

struct CommonOut {
  std::string csv;
  std::string json;
};

void reject_unused(const Config& cfg) {
  const auto unused = cfg.unused_keys();
  if (!unused.empty())
    throw Error(ErrorCode::ConfigError, "unknown config key " + unused.front());
}

GasSampler sampler_from(const std::string& name, bool fluctuation) {
  if (name == "fekete" && !fluctuation) return GasSampler::Fekete;
  if (name == "uniform") return GasSampler::Uniform;
  if (name == "ginibre" && fluctuation) return GasSampler::Ginibre;
  throw Error(ErrorCode::ConfigError, "unsupported sampler '" + name + "'");
}

std::vector<int> int_list(const std::vector<long>& v) {
  return {v.begin(), v.end()};
}

// n = 1 disk reduction or the n-soliton quadrature prediction
ScatteringData prediction_for(const Domain& domain,
                              const DensitySpec& density) {
  if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
    if (density.p != 0)
      throw Error(ErrorCode::ConfigError,
                  "disk shielding prediction needs an analytic density (p=0)");
    const Complex c0 =
        disk->radius * disk->radius * eval_density(density, disk->center);
    return ScatteringData({{disk->center, c0}});
  }
  if (const auto* qd = std::get_if<QuadratureDomain>(&domain))
    return quadrature_prediction(*qd, density);
  throw Error(ErrorCode::ConfigError,
              "no closed-form prediction for this domain");
}

int cmd_fekete(int n, double tol, int max_iter, uint64_t seed,
               const std::string& out, unsigned threads) {
  FeketeResult result = fekete_points(n, tol, max_iter, seed, threads);
  write_file(out, points_to_csv(result.points));
  write_file(out + ".json", fekete_sidecar_json(result));
  std::printf("wrote %s (+.json): n=%d iterations=%d gradient_norm=%.3e%s\n",
              out.c_str(), n, result.iterations, result.gradient_norm,
              result.converged ? "" : " [max iterations exceeded]");
  return result.converged ? 0 : 2;
}

int cmd_evaluate(const std::string& spectrum, double xmin, double xmax,
                 long nx, double tmin, double tmax, long nt,
                 const std::string& out, unsigned threads) {
  const ScatteringData data = read_spectrum_csv(spectrum);
  const Grid grid = Grid::uniform(xmin, xmax, std::size_t(nx), tmin, tmax,
                                  std::size_t(nt));
  const FieldSample field = evaluate_field(data, grid, SolverPath::Full2N,
                                           threads);
  write_file(out, field_to_csv(field));
  std::printf("wrote %s: %zu points, condition <= %.3e, residual <= %.3e\n",
              out.c_str(), grid.x_values.size() * grid.t_values.size(),
              field.diagnostics.condition_estimate,
              field.diagnostics.linear_residual);
  return 0;
}

int cmd_shield(const Config& cfg, const CommonOut& out, uint64_t seed,
               unsigned threads) {
  const Domain domain = domain_from_config(cfg);
  const DensitySpec density = density_from_config(cfg);
  const ScatteringData prediction = prediction_for(domain, density);
  const std::vector<int> ns = int_list(cfg.get_int_list("run.ns"));
  const Window window{cfg.get_double("run.x_min", 0.0),
                      cfg.get_double("run.x_max", 3.0)};
  const GasSampler sampler =
      sampler_from(cfg.get_string("run.sampler", "fekete"), false);
  reject_unused(cfg);

  const ConvergenceTable table =
      run_shielding(domain, density, prediction, ns, window, sampler, seed,
                    threads);
  if (!out.csv.empty()) write_file(out.csv, shielding_csv(table));
  if (!out.json.empty()) write_file(out.json, shielding_json(table));

  bool ok = true;
  double prev = -1.0;
  for (const auto& row : table.rows) {
    std::printf("N=%-6d sup_error=%s%s\n", row.n,
                row.failed ? "failed" : format_g17(row.sup_error).c_str(),
                row.failed ? (" (" + row.error + ")").c_str() : "");
    if (row.failed) ok = false;
    else {
      if (prev >= 0.0 && row.sup_error >= prev) ok = false;
      prev = row.sup_error;
    }
  }
  return ok ? 0 : 3;
}

int cmd_drift(const Config& cfg, const CommonOut& out, uint64_t seed,
              unsigned threads) {
  const Domain domain = domain_from_config(cfg);
  const auto* disk = std::get_if<DiskDomain>(&domain);
  if (disk == nullptr)
    throw Error(ErrorCode::ConfigError, "drift runs on a disk domain");
  const DensitySpec density = density_from_config(cfg);
  const std::vector<int> ns = int_list(cfg.get_int_list("run.ns"));
  const Window window{cfg.get_double("run.x_min", -15.0),
                      cfg.get_double("run.x_max", 3.0)};
  reject_unused(cfg);

  const DriftFit fit = run_drift(*disk, density, ns, window, seed, threads);
  if (!out.csv.empty()) write_file(out.csv, drift_csv(fit));
  if (!out.json.empty()) write_file(out.json, drift_json(fit));
  std::printf("drift fit: p=%.5f q=%.5f r_squared=%.4f\n", fit.p, fit.q,
              fit.r_squared);
  return (fit.p > 0.0 && fit.r_squared > 0.9) ? 0 : 3;
}

int cmd_fluctuate(const Config& cfg, const CommonOut& out, uint64_t seed,
                  unsigned threads) {
  const Domain domain = domain_from_config(cfg);
  const DensitySpec density = density_from_config(cfg);
  const std::vector<int> ns = int_list(cfg.get_int_list("run.ns"));
  const int trials = int(cfg.get_int("run.trials", 200));
  const EvaluationPoint at{cfg.get_double("run.eval_x", 0.0),
                           cfg.get_double("run.eval_t", 0.0)};
  const GasSampler sampler =
      sampler_from(cfg.get_string("run.sampler", "ginibre"), true);
  SamplerConfig mcmc;
  mcmc.mcmc_burn_in = int(cfg.get_int("mcmc.burn_in", mcmc.mcmc_burn_in));
  mcmc.mcmc_steps_per_sample =
      int(cfg.get_int("mcmc.steps_per_sample", mcmc.mcmc_steps_per_sample));
  mcmc.proposal_scale =
      cfg.get_double("mcmc.proposal_scale", mcmc.proposal_scale);
  reject_unused(cfg);

  const FluctuationReport report = run_fluctuations(
      domain, density, ns, trials, at, sampler, seed, threads, mcmc);
  if (!out.csv.empty()) write_file(out.csv, fluctuation_csv(report));
  if (!out.json.empty()) write_file(out.json, fluctuation_json(report));

  for (const auto& rec : report.per_n)
    std::printf("N=%-6d sigma=%.6e normality_p=%.4f failed=%d\n", rec.n,
                rec.sigma, rec.normality_p, rec.failed_trials);
  std::printf("fit: sigma ~ %.4f / N^%.4f (r_squared=%.4f)\n",
              report.fit.constant, report.fit.alpha, report.fit.r_squared);

  const bool ginibre = sampler == GasSampler::Ginibre;
  const double lo = ginibre ? 0.8 : 0.35, hi = ginibre ? 1.2 : 0.65;
  bool ok = report.fit.alpha >= lo && report.fit.alpha <= hi;
  if (!report.per_n.empty() && report.per_n.back().normality_p <= 0.01)
    ok = false;
  return ok ? 0 : 3;
}

int cmd_elliptic(const Config& cfg, const CommonOut& out, uint64_t seed,
                 unsigned threads) {
  const Domain domain = domain_from_config(cfg);
  const auto* ellipse = std::get_if<EllipseDomain>(&domain);
  if (ellipse == nullptr)
    throw Error(ErrorCode::ConfigError, "elliptic runs on an ellipse domain");
  const DensitySpec density = density_from_config(cfg);
  const int n = int(cfg.get_int("run.n", 400));
  const Window window{cfg.get_double("run.x_min", -15.0),
                      cfg.get_double("run.x_max", -5.0)};
  reject_unused(cfg);

  const EllipticProfileReport rep =
      run_elliptic(*ellipse, density, n, window, seed, threads);
  if (!out.csv.empty()) write_file(out.csv, elliptic_csv(rep));
  if (!out.json.empty()) write_file(out.json, elliptic_json(rep));
  std::printf(
      "period: measured=%.5f predicted=%.5f; envelope: [%.4f, %.4f] vs "
      "[%.4f, %.4f]; decay max |psi| = %.4g\n",
      rep.measured_period, rep.predicted_period, rep.measured_envelope_min,
      rep.measured_envelope_max, rep.predicted_envelope_min,
      rep.predicted_envelope_max, rep.decay_max_abs);

  const bool ok =
      std::abs(rep.measured_period - rep.predicted_period) <
          0.05 * rep.predicted_period &&
      std::abs(rep.measured_envelope_max - rep.predicted_envelope_max) <
          0.10 * rep.predicted_envelope_max &&
      std::abs(rep.measured_envelope_min - rep.predicted_envelope_min) <
          0.10 * rep.predicted_envelope_max &&
      rep.decay_check;
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soliton-gas laboratory for the focusing NLS equation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "cap worker threads (default: all available)");

  // fekete
  auto* fek = app.add_subcommand("fekete", "weighted Fekete reference points");
  add_version(fek);
  int fek_n = 0;
  double fek_tol = 1e-7;
  int fek_iter = 30000;
  uint64_t fek_seed = 1;
  std::string fek_out;
  fek->add_option("--n", fek_n, "number of points")->required();
  fek->add_option("--tol", fek_tol, "gradient tolerance (scaled by N)");
  fek->add_option("--max-iter", fek_iter, "iteration cap");
  fek->add_option("--seed", fek_seed, "PRNG seed");
  fek->add_option("--out", fek_out, "output CSV path")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "evaluate psi_N on a grid");
  add_version(ev);
  std::string ev_spec, ev_out;
  double ev_xmin = 0, ev_xmax = 0, ev_tmin = 0, ev_tmax = 0;
  long ev_nx = 1, ev_nt = 1;
  ev->add_option("--spectrum", ev_spec, "CSV of re_z,im_z,re_c,im_c")
      ->required();
  ev->add_option("--xmin", ev_xmin)->required();
  ev->add_option("--xmax", ev_xmax)->required();
  ev->add_option("--nx", ev_nx)->required();
  ev->add_option("--tmin", ev_tmin)->required();
  ev->add_option("--tmax", ev_tmax)->required();
  ev->add_option("--nt", ev_nt)->required();
  ev->add_option("--out", ev_out, "output CSV path")->required();

  // config-driven drivers
  struct DriverArgs {
    std::string config;
    std::string out_csv, out_json;
    uint64_t seed = 0;
    bool seed_set = false;
  };
  auto add_driver = [&](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    add_version(cmd);
    auto args = std::make_shared<DriverArgs>();
    cmd->add_option("--config", args->config, "config file")->required();
    cmd->add_option("--out-csv", args->out_csv, "override out.csv");
    cmd->add_option("--out-json", args->out_json, "override out.json");
    cmd->add_option_function<uint64_t>(
        "--seed",
        [args](const uint64_t& s) {
          args->seed = s;
          args->seed_set = true;
        },
        "override run.seed");
    return std::pair{cmd, args};
  };
  auto [shield_cmd, shield_args] =
      add_driver("shield", "shielding convergence sweep");
  auto [drift_cmd, drift_args] = add_driver("drift", "soliton-train drift fit");
  auto [fluct_cmd, fluct_args] =
      add_driver("fluctuate", "random-gas fluctuation statistics");
  auto [ell_cmd, ell_args] = add_driver("elliptic", "elliptic profile checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (fek->parsed())
      return cmd_fekete(fek_n, fek_tol, fek_iter, fek_seed, fek_out, threads);
    if (ev->parsed())
      return cmd_evaluate(ev_spec, ev_xmin, ev_xmax, ev_nx, ev_tmin, ev_tmax,
                          ev_nt, ev_out, threads);

    auto run_driver = [&](const DriverArgs& args,
                          int (*fn)(const Config&, const CommonOut&, uint64_t,
                                    unsigned)) {
      Config cfg = Config::from_file(args.config);
      const uint64_t seed =
          args.seed_set ? args.seed : uint64_t(cfg.get_int("run.seed", 1));
      CommonOut out;
      out.csv = !args.out_csv.empty() ? args.out_csv
                                      : cfg.get_string("out.csv", "");
      out.json = !args.out_json.empty() ? args.out_json
                                        : cfg.get_string("out.json", "");
      return fn(cfg, out, seed, threads);
    };
    if (shield_cmd->parsed()) return run_driver(*shield_args, cmd_shield);
    if (drift_cmd->parsed()) return run_driver(*drift_args, cmd_drift);
    if (fluct_cmd->parsed()) return run_driver(*fluct_args, cmd_fluctuate);
    if (ell_cmd->parsed()) return run_driver(*ell_args, cmd_elliptic);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
