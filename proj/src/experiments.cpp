#include "solgas/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace solgas {

namespace {

std::vector<Complex> deterministic_gas(const Domain& domain, int n,
                                       uint64_t seed,
                                       const FeketeOptions& fekete,
                                       unsigned threads) {
  if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
    FeketeResult ref =
        fekete_points(n, fekete.tol, fekete.max_iter, seed, threads);
    return map_to_domain(ref.points, *disk);
  }
  return equal_area_points(domain, n);
}

Grid line_grid(Window w, std::size_t count, double t) {
  Grid g = Grid::uniform(w.x_min, w.x_max, count, t, t, 1);
  return g;
}

}  // namespace

ConvergenceTable run_shielding(const Domain& domain,
                               const DensitySpec& density,
                               const ScatteringData& prediction,
                               const std::vector<int>& ns, Window grid_window,
                               GasSampler sampler, uint64_t seed,
                               unsigned threads, const FeketeOptions& fekete) {
  if (sampler == GasSampler::Ginibre)
    throw Error(ErrorCode::InvariantViolation,
                "shielding sweeps use the fekete or uniform sampler");
  const double a = area(domain, seed).value;
  const Grid grid = line_grid(grid_window, 101, 0.0);
  const FieldSample predicted =
      evaluate_field(prediction, grid, SolverPath::Full2N, threads);

  ConvergenceTable table;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    ShieldingRow row;
    row.n = n;
    row.window = grid_window;
    try {
      std::vector<Complex> pts =
          sampler == GasSampler::Fekete
              ? deterministic_gas(domain, n, seed ^ uint64_t(n), fekete,
                                  threads)
              : uniform_domain_sample(domain, n, seed ^ uint64_t(n));
      const ScatteringData data = norming_constants(pts, a, density, n);
      const FieldSample field =
          evaluate_field(data, grid, SolverPath::ReducedN, threads);
      double sup = 0.0;
      for (std::size_t xi = 0; xi < grid.x_values.size(); ++xi)
        sup = std::max(sup,
                       std::abs(field.psi[0][xi] - predicted.psi[0][xi]));
      row.sup_error = sup;
      row.diagnostics = field.diagnostics;
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<Peak> find_local_maxima(const std::vector<double>& xs,
                                    const std::vector<double>& values) {
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
    const double denom = values[i - 1] - 2.0 * values[i] + values[i + 1];
    double dx = 0.0;
    if (denom < 0.0)
      dx = 0.5 * (values[i - 1] - values[i + 1]) / denom;
    const double h = xs[i + 1] - xs[i];
    peaks.push_back({xs[i] + dx * h,
                     values[i] - 0.25 * (values[i - 1] - values[i + 1]) * dx});
  }
  return peaks;
}

namespace {

// Per-point |psi(x, 0)| with refusals recorded as negative entries.  Deep in
// the saturated left tail the condition guard may reject the solve; the
// field there is an exponentially small tail that carries no peaks, so the
// scan drops those points (and insists the refusals form a left prefix).
std::vector<double> tolerant_profile(const ScatteringData& data,
                                     const std::vector<double>& xs,
                                     unsigned threads) {
  std::vector<double> mod(xs.size(), -1.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= xs.size()) break;
      try {
        mod[i] = std::abs(
            evaluate_psi(data, {xs[i], 0.0}, SolverPath::ReducedN).first);
      } catch (const Error&) {
        mod[i] = -1.0;
      }
    }
  };
  unsigned pool_size =
      threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (pool_size <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < pool_size; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  return mod;
}

// |psi_N(x,0)| maxima on the 0.01 lattice: a 0.05-spaced scan brackets the
// candidates (soliton peaks are ~1/(2b) wide, far above both spacings), then
// each bracket is resolved on the fine lattice.
std::vector<Peak> scan_profile_peaks(const ScatteringData& data,
                                     Window x_window, unsigned threads) {
  const double coarse_h = 0.05, fine_h = 0.01, halo = 0.12;
  const std::size_t coarse_count =
      std::size_t(std::lround((x_window.x_max - x_window.x_min) / coarse_h)) +
      1;
  const Grid coarse = line_grid(x_window, coarse_count, 0.0);
  const std::vector<double> mod =
      tolerant_profile(data, coarse.x_values, threads);

  std::size_t first_valid = 0;
  while (first_valid < mod.size() && mod[first_valid] < 0.0) ++first_valid;
  if (first_valid + 3 > mod.size())
    throw Error(ErrorCode::SingularSystem,
                "profile not resolvable anywhere in the window");
  for (std::size_t i = first_valid; i < mod.size(); ++i)
    if (mod[i] < 0.0)
      throw Error(ErrorCode::SingularSystem,
                  "solve refused inside the active profile region at x = " +
                      std::to_string(coarse.x_values[i]));

  const std::vector<double> valid_x(coarse.x_values.begin() + first_valid,
                                    coarse.x_values.end());
  const std::vector<double> valid_mod(mod.begin() + first_valid, mod.end());

  std::vector<Peak> peaks;
  for (const Peak& cand : find_local_maxima(valid_x, valid_mod)) {
    // fine cluster on the global 0.01 lattice around the candidate
    const long lo =
        std::lround(std::ceil((cand.x - halo - x_window.x_min) / fine_h));
    const long hi =
        std::lround(std::floor((cand.x + halo - x_window.x_min) / fine_h));
    std::vector<double> fine_x;
    for (long i = std::max(0L, lo); i <= hi; ++i) {
      const double x = x_window.x_min + fine_h * double(i);
      if (x > x_window.x_max) break;
      fine_x.push_back(x);
    }
    if (fine_x.size() < 3) continue;
    std::vector<double> fm = tolerant_profile(data, fine_x, threads);
    std::size_t skip = 0;
    while (skip < fm.size() && fm[skip] < 0.0) ++skip;
    if (skip + 3 > fm.size()) continue;
    const std::vector<double> cx(fine_x.begin() + skip, fine_x.end());
    const std::vector<double> cm(fm.begin() + skip, fm.end());
    for (const Peak& p : find_local_maxima(cx, cm)) peaks.push_back(p);
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.x < b.x; });
  return peaks;
}

}  // namespace

DriftFit run_drift(const DiskDomain& disk, const DensitySpec& density,
                   const std::vector<int>& ns, Window x_window, uint64_t seed,
                   unsigned threads, const FeketeOptions& fekete) {
  if (ns.size() < 3)
    throw Error(ErrorCode::TooFewSamples, "drift fit needs >= 3 values of N");
  disk.validate();

  // limiting one-soliton of the disk: pole at the center, c0 = rho^2 r(center)
  const Complex c0 =
      disk.radius * disk.radius * eval_density(density, disk.center);
  const SolitonParams limit = soliton_params_from_constant(disk.center, c0);

  DriftFit fit;
  fit.predicted_x0 = limit.x0;

  std::vector<double> log_n, dist;
  for (int n : ns) {
    std::vector<Complex> pts =
        deterministic_gas(Domain(disk), n, seed ^ uint64_t(n), fekete, threads);
    const ScatteringData data = norming_constants(
        pts, M_PI * disk.radius * disk.radius, density, n);
    const std::vector<Peak> peaks = scan_profile_peaks(data, x_window, threads);
    if (peaks.empty())
      throw Error(ErrorCode::PeakNotFound, "no peaks in the drift window");
    // peak closest to the predicted limit position
    std::size_t main = 0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
      if (std::abs(peaks[i].x - limit.x0) < std::abs(peaks[main].x - limit.x0))
        main = i;
    // nearest other peak strictly to its left
    if (main == 0)
      throw Error(ErrorCode::PeakNotFound,
                  "no secondary peak left of the limiting soliton; widen the "
                  "window");
    const Peak& left = peaks[main - 1];
    DriftRow row;
    row.n = n;
    row.peak_distance = peaks[main].x - left.x;
    row.main_peak_offset = std::abs(peaks[main].x - limit.x0);
    fit.rows.push_back(row);
    log_n.push_back(std::log(double(n)));
    dist.push_back(row.peak_distance);
  }

  // least squares d = q + p log N
  const std::size_t m = log_n.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += log_n[i];
    my += dist[i];
  }
  mx /= double(m);
  my /= double(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
    sxy += (log_n[i] - mx) * (dist[i] - my);
    syy += (dist[i] - my) * (dist[i] - my);
  }
  fit.p = sxy / sxx;
  fit.q = my - fit.p * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

FluctuationReport run_fluctuations(const Domain& domain,
                                   const DensitySpec& density,
                                   const std::vector<int>& ns, int trials,
                                   EvaluationPoint at, GasSampler sampler,
                                   uint64_t seed, unsigned threads,
                                   const SamplerConfig& mcmc) {
  if (trials < 30)
    throw Error(ErrorCode::TooFewSamples, "need at least 30 trials");
  if (sampler == GasSampler::Fekete)
    throw Error(ErrorCode::InvariantViolation,
                "fluctuation sweeps use the ginibre or uniform sampler");
  const DiskDomain* disk = std::get_if<DiskDomain>(&domain);
  if (sampler == GasSampler::Ginibre && disk == nullptr)
    throw Error(ErrorCode::InvariantViolation,
                "the Ginibre reference ensemble targets a disk domain");
  const double a = area(domain, seed).value;

  FluctuationReport report;
  uint64_t trial_counter = 0;
  for (int n : ns) {
    std::vector<Complex> psi(trials);
    std::vector<char> ok(trials, 0);
    const uint64_t base = trial_counter;
    trial_counter += uint64_t(trials);

    std::atomic<int> next{0};
    auto worker = [&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= trials) break;
        const uint64_t stream = seed ^ (base + uint64_t(t));
        try {
          std::vector<Complex> pts;
          if (sampler == GasSampler::Ginibre) {
            SamplerConfig cfg = mcmc;
            cfg.seed = stream;
            pts = scale_to_disk(ginibre_sample(n, cfg), *disk);
          } else {
            pts = uniform_domain_sample(domain, n, stream);
          }
          const ScatteringData data = norming_constants(pts, a, density, n);
          psi[t] = evaluate_psi(data, at, SolverPath::ReducedN).first;
          ok[t] = 1;
        } catch (const Error&) {
          ok[t] = 0;
        }
      }
    };
    unsigned pool_size = threads == 0 ? std::thread::hardware_concurrency()
                                      : threads;
    if (pool_size <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i + 1 < pool_size; ++i) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();
    }

    FluctuationRecord rec;
    rec.n = n;
    std::vector<double> re, im;
    for (int t = 0; t < trials; ++t) {
      if (!ok[t]) continue;
      re.push_back(psi[t].real());
      im.push_back(psi[t].imag());
    }
    rec.trials = int(re.size());
    rec.failed_trials = trials - rec.trials;
    if (rec.trials < 2)
      throw Error(ErrorCode::TooFewSamples,
                  "all trials failed at N = " + std::to_string(n));
    Complex mean{0.0, 0.0};
    for (std::size_t i = 0; i < re.size(); ++i) mean += Complex(re[i], im[i]);
    mean /= double(rec.trials);
    rec.sample_mean = mean;
    double ss = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i)
      ss += std::norm(Complex(re[i], im[i]) - mean);
    rec.sigma = std::sqrt(ss / double(rec.trials));
    rec.normality_p = std::min(normality_test(re), normality_test(im));
    report.per_n.push_back(rec);
    report.raw_re.push_back(std::move(re));
    report.raw_im.push_back(std::move(im));
  }

  if (report.per_n.size() >= 3) {
    std::vector<double> nvals, sigmas;
    for (const auto& rec : report.per_n) {
      nvals.push_back(double(rec.n));
      sigmas.push_back(rec.sigma);
    }
    report.fit = power_law_fit(nvals, sigmas);
  }
  return report;
}

double complete_elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0))
    throw Error(ErrorCode::NonPositiveInput,
                "elliptic parameter must lie in [0, 1)");
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int i = 0; i < 200 && std::fabs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

EllipticProfileReport run_elliptic(const EllipseDomain& ellipse,
                                   const DensitySpec& density, int n,
                                   Window x_probe_window, uint64_t seed,
                                   unsigned threads) {
  (void)seed;  // the segment gas is deterministic
  ellipse.validate();
  if (n < 200)
    throw Error(ErrorCode::InvariantViolation, "elliptic probe needs N >= 200");

  EllipticProfileReport rep;
  rep.n = n;
  const double sum = ellipse.alpha1 + ellipse.alpha2;
  const double param = 4.0 * ellipse.alpha1 * ellipse.alpha2 / (sum * sum);
  rep.predicted_period = 2.0 * complete_elliptic_k(param) / sum;
  rep.predicted_envelope_min = ellipse.alpha2 - ellipse.alpha1;
  rep.predicted_envelope_max = sum;
  if (x_probe_window.x_max - x_probe_window.x_min <
      3.0 * rep.predicted_period)
    throw Error(ErrorCode::TooFewOscillations,
                "probe window shorter than three predicted periods");

  const ScatteringData data = segment_discretization(ellipse, density, n);

  const std::size_t count = std::size_t(std::lround(
                                (x_probe_window.x_max - x_probe_window.x_min) /
                                0.01)) +
                            1;
  const Grid grid = line_grid(x_probe_window, count, 0.0);
  const FieldSample field =
      evaluate_field(data, grid, SolverPath::ReducedN, threads);

  rep.profile_x = grid.x_values;
  rep.profile_abs.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    rep.profile_abs[i] = std::abs(field.psi[0][i]);

  const std::vector<Peak> peaks =
      find_local_maxima(rep.profile_x, rep.profile_abs);
  if (peaks.size() < 2)
    throw Error(ErrorCode::TooFewOscillations,
                "fewer than two oscillation maxima in the probe window");
  double spacing_sum = 0.0;
  for (std::size_t i = 1; i < peaks.size(); ++i)
    spacing_sum += peaks[i].x - peaks[i - 1].x;
  rep.measured_period = spacing_sum / double(peaks.size() - 1);

  rep.measured_envelope_max = 0.0;
  rep.measured_envelope_min = 1e300;
  for (double v : rep.profile_abs) {
    rep.measured_envelope_max = std::max(rep.measured_envelope_max, v);
    rep.measured_envelope_min = std::min(rep.measured_envelope_min, v);
  }

  // decay side: |psi| below 0.05 on [5, 10]
  const Grid decay_grid = line_grid({5.0, 10.0}, 101, 0.0);
  const FieldSample decay =
      evaluate_field(data, decay_grid, SolverPath::ReducedN, threads);
  rep.decay_max_abs = 0.0;
  for (std::size_t i = 0; i < decay.grid.x_values.size(); ++i)
    rep.decay_max_abs = std::max(rep.decay_max_abs, std::abs(decay.psi[0][i]));
  rep.decay_check = rep.decay_max_abs < 0.05;
  return rep;
}

}  // namespace solgas
