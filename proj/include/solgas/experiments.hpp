#pragma once

// Experiment drivers: shielding convergence sweeps, soliton-train drift,
// random-gas fluctuation statistics and the elliptic (focal-segment) profile.
// Every driver is deterministic given (seed, config); per-trial streams are
// derived as seed ^ global_trial_index.

#include <cstdint>
#include <string>
#include <vector>

#include "solgas/core.hpp"
#include "solgas/domains.hpp"
#include "solgas/engine.hpp"
#include "solgas/sampling.hpp"
#include "solgas/stats.hpp"

namespace solgas {

enum class GasSampler { Fekete, Uniform, Ginibre };

struct Window {
  double x_min = 0.0;
  double x_max = 0.0;
};

struct FeketeOptions {
  double tol = 5e-7;
  int max_iter = 40000;
};

struct ShieldingRow {
  int n = 0;
  double sup_error = 0.0;
  Window window;
  SolveDiagnostics diagnostics;
  bool failed = false;
  std::string error;
};

struct ConvergenceTable {
  std::vector<ShieldingRow> rows;
};

// For each N: sample the gas, attach norming constants, evaluate psi_N and
// the predicted field on a 101-point x-grid at t = 0 and record the sup
// difference.  The deterministic sampler is Fekete (mapped) on disks and the
// equal-area fill on other domains.
ConvergenceTable run_shielding(const Domain& domain,
                               const DensitySpec& density,
                               const ScatteringData& prediction,
                               const std::vector<int>& ns, Window grid_window,
                               GasSampler sampler, uint64_t seed,
                               unsigned threads = 0,
                               const FeketeOptions& fekete = {});

struct DriftRow {
  int n = 0;
  double peak_distance = 0.0;   // limiting peak to first train peak
  double main_peak_offset = 0.0;  // |main peak - predicted x0|
};

struct DriftFit {
  std::vector<DriftRow> rows;
  double p = 0.0;  // slope of q + p log N
  double q = 0.0;
  double r_squared = 0.0;
  double predicted_x0 = 0.0;
};

// Fekete gas on a disk; locates |psi_N(x,0)| peaks on a 0.01-spaced grid and
// fits the distance between the limiting peak and its left neighbour against
// q + p log N.
DriftFit run_drift(const DiskDomain& disk, const DensitySpec& density,
                   const std::vector<int>& ns, Window x_window, uint64_t seed,
                   unsigned threads = 0, const FeketeOptions& fekete = {});

struct FluctuationRecord {
  int n = 0;
  Complex sample_mean;
  double sigma = 0.0;       // rms complex scatter
  double normality_p = 0.0;  // min over Re and Im parts
  int trials = 0;
  int failed_trials = 0;
};

struct FluctuationReport {
  std::vector<FluctuationRecord> per_n;
  PowerLawFit fit;  // log sigma = log c - alpha log N
  std::vector<std::vector<double>> raw_re;  // [n_index][trial]
  std::vector<std::vector<double>> raw_im;
};

FluctuationReport run_fluctuations(const Domain& domain,
                                   const DensitySpec& density,
                                   const std::vector<int>& ns, int trials,
                                   EvaluationPoint at, GasSampler sampler,
                                   uint64_t seed, unsigned threads = 0,
                                   const SamplerConfig& mcmc = {});

struct EllipticProfileReport {
  int n = 0;
  double measured_period = 0.0;
  double predicted_period = 0.0;
  double measured_envelope_min = 0.0;
  double measured_envelope_max = 0.0;
  double predicted_envelope_min = 0.0;
  double predicted_envelope_max = 0.0;
  bool decay_check = false;
  double decay_max_abs = 0.0;  // max |psi| on the decay window [5,10]
  std::vector<double> profile_x;
  std::vector<double> profile_abs;
};

// Segment gas of the ellipse probed on a 0.01-spaced window of negative x:
// oscillation period against 2K(m)/(alpha1+alpha2), envelope against
// (alpha2-alpha1, alpha2+alpha1), exponential decay on x in [5,10].
EllipticProfileReport run_elliptic(const EllipseDomain& ellipse,
                                   const DensitySpec& density, int n,
                                   Window x_probe_window, uint64_t seed,
                                   unsigned threads = 0);

// Complete elliptic integral of the first kind, parameter convention
// (m = k^2), by arithmetic-geometric-mean iteration.
double complete_elliptic_k(double m);

struct Peak {
  double x = 0.0;
  double value = 0.0;
};

// Three-point local maxima with quadratic sub-grid refinement.
std::vector<Peak> find_local_maxima(const std::vector<double>& xs,
                                    const std::vector<double>& values);

}  // namespace solgas
