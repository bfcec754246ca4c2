#pragma once

// Spectra filling a domain.
//
// Reference configurations live in the unit disk and are transported by
// z = center + radius * w.  Three generators:
//   fekete_points        minimizers of the weighted log energy
//                          E(w) = -2 sum_{j<k} ln|w_j-w_k| + N sum_j |w_j|^2,
//                        whose empirical measure tends to the uniform unit
//                        disk; plain gradient descent with Armijo backtracking.
//   ginibre_sample       Metropolis draw from the density prop. to exp(-E),
//                        the eigenvalue law filling the same unit disk.
//   uniform_domain_sample rejection sampling of any domain.
// equal_area_points gives a deterministic uniform fill of non-disk domains
// (exact equal-mass cells in measure-flattening coordinates, Gauss centroids);
// it backs the deterministic gas on quadrature domains and ellipses.
// norming_constants applies the interpolation rule c_j = A beta(z_j) / (pi N).

#include <cstdint>
#include <vector>

#include "solgas/core.hpp"
#include "solgas/domains.hpp"
#include "solgas/rng.hpp"

namespace solgas {

struct SamplerConfig {
  uint64_t seed = 1;
  int mcmc_burn_in = 200;        // sweeps (N single-particle proposals each)
  int mcmc_steps_per_sample = 50;  // sweeps between consecutive draws
  double proposal_scale = 1.0;     // Gaussian proposal sd = scale / sqrt(N)

  void validate() const;
};

struct FeketeResult {
  std::vector<Complex> points;
  double energy = 0.0;
  double gradient_norm = 0.0;  // max_j |dE/dwbar_j|
  int iterations = 0;
  bool converged = false;      // gradient_norm <= tol * N reached
  uint64_t seed = 0;
};

double fekete_energy(const std::vector<Complex>& w);

FeketeResult fekete_points(int n, double tol = 1e-7, int max_iter = 30000,
                           uint64_t seed = 1, unsigned threads = 0);

// Checked transport of a reference configuration into a disk (tolerance 1e-6
// on unit-disk membership).
std::vector<Complex> map_to_domain(const std::vector<Complex>& points,
                                   const DiskDomain& disk);

// Same affine map without the membership check, for random reference
// configurations that may spill slightly outside the closed disk.
std::vector<Complex> scale_to_disk(const std::vector<Complex>& points,
                                   const DiskDomain& disk);

std::vector<Complex> ginibre_sample(int n, const SamplerConfig& config);

// Equilibrated chain for consecutive draws spaced by mcmc_steps_per_sample.
class GinibreChain {
public:
  GinibreChain(int n, const SamplerConfig& config);
  const std::vector<Complex>& sample();  // advances the chain, returns state

private:
  void sweeps(int count);
  std::vector<Complex> w_;
  Rng rng_;
  double step_;
  int spacing_;
  int n_;
  bool first_ = true;
};

std::vector<Complex> uniform_domain_sample(const Domain& domain, int n,
                                           uint64_t seed);

std::vector<Complex> equal_area_points(const Domain& domain, int n);

ScatteringData norming_constants(const std::vector<Complex>& points,
                                 double area, const DensitySpec& density,
                                 int n_scaling);

// Kolmogorov distance between the sorted squared moduli of a reference
// configuration and the law {Gamma(k,1)/N : k = 1..N} of the exact ensemble.
double kostlan_ks_distance(const std::vector<Complex>& points);

}  // namespace solgas
