#pragma once

// Small statistics toolkit: Gaussian ML fit, Anderson-Darling normality test
// (case with both parameters estimated), log-log power-law regression and a
// bootstrap standard error for the scatter estimate.

#include <cstdint>
#include <vector>

namespace solgas {

struct GaussianFit {
  double mean = 0.0;
  double sigma = 0.0;  // population normalization (divide by n)
  bool degenerate = false;
};

GaussianFit gaussian_fit(const std::vector<double>& samples);

// p-value of the Anderson-Darling statistic against the fitted normal;
// requires >= 30 samples and a non-degenerate spread.
double normality_test(const std::vector<double>& samples);

struct PowerLawFit {
  double alpha = 0.0;     // sigma ~ constant * N^{-alpha}
  double constant = 0.0;
  double r_squared = 0.0;
};

PowerLawFit power_law_fit(const std::vector<double>& ns,
                          const std::vector<double>& sigmas);

// Standard error of the rms scatter of complex samples (given as re/im
// pairs), nonparametric bootstrap with the given number of resamples.
double bootstrap_sigma_stderr(const std::vector<double>& re,
                              const std::vector<double>& im, int resamples,
                              uint64_t seed);

double standard_normal_cdf(double x);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

}  // namespace solgas
