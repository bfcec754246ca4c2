#include "solgas/stats.hpp"

#include <algorithm>
#include <cmath>

#include "solgas/core.hpp"
#include "solgas/rng.hpp"

namespace solgas {

GaussianFit gaussian_fit(const std::vector<double>& samples) {
  if (samples.size() < 2)
    throw Error(ErrorCode::TooFewSamples, "gaussian fit needs >= 2 samples");
  GaussianFit fit;
  double sum = 0.0;
  for (double v : samples) sum += v;
  fit.mean = sum / double(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - fit.mean) * (v - fit.mean);
  fit.sigma = std::sqrt(ss / double(samples.size()));
  fit.degenerate = !(fit.sigma > 0.0);
  return fit;
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normality_test(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 30)
    throw Error(ErrorCode::TooFewSamples, "normality test needs >= 30 samples");
  const GaussianFit fit = gaussian_fit(samples);
  if (fit.degenerate)
    throw Error(ErrorCode::Degenerate, "constant samples have no spread");
  // unbiased sd for the studentized values
  const double sd = fit.sigma * std::sqrt(double(n) / double(n - 1));

  std::vector<double> z(samples);
  std::sort(z.begin(), z.end());
  double a2 = -double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo =
        std::clamp(standard_normal_cdf((z[i] - fit.mean) / sd), 1e-300, 1.0);
    const double hi = std::clamp(
        1.0 - standard_normal_cdf((z[n - 1 - i] - fit.mean) / sd), 1e-300, 1.0);
    a2 -= (2.0 * double(i) + 1.0) / double(n) * (std::log(lo) + std::log(hi));
  }
  // small-sample modification and p-value interpolation for the
  // estimated-parameters case (D'Agostino & Stephens, table 4.9)
  const double as = a2 * (1.0 + 0.75 / double(n) + 2.25 / double(n * n));
  double p;
  if (as >= 0.6)
    p = std::exp(1.2937 - 5.709 * as + 0.0186 * as * as);
  else if (as > 0.34)
    p = std::exp(0.9177 - 4.279 * as - 1.38 * as * as);
  else if (as > 0.2)
    p = 1.0 - std::exp(-8.318 + 42.796 * as - 59.938 * as * as);
  else
    p = 1.0 - std::exp(-13.436 + 101.14 * as - 223.73 * as * as);
  return std::clamp(p, 0.0, 1.0);
}

PowerLawFit power_law_fit(const std::vector<double>& ns,
                          const std::vector<double>& sigmas) {
  if (ns.size() != sigmas.size() || ns.size() < 3)
    throw Error(ErrorCode::TooFewSamples,
                "power-law fit needs >= 3 matching points");
  const std::size_t n = ns.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ns[i] > 0.0) || !(sigmas[i] > 0.0))
      throw Error(ErrorCode::NonPositiveInput,
                  "power-law fit requires positive inputs");
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(sigmas[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  PowerLawFit fit;
  const double slope = sxy / sxx;  // ly = my + slope (lx - mx)
  fit.alpha = -slope;
  fit.constant = std::exp(my - slope * mx);
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double bootstrap_sigma_stderr(const std::vector<double>& re,
                              const std::vector<double>& im, int resamples,
                              uint64_t seed) {
  if (re.size() != im.size() || re.size() < 2)
    throw Error(ErrorCode::TooFewSamples, "bootstrap needs >= 2 samples");
  const std::size_t n = re.size();
  auto rms_scatter = [&](const std::vector<std::size_t>& idx) {
    double mre = 0.0, mim = 0.0;
    for (std::size_t i : idx) {
      mre += re[i];
      mim += im[i];
    }
    mre /= double(idx.size());
    mim /= double(idx.size());
    double ss = 0.0;
    for (std::size_t i : idx)
      ss += (re[i] - mre) * (re[i] - mre) + (im[i] - mim) * (im[i] - mim);
    return std::sqrt(ss / double(idx.size()));
  };
  Rng rng(seed);
  std::vector<std::size_t> idx(n);
  std::vector<double> sigmas(resamples);
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i)
      idx[i] = std::size_t(rng.u01() * double(n));
    sigmas[r] = rms_scatter(idx);
  }
  double mean = 0.0;
  for (double s : sigmas) mean += s;
  mean /= double(resamples);
  double ss = 0.0;
  for (double s : sigmas) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / double(resamples - 1));
}

double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // series representation
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // continued fraction (modified Lentz)
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace solgas
