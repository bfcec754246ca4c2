#include "solgas/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "solgas/stats.hpp"

namespace solgas {

void SamplerConfig::validate() const {
  if (mcmc_burn_in < 0 || mcmc_steps_per_sample < 1)
    throw Error(ErrorCode::InvariantViolation, "non-positive MCMC step counts");
  if (!(proposal_scale > 0.0))
    throw Error(ErrorCode::InvariantViolation, "non-positive proposal scale");
}

namespace {

// Per-row terms computed wholly by one thread and reduced in index order, so
// results do not depend on the thread partition.
void parallel_rows(int n, unsigned threads,
                   const std::function<void(int)>& row) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || n < 64) {
    for (int j = 0; j < n; ++j) row(j);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= n) break;
      row(j);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double energy_of(const std::vector<Complex>& w, unsigned threads) {
  const int n = int(w.size());
  std::vector<double> row_e(n, 0.0);
  parallel_rows(n, threads, [&](int j) {
    double e = double(n) * std::norm(w[j]);
    for (int k = j + 1; k < n; ++k) {
      const double d2 = std::norm(w[j] - w[k]);
      if (d2 <= 1e-24) {
        e = std::numeric_limits<double>::infinity();  // collapsed pair
        break;
      }
      e -= std::log(d2);  // -2 ln|.| = -ln|.|^2
    }
    row_e[j] = e;
  });
  double total = 0.0;
  for (double e : row_e) total += e;
  return total;
}

void gradient_of(const std::vector<Complex>& w, std::vector<Complex>& grad,
                 unsigned threads) {
  const int n = int(w.size());
  grad.resize(n);
  parallel_rows(n, threads, [&](int j) {
    Complex g = double(n) * w[j];
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      g -= std::conj(1.0 / (w[j] - w[k]));
    }
    grad[j] = g;
  });
}

}  // namespace

double fekete_energy(const std::vector<Complex>& w) {
  return energy_of(w, 1);
}

FeketeResult fekete_points(int n, double tol, int max_iter, uint64_t seed,
                           unsigned threads) {
  if (n < 1)
    throw Error(ErrorCode::InvariantViolation, "need at least one point");
  FeketeResult out;
  out.seed = seed;
  Rng rng(seed);
  std::vector<Complex> w(n);
  for (auto& z : w) {
    const double r = std::sqrt(rng.u01()), a = 2.0 * M_PI * rng.u01();
    z = Complex(r * std::cos(a), r * std::sin(a));
  }

  std::vector<Complex> grad, trial(n);
  double energy = energy_of(w, threads);
  double prev_step = 1.0 / n;
  int it = 0;
  double gnorm = 0.0;
  for (; it < max_iter; ++it) {
    gradient_of(w, grad, threads);
    gnorm = 0.0;
    double gsq = 0.0;
    for (const Complex& g : grad) {
      gnorm = std::max(gnorm, std::abs(g));
      gsq += std::norm(g);
    }
    if (gnorm <= tol * n) {
      out.converged = true;
      break;
    }
    double step = std::min(2.0 * prev_step, 1.0 / n);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (int j = 0; j < n; ++j) trial[j] = w[j] - step * grad[j];
      const double trial_energy = energy_of(trial, threads);
      // infinite energy covers collapsed pairs: step rejected, retried smaller
      if (trial_energy <= energy - 1e-4 * step * gsq) {
        w.swap(trial);
        energy = trial_energy;
        prev_step = step;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search stalled at roundoff
  }
  if (!out.converged) {
    gradient_of(w, grad, threads);
    gnorm = 0.0;
    for (const Complex& g : grad) gnorm = std::max(gnorm, std::abs(g));
    out.converged = gnorm <= tol * n;
  }
  out.points = std::move(w);
  out.energy = energy;
  out.gradient_norm = gnorm;
  out.iterations = it;
  return out;
}

std::vector<Complex> map_to_domain(const std::vector<Complex>& points,
                                   const DiskDomain& disk) {
  disk.validate();
  for (const Complex& w : points)
    if (std::abs(w) > 1.0 + 1e-6)
      throw Error(ErrorCode::PointOutsideReferenceDisk,
                  "reference point outside the closed unit disk: " +
                      format_complex(w));
  return scale_to_disk(points, disk);
}

std::vector<Complex> scale_to_disk(const std::vector<Complex>& points,
                                   const DiskDomain& disk) {
  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    out[i] = disk.center + disk.radius * points[i];
  return out;
}

namespace {

void metropolis_sweeps(std::vector<Complex>& w, Rng& rng, double step,
                       int sweeps) {
  const int n = int(w.size());
  for (int s = 0; s < sweeps; ++s) {
    for (int j = 0; j < n; ++j) {
      const Complex prop =
          w[j] + Complex(step * rng.normal(), step * rng.normal());
      double dlog = -double(n) * (std::norm(prop) - std::norm(w[j]));
      bool collapsed = false;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double num = std::norm(prop - w[k]);
        if (num <= 0.0) {
          collapsed = true;
          break;
        }
        dlog += std::log(num / std::norm(w[j] - w[k]));
      }
      if (!collapsed && std::log(rng.u01()) < dlog) w[j] = prop;
    }
  }
}

}  // namespace

GinibreChain::GinibreChain(int n, const SamplerConfig& config)
    : rng_(config.seed), n_(n) {
  if (n < 1)
    throw Error(ErrorCode::InvariantViolation, "need at least one point");
  config.validate();
  step_ = config.proposal_scale / std::sqrt(double(n));
  spacing_ = config.mcmc_steps_per_sample;
  w_.resize(n);
  for (auto& z : w_) {
    const double r = std::sqrt(rng_.u01()), a = 2.0 * M_PI * rng_.u01();
    z = Complex(r * std::cos(a), r * std::sin(a));
  }
  metropolis_sweeps(w_, rng_, step_, config.mcmc_burn_in);
}

const std::vector<Complex>& GinibreChain::sample() {
  if (first_) {
    first_ = false;
    return w_;
  }
  metropolis_sweeps(w_, rng_, step_, spacing_);
  return w_;
}

std::vector<Complex> ginibre_sample(int n, const SamplerConfig& config) {
  GinibreChain chain(n, config);
  return chain.sample();
}

std::vector<Complex> uniform_domain_sample(const Domain& domain, int n,
                                           uint64_t seed) {
  if (n < 1)
    throw Error(ErrorCode::InvariantViolation, "need at least one point");
  const BoundingBox box = bounding_box(domain);
  Rng rng(seed);
  std::vector<Complex> out;
  out.reserve(n);
  while (int(out.size()) < n) {
    const Complex z{rng.uniform(box.re_min, box.re_max),
                    rng.uniform(box.im_min, box.im_max)};
    if (contains(domain, z)) out.push_back(z);
  }
  return out;
}

namespace {

// Region {xi in [xa,xb], eta in [lo(xi), hi(xi)]} carrying a constant area
// density under map(xi,eta) -> z.  Splitting eta at fixed fractions of
// (lo,hi) keeps every cell of a column at exactly equal mass.
struct FlatRegion {
  double xa, xb;
  std::function<double(double)> lo, hi;
  std::function<Complex(double, double)> map;
};

std::vector<Complex> flat_region_nodes(const FlatRegion& region, int n) {
  constexpr int kPanels = 20000;
  std::vector<double> cum(kPanels + 1, 0.0);
  const double h = (region.xb - region.xa) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double x = region.xa + (i + 0.5) * h;
    cum[i + 1] = cum[i] + std::max(0.0, region.hi(x) - region.lo(x)) * h;
  }
  const double total = cum[kPanels];
  auto invert = [&](double target) {
    target = std::clamp(target, 0.0, total);
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const int i = std::max<long>(1, it - cum.begin());
    const double seg = cum[i] - cum[i - 1];
    const double frac = seg > 0.0 ? (target - cum[i - 1]) / seg : 0.0;
    return region.xa + (i - 1 + frac) * h;
  };

  const int cols = std::max(1, int(std::lround(std::sqrt(double(n)))));
  const int base = n / cols, rem = n % cols;
  static const double kGx[4] = {-0.8611363115940526, -0.3399810435848563,
                                0.3399810435848563, 0.8611363115940526};
  static const double kGw[4] = {0.3478548451374538, 0.6521451548625461,
                                0.6521451548625461, 0.3478548451374538};
  std::vector<Complex> nodes;
  nodes.reserve(n);
  double mass_cursor = 0.0;
  for (int c = 0; c < cols; ++c) {
    const int rows = base + (c < rem ? 1 : 0);
    const double col_mass = total * double(rows) / double(n);
    const double xlo = invert(mass_cursor);
    const double xhi = invert(mass_cursor + col_mass);
    mass_cursor += col_mass;
    for (int r = 0; r < rows; ++r) {
      const double fa = double(r) / rows, fb = double(r + 1) / rows;
      Complex zsum{0.0, 0.0};
      double wsum = 0.0;
      for (int ip = 0; ip < 4; ++ip) {
        const double xi = xlo + (xhi - xlo) * (0.5 + 0.5 * kGx[ip]);
        const double wl = region.lo(xi);
        const double width = region.hi(xi) - wl;
        for (int iq = 0; iq < 4; ++iq) {
          const double q = 0.5 + 0.5 * kGx[iq];
          const double eta = wl + width * (fa + (fb - fa) * q);
          const double wgt = kGw[ip] * kGw[iq] * width;
          zsum += wgt * region.map(xi, eta);
          wsum += wgt;
        }
      }
      nodes.push_back(zsum / wsum);
    }
  }
  return nodes;
}

}  // namespace

std::vector<Complex> equal_area_points(const Domain& domain, int n) {
  if (n < 1)
    throw Error(ErrorCode::InvariantViolation, "need at least one point");

  if (const auto* d = std::get_if<DiskDomain>(&domain)) {
    d->validate();
    const double rho = d->radius;
    const Complex c = d->center;
    FlatRegion region{
        -rho, rho,
        [rho](double x) { return -std::sqrt(std::max(0.0, rho * rho - x * x)); },
        [rho](double x) { return std::sqrt(std::max(0.0, rho * rho - x * x)); },
        [c](double x, double y) { return c + Complex(x, y); }};
    return flat_region_nodes(region, n);
  }
  if (const auto* d = std::get_if<EllipseDomain>(&domain)) {
    d->validate();
    const double b = d->semi_minor(), rho = d->rho, y0 = d->center_ordinate();
    FlatRegion region{
        -b, b,
        [=](double x) {
          return y0 - rho * std::sqrt(std::max(0.0, 1.0 - x * x / (b * b)));
        },
        [=](double x) {
          return y0 + rho * std::sqrt(std::max(0.0, 1.0 - x * x / (b * b)));
        },
        [](double x, double y) { return Complex(x, y); }};
    return flat_region_nodes(region, n);
  }

  // m-fold domain |(z-d0)^m - d1| < rho: in coordinates (alpha, tau) with
  // z = d0 + sqrt(tau) e^{i alpha/m}, alpha in [0, 2 pi m), the area element
  // is d tau d alpha / (2m) -- flat.  Radial sections of the u-disk:
  // s^2 - 2 s Re(conj(d1) e^{i alpha}) + |d1|^2 = rho^2.
  const auto& d = std::get<QuadratureDomain>(domain);
  d.validate();
  const double m = double(d.m);
  auto section = [&](double alpha, double& slo, double& shi) {
    const double mu = std::real(std::conj(d.d1) * std::polar(1.0, alpha));
    const double disc = d.rho * d.rho - std::norm(d.d1) + mu * mu;
    if (disc <= 0.0) {
      slo = shi = 0.0;
      return;
    }
    const double root = std::sqrt(disc);
    slo = std::max(0.0, mu - root);
    shi = std::max(0.0, mu + root);
  };
  FlatRegion region{
      0.0, 2.0 * M_PI * m,
      [&, m](double alpha) {
        double slo, shi;
        section(std::fmod(alpha, 2.0 * M_PI), slo, shi);
        return std::pow(slo, 2.0 / m);
      },
      [&, m](double alpha) {
        double slo, shi;
        section(std::fmod(alpha, 2.0 * M_PI), slo, shi);
        return std::pow(shi, 2.0 / m);
      },
      [&, m](double alpha, double tau) {
        return d.d0 + std::sqrt(tau) * std::polar(1.0, alpha / m);
      }};
  return flat_region_nodes(region, n);
}

ScatteringData norming_constants(const std::vector<Complex>& points,
                                 double area, const DensitySpec& density,
                                 int n_scaling) {
  density.validate();
  if (n_scaling < 1)
    throw Error(ErrorCode::InvariantViolation, "non-positive scaling N");
  std::vector<SpectralPoint> pts(points.size());
  const double scale = area / (M_PI * double(n_scaling));
  for (std::size_t j = 0; j < points.size(); ++j)
    pts[j] = {points[j], scale * eval_density(density, points[j])};
  return ScatteringData(std::move(pts));
}

double kostlan_ks_distance(const std::vector<Complex>& points) {
  const int n = int(points.size());
  std::vector<double> m2(n);
  for (int i = 0; i < n; ++i) m2[i] = std::norm(points[i]);
  std::sort(m2.begin(), m2.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    double cdf = 0.0;
    for (int k = 1; k <= n; ++k)
      cdf += regularized_gamma_p(double(k), double(n) * m2[i]);
    cdf /= double(n);
    ks = std::max(ks, std::abs(cdf - double(i + 1) / n));
    ks = std::max(ks, std::abs(cdf - double(i) / n));
  }
  return ks;
}

}  // namespace solgas
