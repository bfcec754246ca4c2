#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "solgas/sampling.hpp"
#include "solgas/stats.hpp"

using namespace solgas;

namespace {

std::vector<double> sorted_radii(const std::vector<Complex>& pts) {
  std::vector<double> r(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) r[i] = std::abs(pts[i]);
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<double> sorted_pair_distances(const std::vector<Complex>& pts) {
  std::vector<double> d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d.push_back(std::abs(pts[i] - pts[j]));
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("fekete small configurations") {
  const FeketeResult one = fekete_points(1, 1e-10, 100, 3);
  REQUIRE(one.points.size() == 1);
  CHECK(std::abs(one.points[0]) < 1e-12);
  CHECK(one.converged);

  // two points: E(r) = -2 ln(2r) + 4 r^2 minimized at r = 1/2
  const FeketeResult two = fekete_points(2, 1e-7, 50000, 1);
  REQUIRE(two.points.size() == 2);
  for (const Complex& w : two.points)
    CHECK(std::abs(w) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(two.points[0] + two.points[1]) < 1e-6);  // antipodal
  CHECK(two.converged);
  CHECK(two.gradient_norm <= 1e-7 * 2);

  // three points: E(r) = -6 ln(sqrt(3) r) + 9 r^2 minimized at r = 1/sqrt(3)
  const FeketeResult three = fekete_points(3, 1e-7, 50000, 1);
  for (const Complex& w : three.points)
    CHECK(std::abs(w) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  // equilateral: all pairwise distances equal
  const auto d = sorted_pair_distances(three.points);
  CHECK(d.back() - d.front() < 1e-6);
}

TEST_CASE("fekete is rotation-invariant across seeds for N <= 3") {
  for (int n : {2, 3}) {
    const FeketeResult a = fekete_points(n, 1e-7, 50000, 1);
    const FeketeResult b = fekete_points(n, 1e-7, 50000, 7);
    const FeketeResult c = fekete_points(n, 1e-7, 50000, 42);
    const auto ra = sorted_radii(a.points);
    for (const FeketeResult* r : {&b, &c}) {
      const auto rr = sorted_radii(r->points);
      for (std::size_t i = 0; i < ra.size(); ++i)
        CHECK(std::fabs(ra[i] - rr[i]) < 1e-6);
      const auto da = sorted_pair_distances(a.points);
      const auto dr = sorted_pair_distances(r->points);
      for (std::size_t i = 0; i < da.size(); ++i)
        CHECK(std::fabs(da[i] - dr[i]) < 1e-6);
    }
  }
}

TEST_CASE("fekete energy decreases and reports consistently") {
  const FeketeResult capped = fekete_points(40, 1e-14, 40, 5);
  CHECK_FALSE(capped.converged);  // cannot converge that far in 40 steps
  const FeketeResult longer = fekete_points(40, 1e-14, 4000, 5);
  CHECK(longer.energy <= capped.energy);
  CHECK(fekete_energy(longer.points) == doctest::Approx(longer.energy));
  CHECK(longer.gradient_norm < capped.gradient_norm);
}

TEST_CASE("fekete stationarity moment identity") {
  // at any critical point, sum_j |w_j|^2 = (N-1)/2 exactly
  const int n = 30;
  const FeketeResult r = fekete_points(n, 3e-8, 80000, 9);
  REQUIRE(r.converged);
  double s = 0.0;
  for (const Complex& w : r.points) s += std::norm(w);
  CHECK(s == doctest::Approx((n - 1) / 2.0).epsilon(1e-6));
  // configuration stays inside the closed unit disk
  for (const Complex& w : r.points) CHECK(std::abs(w) <= 1.0 + 1e-9);
}

TEST_CASE("fekete threading is deterministic") {
  const FeketeResult a = fekete_points(48, 1e-6, 2000, 123, 1);
  const FeketeResult b = fekete_points(48, 1e-6, 2000, 123, 2);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    CHECK(a.points[i] == b.points[i]);  // bitwise
  CHECK(a.energy == b.energy);
}

TEST_CASE("map to domain") {
  const DiskDomain disk{{0, 1}, 0.1};
  const auto mapped = map_to_domain({{0, 0}, {1, 0}, {0, -0.5}}, disk);
  CHECK(std::abs(mapped[0] - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(mapped[1] - Complex(0.1, 1)) < 1e-15);
  CHECK(contains(disk, mapped[2]));

  CHECK_THROWS_AS(map_to_domain({{1.1, 0}}, disk), Error);
  // the unchecked transport accepts the same point
  CHECK(std::abs(scale_to_disk({{1.1, 0}}, disk)[0] - Complex(0.11, 1)) <
        1e-15);
}

TEST_CASE("ginibre single particle against a rejection oracle") {
  // N = 1 law: density prop. to exp(-|w|^2), so |w|^2 ~ Exp(1), mean 1
  SamplerConfig cfg;
  cfg.mcmc_burn_in = 60;
  double mcmc_mean = 0.0;
  const int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    cfg.seed = 100 + i;
    mcmc_mean += std::norm(ginibre_sample(1, cfg)[0]);
  }
  mcmc_mean /= draws;

  Rng rng(4242);
  double oracle_mean = 0.0;
  int kept = 0;
  while (kept < draws) {
    const Complex w{rng.uniform(-4, 4), rng.uniform(-4, 4)};
    if (rng.u01() < std::exp(-std::norm(w))) {
      oracle_mean += std::norm(w);
      ++kept;
    }
  }
  oracle_mean /= draws;
  // both estimate E|w|^2 = 1 with se ~ 1/sqrt(draws)
  CHECK(std::fabs(mcmc_mean - 1.0) < 0.08);
  CHECK(std::fabs(oracle_mean - 1.0) < 0.08);
  CHECK(std::fabs(mcmc_mean - oracle_mean) < 0.1);
}

TEST_CASE("ginibre fills the unit disk (circular law)") {
  SamplerConfig cfg;
  cfg.seed = 77;
  cfg.mcmc_burn_in = 150;
  const auto w = ginibre_sample(400, cfg);
  int inside = 0;
  for (const Complex& z : w)
    if (std::abs(z) <= 0.9) ++inside;
  const double frac = double(inside) / 400.0;
  CHECK(frac > 0.76);
  CHECK(frac < 0.86);
}

TEST_CASE("ginibre moduli match the exact gamma law (Kostlan)") {
  SamplerConfig cfg;
  cfg.seed = 31;
  cfg.mcmc_burn_in = 150;
  cfg.mcmc_steps_per_sample = 40;
  GinibreChain chain(200, cfg);
  double ks_sum = 0.0;
  for (int d = 0; d < 20; ++d) ks_sum += kostlan_ks_distance(chain.sample());
  CHECK(ks_sum / 20.0 < 0.1);
}

TEST_CASE("ginibre mean |w|^2 concentrates at 1/2") {
  SamplerConfig cfg;
  cfg.seed = 555;
  cfg.mcmc_burn_in = 120;
  cfg.mcmc_steps_per_sample = 30;
  const int n = 100, draws = 50;
  GinibreChain chain(n, cfg);
  std::vector<double> means(draws);
  for (int d = 0; d < draws; ++d) {
    const auto& w = chain.sample();
    double s = 0.0;
    for (const Complex& z : w) s += std::norm(z);
    means[d] = s / n;
  }
  double mean = 0.0;
  for (double v : means) mean += v;
  mean /= draws;
  double var = 0.0;
  for (double v : means) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (draws - 1)) / std::sqrt(double(draws));
  CHECK(std::fabs(mean - 0.5) <= std::max(3.0 * se, 0.01));
}

TEST_CASE("uniform rejection sampling stays inside and has disk moments") {
  const DiskDomain disk{{0, 1}, 0.1};
  const Domain dom(disk);
  const int n = 2000;
  const auto pts = uniform_domain_sample(dom, n, 64);
  REQUIRE(int(pts.size()) == n);
  double mre = 0.0, mim = 0.0, m2 = 0.0;
  int octant[8] = {0};
  for (const Complex& z : pts) {
    CHECK(contains(dom, z));
    const Complex w = (z - disk.center) / disk.radius;
    mre += w.real();
    mim += w.imag();
    m2 += std::norm(w);
    const double ang = std::atan2(w.imag(), w.real());
    int sector = int((ang + M_PI) / (2 * M_PI) * 8);
    octant[std::clamp(sector, 0, 7)]++;
  }
  mre /= n;
  mim /= n;
  m2 /= n;
  const double se = 0.5 / std::sqrt(double(n));
  CHECK(std::fabs(mre) < 4 * se);
  CHECK(std::fabs(mim) < 4 * se);
  CHECK(std::fabs(m2 - 0.5) < 4 * se);

  // chi^2 over 8 sectors at the 1% level (7 dof critical value 18.475)
  double chi2 = 0.0;
  for (int s = 0; s < 8; ++s) {
    const double expect = n / 8.0;
    chi2 += (octant[s] - expect) * (octant[s] - expect) / expect;
  }
  CHECK(chi2 < 18.475);

  // other domain kinds
  const Domain qd(QuadratureDomain{{0, 1}, {4e-4, 0}, 1e-3, 2});
  for (const Complex& z : uniform_domain_sample(qd, 100, 3))
    CHECK(contains(qd, z));
  const Domain ell(EllipseDomain{0.5, 1.5, 0.6});
  for (const Complex& z : uniform_domain_sample(ell, 100, 3))
    CHECK(contains(ell, z));
}

TEST_CASE("equal-area nodes: determinism, containment, first moments") {
  const Domain ell(EllipseDomain{0.5, 1.5, 0.6});
  const auto a = equal_area_points(ell, 157);
  const auto b = equal_area_points(ell, 157);
  REQUIRE(a.size() == 157);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (const Complex& z : a) CHECK(contains(ell, z));

  // centroid of the nodes approximates the domain centroid
  Complex mean{0, 0};
  for (const Complex& z : a) mean += z;
  mean /= double(a.size());
  CHECK(std::abs(mean - Complex(0, 1.0)) < 2e-3);

  const Domain disk(DiskDomain{{0, 1}, 0.1});
  const auto dpts = equal_area_points(disk, 200);
  for (const Complex& z : dpts) CHECK(contains(disk, z));
  Complex dmean{0, 0};
  double m2 = 0.0;
  for (const Complex& z : dpts) {
    dmean += z;
    m2 += std::norm((z - Complex(0, 1)) / 0.1);
  }
  dmean /= 200.0;
  m2 /= 200.0;
  CHECK(std::abs(dmean - Complex(0, 1)) < 2e-3);
  CHECK(std::fabs(m2 - 0.5) < 5e-3);  // uniform-disk second moment

  const Domain qd(QuadratureDomain{{0, 1}, {4e-4, 0}, 1e-3, 2});
  const auto qpts = equal_area_points(qd, 150);
  REQUIRE(qpts.size() == 150);
  for (const Complex& z : qpts) CHECK(contains(qd, z));
}

TEST_CASE("norming constants") {
  // Disk(i, 0.1) with beta = pi/rho^2: every c_j = pi/N
  const DiskDomain disk{{0, 1}, 0.1};
  const DensitySpec beta = DensitySpec::constant({100.0 * M_PI, 0});
  const auto pts = uniform_domain_sample(Domain(disk), 40, 8);
  const ScatteringData data =
      norming_constants(pts, M_PI * 0.01, beta, 40);
  for (const auto& p : data.points())
    CHECK(std::abs(p.c - Complex(M_PI / 40.0, 0)) < 1e-14);

  // O(1/N) bound: |c_j| <= A max|beta| / (pi N)
  for (const auto& p : data.points())
    CHECK(std::abs(p.c) <= M_PI * 0.01 * 100.0 * M_PI / (M_PI * 40.0) + 1e-12);

  // a density vanishing at a sample point yields c_j = 0, which is allowed
  DensitySpec vanishing;
  vanishing.p = 1;
  vanishing.coeffs = {{1.0, 0.0}};
  vanishing.expansion_center = pts[0];
  const ScatteringData with_zero =
      norming_constants(pts, M_PI * 0.01, vanishing, 40);
  CHECK(std::abs(with_zero[0].c) == 0.0);

  // sum c_j -> (1/pi) iint beta dA for smooth densities (mean value: the
  // integral over the disk of an analytic r is A r(center))
  DensitySpec smooth;
  smooth.p = 0;
  smooth.coeffs = {{2.0, 0.0}, {0.5, 0.25}};
  smooth.expansion_center = disk.center;
  const FeketeResult fk = fekete_points(200, 1e-6, 30000, 21);
  const ScatteringData gas = norming_constants(
      map_to_domain(fk.points, disk), M_PI * 0.01, smooth, 200);
  Complex sum{0, 0};
  for (const auto& p : gas.points()) sum += p.c;
  const Complex target = M_PI * 0.01 * 2.0 / M_PI;  // A r(center) / pi
  CHECK(std::abs(sum - target) < 2e-5);
}

}  // TEST_SUITE
