#include <doctest.h>

#include <cmath>

#include "solgas/core.hpp"
#include "solgas/rng.hpp"
#include "solgas/stats.hpp"

using namespace solgas;

TEST_SUITE("stats") {

TEST_CASE("gaussian fit examples") {
  const GaussianFit flat = gaussian_fit({1.0, 1.0, 1.0});
  CHECK(flat.mean == 1.0);
  CHECK(flat.sigma == 0.0);
  CHECK(flat.degenerate);

  const GaussianFit two = gaussian_fit({0.0, 2.0});
  CHECK(two.mean == doctest::Approx(1.0));
  CHECK(two.sigma == doctest::Approx(1.0));
  CHECK_FALSE(two.degenerate);

  CHECK_THROWS_AS(gaussian_fit({1.0}), Error);

  Rng rng(77);
  std::vector<double> draws(100000);
  for (double& v : draws) v = rng.normal();
  const GaussianFit fit = gaussian_fit(draws);
  CHECK(std::fabs(fit.mean) < 0.01);
  CHECK(std::fabs(fit.sigma - 1.0) < 0.01);
}

TEST_CASE("gaussian fit equivariance") {
  Rng rng(3);
  std::vector<double> base(200);
  for (double& v : base) v = rng.normal();
  const GaussianFit f0 = gaussian_fit(base);
  std::vector<double> moved(base);
  for (double& v : moved) v = 3.0 * v + 10.0;
  const GaussianFit f1 = gaussian_fit(moved);
  CHECK(f1.mean == doctest::Approx(3.0 * f0.mean + 10.0).epsilon(1e-12));
  CHECK(f1.sigma == doctest::Approx(3.0 * f0.sigma).epsilon(1e-12));
}

TEST_CASE("normality test calibration and power") {
  int normal_pass = 0, uniform_reject = 0;
  const int reps = 100, n = 500;
  for (int r = 0; r < reps; ++r) {
    Rng rng(1000 + r);
    std::vector<double> gauss(n), unif(n);
    for (int i = 0; i < n; ++i) {
      gauss[i] = rng.normal();
      unif[i] = rng.u01();
    }
    if (normality_test(gauss) > 0.01) ++normal_pass;
    if (normality_test(unif) < 0.01) ++uniform_reject;
  }
  CHECK(normal_pass >= 95);
  CHECK(uniform_reject >= 95);
}

TEST_CASE("normality test edge cases") {
  std::vector<double> constant(50, 2.0);
  CHECK_THROWS_AS(normality_test(constant), Error);
  std::vector<double> few(10, 0.0);
  CHECK_THROWS_AS(normality_test(few), Error);
}

TEST_CASE("power law examples") {
  std::vector<double> ns = {50, 100, 200, 400};
  std::vector<double> exact(ns.size()), half(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    exact[i] = 1.0 / ns[i];
    half[i] = 0.129 / std::sqrt(ns[i]);
  }
  const PowerLawFit f1 = power_law_fit(ns, exact);
  CHECK(f1.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f1.constant == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f1.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const PowerLawFit f2 = power_law_fit(ns, half);
  CHECK(f2.alpha == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f2.constant == doctest::Approx(0.129).epsilon(1e-10));

  CHECK_THROWS_AS(power_law_fit({1, 2}, {1, 2}), Error);
  CHECK_THROWS_AS(power_law_fit(ns, {1, 1, 0, 1}), Error);
}

TEST_CASE("power law with multiplicative noise") {
  Rng rng(21);
  std::vector<double> ns, sig;
  for (double n : {50, 100, 200, 400, 800}) {
    ns.push_back(n);
    sig.push_back(0.3 * std::pow(n, -0.85) * (1.0 + 0.05 * (2 * rng.u01() - 1)));
  }
  const PowerLawFit fit = power_law_fit(ns, sig);
  CHECK(std::fabs(fit.alpha - 0.85) < 0.1);
}

TEST_CASE("power law scale equivariance") {
  std::vector<double> ns = {10, 40, 90, 350};
  std::vector<double> sig = {0.9, 0.31, 0.17, 0.05};
  const PowerLawFit base = power_law_fit(ns, sig);
  std::vector<double> scaled(sig);
  for (double& s : scaled) s *= 7.25;
  const PowerLawFit big = power_law_fit(ns, scaled);
  CHECK(big.alpha == doctest::Approx(base.alpha).epsilon(1e-12));
  CHECK(big.constant == doctest::Approx(7.25 * base.constant).epsilon(1e-12));
  CHECK(big.r_squared == doctest::Approx(base.r_squared).epsilon(1e-12));
}

TEST_CASE("bootstrap sigma standard error is sane") {
  Rng rng(11);
  std::vector<double> re(200), im(200);
  for (int i = 0; i < 200; ++i) {
    re[i] = 0.05 * rng.normal();
    im[i] = 0.05 * rng.normal();
  }
  const double se = bootstrap_sigma_stderr(re, im, 500, 17);
  // scatter ~ 0.0707, se of the rms over 200 samples ~ sigma/sqrt(2n)
  CHECK(se > 0.001);
  CHECK(se < 0.01);
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(regularized_gamma_p(1.0, 0.0) == 0.0);
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0})
    CHECK(regularized_gamma_p(1.0, x) ==
          doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  CHECK(regularized_gamma_p(5.0, 1e4) == doctest::Approx(1.0));
  // monotone in x
  double prev = 0.0;
  for (double x = 0.5; x < 40.0; x += 0.5) {
    const double v = regularized_gamma_p(7.0, x);
    CHECK(v >= prev);
    prev = v;
  }
}

}  // TEST_SUITE
