#include <doctest.h>

#include <cmath>
#include <limits>

#include "solgas/core.hpp"
#include "solgas/rng.hpp"

using namespace solgas;

namespace {

// naive power-sum oracle for the density evaluation; scale tracks the term
// magnitudes so the comparison tolerance respects cancellation
Complex density_naive(const DensitySpec& d, Complex z, double& scale) {
  const Complex u = z - d.expansion_center;
  Complex poly{0.0, 0.0};
  double mag = 0.0;
  for (std::size_t k = 0; k < d.coeffs.size(); ++k) {
    const Complex term = d.coeffs[k] * std::pow(u, double(k));
    poly += term;
    mag += std::abs(term);
  }
  const Complex conj_pow = std::pow(std::conj(u), double(d.p));
  scale = std::max(1.0, mag * std::abs(conj_pow));
  return conj_pow * poly;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("density examples") {
  DensitySpec one = DensitySpec::constant({1.0, 0.0});
  CHECK(eval_density(one, {3.0, -2.0}) == Complex(1.0, 0.0));

  // constant pi/rho^2 with rho = 0.1
  DensitySpec fig1 = DensitySpec::constant({100.0 * M_PI, 0.0});
  const Complex v = eval_density(fig1, {0.0, 1.0});
  CHECK(v.real() == doctest::Approx(100.0 * M_PI).epsilon(1e-15));
  CHECK(v.imag() == 0.0);
  CHECK(v.real() == doctest::Approx(314.159265358979).epsilon(1e-12));

  DensitySpec zbar;
  zbar.p = 1;
  zbar.coeffs = {{1.0, 0.0}};
  const Complex w = eval_density(zbar, {0.0, 1.0});
  CHECK(w.real() == doctest::Approx(0.0));
  CHECK(w.imag() == doctest::Approx(-1.0));
}

TEST_CASE("density matches the naive power sum") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    DensitySpec d;
    d.p = int(rng.u01() * 4);
    d.expansion_center = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const int deg = 1 + int(rng.u01() * 5);
    for (int k = 0; k < deg; ++k)
      d.coeffs.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    if (d.coeffs.back() == Complex(0, 0)) d.coeffs.back() = {1.0, 0.0};
    for (int pt = 0; pt < 10; ++pt) {
      const Complex z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const Complex a = eval_density(d, z);
      double scale = 1.0;
      const Complex b = density_naive(d, z, scale);
      CHECK(std::abs(a - b) <= 1e-14 * scale);
    }
  }
}

TEST_CASE("density validation") {
  DensitySpec empty;
  CHECK_THROWS_AS(empty.validate(), Error);
  DensitySpec zero_lead;
  zero_lead.coeffs = {{1.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(zero_lead.validate(), Error);
}

TEST_CASE("scattering data invariants") {
  CHECK_NOTHROW(ScatteringData(std::vector<SpectralPoint>{{{0.0, 1.0}, {1.0, 0.0}}}));

  // conjugate (lower half-plane) poles are implicit, not stored
  CHECK_THROWS_WITH_AS(ScatteringData(std::vector<SpectralPoint>{{{0.0, -1.0}, {1.0, 0.0}}}),
                       doctest::Contains("upper half-plane"), Error);
  CHECK_THROWS_AS(ScatteringData(std::vector<SpectralPoint>{{{0.0, 0.0}, {1.0, 0.0}}}), Error);

  // pairwise distance above 1e-12 required
  CHECK_THROWS_WITH_AS(
      ScatteringData(
          {{{0.0, 1.0}, {1.0, 0.0}}, {{0.0, 1.0 + 1e-13}, {1.0, 0.0}}}),
      doctest::Contains("coincident"), Error);
  CHECK_NOTHROW(ScatteringData(
      {{{0.0, 1.0}, {1.0, 0.0}}, {{0.0, 1.0 + 1e-10}, {1.0, 0.0}}}));

  // size cap
  std::vector<SpectralPoint> many(3, {{0.0, 1.0}, {1.0, 0.0}});
  for (std::size_t i = 0; i < many.size(); ++i)
    many[i].z += Complex(0.1 * double(i), 0);
  CHECK_THROWS_AS(ScatteringData(many, 2), Error);

  CHECK_THROWS_AS(ScatteringData(std::vector<SpectralPoint>{}), Error);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ScatteringData(std::vector<SpectralPoint>{{{0.0, inf}, {1.0, 0.0}}}), Error);
}

TEST_CASE("grid validation") {
  Grid g = Grid::uniform(0.0, 1.0, 5, 0.0, 0.5, 3);
  CHECK(g.x_values.size() == 5);
  CHECK(g.t_values.size() == 3);
  CHECK(g.x_values[4] == doctest::Approx(1.0));

  Grid bad;
  bad.x_values = {0.0, 0.0};
  bad.t_values = {0.0};
  CHECK_THROWS_AS(bad.validate(), Error);
  Grid empty;
  CHECK_THROWS_AS(empty.validate(), Error);
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("0.0+1.0i") == Complex(0.0, 1.0));
  CHECK(parse_complex("1.5-2.25i") == Complex(1.5, -2.25));
  CHECK(parse_complex("3.5") == Complex(3.5, 0.0));
  CHECK(parse_complex("-2i") == Complex(0.0, -2.0));
  CHECK(parse_complex("1e-3+2.5e-4i") == Complex(1e-3, 2.5e-4));
  CHECK_THROWS_AS(parse_complex("nonsense"), Error);
  CHECK_THROWS_AS(parse_complex(""), Error);

  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Complex z{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
    CHECK(parse_complex(format_complex(z)) == z);
  }
}

}  // TEST_SUITE
