#include "solgas/domains.hpp"

#include <algorithm>
#include <cmath>

#include "solgas/rng.hpp"

namespace solgas {

void DiskDomain::validate() const {
  if (!(radius > 0.0))
    throw Error(ErrorCode::InvariantViolation, "disk radius must be positive");
  if (!(center.imag() - radius > 0.0))
    throw Error(ErrorCode::InvariantViolation,
                "disk not strictly inside the upper half-plane");
}

void QuadratureDomain::validate() const {
  if (m < 1)
    throw Error(ErrorCode::InvariantViolation, "quadrature fold m must be >= 1");
  if (!(rho > 0.0))
    throw Error(ErrorCode::InvariantViolation, "quadrature rho must be positive");
  // boundary: (z-d0)^m = d1 + rho e^{i phi}, all m branch rotations
  constexpr int kSamples = 720;
  for (int k = 0; k < m; ++k) {
    const Complex rot = std::polar(1.0, 2.0 * M_PI * k / m);
    for (int i = 0; i < kSamples; ++i) {
      const Complex u = d1 + std::polar(rho, 2.0 * M_PI * i / kSamples);
      const Complex z = d0 + std::pow(u, 1.0 / m) * rot;
      if (!(z.imag() > 0.0))
        throw Error(ErrorCode::InvariantViolation,
                    "quadrature domain touches the real axis near " +
                        format_complex(z));
    }
  }
}

double EllipseDomain::semi_minor() const {
  const double c = focal_half_distance();
  return std::sqrt(rho * rho - c * c);
}

void EllipseDomain::validate() const {
  if (!(alpha1 > 0.0 && alpha2 > alpha1))
    throw Error(ErrorCode::InvariantViolation,
                "ellipse requires 0 < alpha1 < alpha2");
  if (!(rho > focal_half_distance()))
    throw Error(ErrorCode::InvariantViolation, "degenerate ellipse: rho <= c");
  if (!(center_ordinate() - rho > 0.0))
    throw Error(ErrorCode::InvariantViolation,
                "ellipse not strictly inside the upper half-plane");
}

bool contains(const DiskDomain& d, Complex z) {
  return std::abs(z - d.center) < d.radius;
}

bool contains(const QuadratureDomain& d, Complex z) {
  Complex w{1.0, 0.0};
  const Complex u = z - d.d0;
  for (int i = 0; i < d.m; ++i) w *= u;
  return std::abs(w - d.d1) < d.rho;
}

bool contains(const EllipseDomain& d, Complex z) {
  const Complex f1{0.0, d.alpha1}, f2{0.0, d.alpha2};
  return std::abs(z - f1) + std::abs(z - f2) < 2.0 * d.rho;
}

bool contains(const Domain& domain, Complex z) {
  return std::visit([&](const auto& d) { return contains(d, z); }, domain);
}

BoundingBox bounding_box(const Domain& domain) {
  if (const auto* d = std::get_if<DiskDomain>(&domain)) {
    return {d->center.real() - d->radius, d->center.real() + d->radius,
            d->center.imag() - d->radius, d->center.imag() + d->radius};
  }
  if (const auto* d = std::get_if<QuadratureDomain>(&domain)) {
    // |(z-d0)^m| <= |d1| + rho
    const double r = std::pow(std::abs(d->d1) + d->rho, 1.0 / d->m);
    return {d->d0.real() - r, d->d0.real() + r, d->d0.imag() - r,
            d->d0.imag() + r};
  }
  const auto& d = std::get<EllipseDomain>(domain);
  const double b = d.semi_minor(), y0 = d.center_ordinate();
  return {-b, b, y0 - d.rho, y0 + d.rho};
}

AreaEstimate area(const Domain& domain, uint64_t seed) {
  if (const auto* d = std::get_if<DiskDomain>(&domain)) {
    d->validate();
    return {M_PI * d->radius * d->radius, 0.0};
  }
  if (const auto* d = std::get_if<EllipseDomain>(&domain)) {
    d->validate();
    return {M_PI * d->rho * d->semi_minor(), 0.0};
  }
  const auto& d = std::get<QuadratureDomain>(domain);
  d.validate();
  if (d.m == 1) {
    // |z - (d0+d1)| < rho, a disk
    return {M_PI * d.rho * d.rho, 0.0};
  }
  const BoundingBox box = bounding_box(domain);
  const double box_area =
      (box.re_max - box.re_min) * (box.im_max - box.im_min);
  constexpr std::size_t kPoints = 1000000;
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < kPoints; ++i) {
    const Complex z{rng.uniform(box.re_min, box.re_max),
                    rng.uniform(box.im_min, box.im_max)};
    if (contains(d, z)) ++hits;
  }
  const double p = double(hits) / double(kPoints);
  return {box_area * p, box_area * std::sqrt(p * (1.0 - p) / double(kPoints))};
}

double quadrature_area_flat(const QuadratureDomain& d) {
  d.validate();
  // area = (1/(2m)) int (s_+^{2/m} - s_-^{2/m}) d alpha over [0, 2 pi m),
  // with s_± the radial sections of the u-disk |u - d1| = rho
  const double m = double(d.m);
  constexpr int kPanels = 200000;
  double sum = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double alpha = 2.0 * M_PI * (i + 0.5) / kPanels;
    const double mu = std::real(std::conj(d.d1) * std::polar(1.0, alpha));
    const double disc = d.rho * d.rho - std::norm(d.d1) + mu * mu;
    if (disc <= 0.0) continue;
    const double root = std::sqrt(disc);
    const double shi = std::max(0.0, mu + root);
    const double slo = std::max(0.0, mu - root);
    sum += std::pow(shi, 2.0 / m) - std::pow(slo, 2.0 / m);
  }
  // integrand is 2 pi periodic; the m-fold alpha range contributes m copies
  return sum * (2.0 * M_PI / kPanels) * m / (2.0 * m);
}

ScatteringData quadrature_prediction(const QuadratureDomain& domain,
                                     const DensitySpec& density) {
  domain.validate();
  density.validate();
  const int n = domain.m;
  if (density.p != n - 1)
    throw Error(ErrorCode::InvariantViolation,
                "density power must be m-1 for the quadrature prediction");
  if (std::abs(density.expansion_center - domain.d0) > 1e-12)
    throw Error(ErrorCode::InvariantViolation,
                "density expansion center must coincide with d0");
  if (n >= 2 && std::abs(domain.d1) == 0.0)
    throw Error(ErrorCode::RootsNotDistinct,
                "d1 = 0 gives a multiple root of (z-d0)^n = d1");

  // analytic part: beta = n conj(z-d0)^{n-1} r(z)  =>  r(z) = poly(z)/n
  auto r_of = [&](Complex z) {
    const Complex u = z - density.expansion_center;
    Complex poly = density.coeffs.back();
    for (std::size_t k = density.coeffs.size() - 1; k-- > 0;)
      poly = poly * u + density.coeffs[k];
    return poly / double(n);
  };

  std::vector<Complex> roots(n);
  const Complex principal = std::pow(domain.d1, 1.0 / n);
  for (int j = 0; j < n; ++j)
    roots[j] = domain.d0 + principal * std::polar(1.0, 2.0 * M_PI * j / n);

  std::vector<SpectralPoint> pts(n);
  const double rho2 = domain.rho * domain.rho;
  for (int j = 0; j < n; ++j) {
    if (!(roots[j].imag() > 0.0))
      throw Error(ErrorCode::RootsOutsideUpperHalfPlane,
                  "predicted pole outside the upper half-plane: " +
                      format_complex(roots[j]));
    Complex prod{1.0, 0.0};
    for (int k = 0; k < n; ++k)
      if (k != j) prod *= roots[j] - roots[k];
    pts[j] = {roots[j], rho2 * r_of(roots[j]) / prod};
  }
  return ScatteringData(std::move(pts));
}

Complex ellipse_sqrt(const EllipseDomain& d, Complex z) {
  // R(z) = (z - i y0) sqrt(1 + c^2/(z - i y0)^2); the principal square root
  // puts the cut exactly on the focal segment and gives R ~ z at infinity.
  const Complex u = z - Complex(0.0, d.center_ordinate());
  const double c = d.focal_half_distance();
  return u * std::sqrt(Complex(1.0, 0.0) + (c * c) / (u * u));
}

Complex ellipse_schwarz(const EllipseDomain& d, Complex z) {
  const double c = d.focal_half_distance();
  const double c2 = c * c;
  const double rho = d.rho;
  const Complex iy0{0.0, d.center_ordinate()};
  return (1.0 - 2.0 * rho * rho / c2) * (z - iy0) +
         (2.0 * rho / c2) * d.semi_minor() * ellipse_sqrt(d, z) - iy0;
}

Complex ellipse_schwarz_jump(const EllipseDomain& d, double y) {
  if (!(y > d.alpha1 && y < d.alpha2))
    throw Error(ErrorCode::OutOfSegment,
                "ordinate outside the open focal segment");
  const double c = d.focal_half_distance();
  // R_+(iy) from the Re z > 0 side is +sqrt((y-alpha1)(alpha2-y)); the sign
  // is pinned by the area-gas equivalence regression test.
  const double rplus = std::sqrt((y - d.alpha1) * (d.alpha2 - y));
  const double factor = 4.0 * d.rho * d.semi_minor() / (c * c);
  return Complex(factor * rplus, 0.0);
}

ScatteringData segment_discretization(const EllipseDomain& d,
                                      const DensitySpec& density, int n) {
  d.validate();
  density.validate();
  if (density.p != 0)
    throw Error(ErrorCode::InvariantViolation,
                "segment gas requires an analytic density (p = 0)");
  if (n < 2)
    throw Error(ErrorCode::InvariantViolation, "need at least two segment points");
  const double delta = (d.alpha2 - d.alpha1) / n;
  std::vector<SpectralPoint> pts(n);
  for (int j = 0; j < n; ++j) {
    const double y = d.alpha1 + (j + 0.5) * delta;
    const Complex w{0.0, y};
    // c_j = r(w) dS(w) (i delta) / (2 pi i)
    pts[j] = {w, eval_density(density, w) * ellipse_schwarz_jump(d, y) * delta /
                     (2.0 * M_PI)};
  }
  return ScatteringData(std::move(pts));
}

Complex jump_field(const ScatteringData& data, Complex z) {
  Complex sum{0.0, 0.0};
  for (const auto& p : data.points()) {
    const Complex dz = z - p.z;
    if (std::abs(dz) <= 1e-6)
      throw Error(ErrorCode::PoleTooClose,
                  "evaluation point within 1e-6 of pole " + format_complex(p.z));
    sum += p.c / dz;
  }
  return sum;
}

}  // namespace solgas
