#pragma once

// Spectral-support geometry and the closed-form shielding predictions.
//
// Disk            D_rho(center),   Schwarz singularity: simple pole at center.
// Quadrature      |(z-d0)^m - d1| < rho, m-fold symmetric about d0; for m = n
//                 the area gas with beta = n conj(z-d0)^{n-1} r(z) collapses to
//                 the n poles of (z-d0)^n = d1 with norming constants
//                 c_j = rho^2 r(lambda_j) / prod_{k!=j}(lambda_j - lambda_k).
// Ellipse         foci i*alpha1, i*alpha2, distance sum 2*rho; the area gas
//                 with analytic beta collapses onto the focal segment with
//                 line density  r(w) dS(w) dw / (2 pi i),  dS = S_+ - S_-.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "solgas/core.hpp"

namespace solgas {

struct DiskDomain {
  Complex center;   // lambda_0
  double radius;    // rho > 0

  void validate() const;
};

struct QuadratureDomain {
  Complex d0;
  Complex d1;
  double rho;
  int m;

  void validate() const;
};

struct EllipseDomain {
  double alpha1;  // lower focal ordinate
  double alpha2;  // upper focal ordinate, alpha2 > alpha1 > 0
  double rho;     // half distance-sum, rho > (alpha2-alpha1)/2

  double focal_half_distance() const { return 0.5 * (alpha2 - alpha1); }
  double center_ordinate() const { return 0.5 * (alpha1 + alpha2); }
  double semi_minor() const;
  void validate() const;
};

using Domain = std::variant<DiskDomain, QuadratureDomain, EllipseDomain>;

bool contains(const Domain& domain, Complex z);
bool contains(const DiskDomain& d, Complex z);
bool contains(const QuadratureDomain& d, Complex z);
bool contains(const EllipseDomain& d, Complex z);

// Axis-aligned box certain to contain the domain, used by rejection samplers
// and the Monte-Carlo area estimate.
struct BoundingBox {
  double re_min, re_max, im_min, im_max;
};
BoundingBox bounding_box(const Domain& domain);

struct AreaEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for closed forms
};

// Disk and ellipse areas are exact; quadrature domains with m >= 2 are
// estimated by seeded Monte-Carlo membership integration (1e6 points).
AreaEstimate area(const Domain& domain, uint64_t seed = 1);

// Section-integral area of the m-fold domain in its measure-flattening
// coordinates (deterministic, no sampling); used by the equal-area gas.
double quadrature_area_flat(const QuadratureDomain& d);

// n-soliton data predicted for the m = n quadrature domain.  The density must
// be beta = n conj(z-d0)^{n-1} r(z), i.e. p = n-1 with expansion center d0;
// r is recovered as poly(z)/n.
ScatteringData quadrature_prediction(const QuadratureDomain& domain,
                                     const DensitySpec& density);

// Schwarz function of the ellipse off the focal segment, branch R(z) ~ z at
// infinity with cut on [i alpha1, i alpha2].
Complex ellipse_schwarz(const EllipseDomain& d, Complex z);
Complex ellipse_sqrt(const EllipseDomain& d, Complex z);  // R(z)

// Jump of the Schwarz function across the focal segment at z = i y,
// dS(iy) = (4 rho / c^2) sqrt(rho^2 - c^2) R_+(iy), with the boundary value
// taken from the Re z > 0 side (positive on the open segment).
Complex ellipse_schwarz_jump(const EllipseDomain& d, double y);

// Midpoint-rule segment gas on [i alpha1, i alpha2]:
//   w_j = i(alpha1 + (j+1/2) delta),  c_j = r(w_j) dS(w_j) delta / (2 pi).
ScatteringData segment_discretization(const EllipseDomain& d,
                                      const DensitySpec& density, int n);

// G(z) = sum_j c_j / (z - z_j); caller keeps z outside the hull of the data.
Complex jump_field(const ScatteringData& data, Complex z);

}  // namespace solgas
