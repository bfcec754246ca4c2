#pragma once

// Shared value types for the soliton-gas laboratory: complex scalars,
// spectral data (pole / norming-constant pairs), evaluation grids and the
// restricted density family  beta(z, zbar) = conj(z - z0)^p * r(z)  with
// r a polynomial about z0.  All types are immutable value types.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace solgas {

using Complex = std::complex<double>;

enum class ErrorCode {
  InvariantViolation,
  SingularSystem,
  PoleTooClose,
  ZeroConstant,
  GridTooSmall,
  NonUniformGrid,
  RootsNotDistinct,
  RootsOutsideUpperHalfPlane,
  OutOfSegment,
  PointOutsideReferenceDisk,
  TooFewSamples,
  Degenerate,
  NonPositiveInput,
  PeakNotFound,
  TooFewOscillations,
  ConfigError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

struct SpectralPoint {
  Complex z;  // pole, Im z > 0
  Complex c;  // norming constant
};

// Discrete spectral input {(z_j, c_j)}.  Conjugate poles are implicit.
class ScatteringData {
public:
  static constexpr std::size_t kDefaultCap = 2000;
  static constexpr double kMinPoleDistance = 1e-12;

  explicit ScatteringData(std::vector<SpectralPoint> points,
                          std::size_t cap = kDefaultCap);

  const std::vector<SpectralPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const SpectralPoint& operator[](std::size_t j) const { return points_[j]; }

private:
  std::vector<SpectralPoint> points_;
};

struct EvaluationPoint {
  double x = 0.0;
  double t = 0.0;
};

// Rectangular evaluation grid; both axes strictly increasing and nonempty.
struct Grid {
  std::vector<double> x_values;
  std::vector<double> t_values;

  static Grid uniform(double x_min, double x_max, std::size_t nx,
                      double t_min, double t_max, std::size_t nt);
  void validate() const;
};

// beta(z, zbar) = conj(z - center)^p * sum_k coeffs[k] (z - center)^k.
// The conjugate factor is taken about the same expansion center, so the
// family covers the densities conj(z - z0)^{n-1} r(z) used for order-n data.
struct DensitySpec {
  int p = 0;
  std::vector<Complex> coeffs;
  Complex expansion_center{0.0, 0.0};

  void validate() const;
  static DensitySpec constant(Complex value);
};

Complex eval_density(const DensitySpec& spec, Complex z);

// Complex literals in config files and CLI arguments: "RE+IMi" / "RE-IMi",
// e.g. "0.0+1.0i".  A bare "RE" is accepted as a real value.
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

}  // namespace solgas
