#include "solgas/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace solgas {

ScatteringData::ScatteringData(std::vector<SpectralPoint> points,
                               std::size_t cap)
    : points_(std::move(points)) {
  if (points_.empty())
    throw Error(ErrorCode::InvariantViolation, "scattering data is empty");
  if (points_.size() > cap)
    throw Error(ErrorCode::InvariantViolation,
                "scattering data exceeds cap of " + std::to_string(cap) +
                    " points");
  for (const auto& p : points_) {
    if (!is_finite(p.z) || !is_finite(p.c))
      throw Error(ErrorCode::InvariantViolation,
                  "non-finite spectral point or norming constant");
    if (!(p.z.imag() > 0.0))
      throw Error(ErrorCode::InvariantViolation,
                  "pole not in the open upper half-plane: " +
                      format_complex(p.z));
  }
  for (std::size_t j = 0; j < points_.size(); ++j)
    for (std::size_t k = j + 1; k < points_.size(); ++k)
      if (std::abs(points_[j].z - points_[k].z) <= kMinPoleDistance)
        throw Error(ErrorCode::InvariantViolation,
                    "coincident poles at indices " + std::to_string(j) +
                        ", " + std::to_string(k));
}

Grid Grid::uniform(double x_min, double x_max, std::size_t nx, double t_min,
                   double t_max, std::size_t nt) {
  Grid g;
  g.x_values.resize(nx);
  g.t_values.resize(nt);
  for (std::size_t i = 0; i < nx; ++i)
    g.x_values[i] = nx == 1 ? x_min : x_min + (x_max - x_min) * double(i) / double(nx - 1);
  for (std::size_t i = 0; i < nt; ++i)
    g.t_values[i] = nt == 1 ? t_min : t_min + (t_max - t_min) * double(i) / double(nt - 1);
  g.validate();
  return g;
}

void Grid::validate() const {
  if (x_values.empty() || t_values.empty())
    throw Error(ErrorCode::InvariantViolation, "empty grid axis");
  auto check = [](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i]))
        throw Error(ErrorCode::InvariantViolation,
                    std::string("non-finite ") + name + " grid value");
      if (i > 0 && !(v[i] > v[i - 1]))
        throw Error(ErrorCode::InvariantViolation,
                    std::string(name) + " grid not strictly increasing");
    }
  };
  check(x_values, "x");
  check(t_values, "t");
}

void DensitySpec::validate() const {
  if (p < 0)
    throw Error(ErrorCode::InvariantViolation, "density power p < 0");
  if (coeffs.empty())
    throw Error(ErrorCode::InvariantViolation, "density has no coefficients");
  if (coeffs.back() == Complex(0.0, 0.0))
    throw Error(ErrorCode::InvariantViolation,
                "leading density coefficient is zero");
  if (!is_finite(expansion_center))
    throw Error(ErrorCode::InvariantViolation, "non-finite expansion center");
  for (Complex c : coeffs)
    if (!is_finite(c))
      throw Error(ErrorCode::InvariantViolation, "non-finite density coefficient");
}

DensitySpec DensitySpec::constant(Complex value) {
  DensitySpec d;
  d.p = 0;
  d.coeffs = {value};
  return d;
}

Complex eval_density(const DensitySpec& spec, Complex z) {
  const Complex u = z - spec.expansion_center;
  // Horner in (z - center)
  Complex poly = spec.coeffs.back();
  for (std::size_t k = spec.coeffs.size() - 1; k-- > 0;)
    poly = poly * u + spec.coeffs[k];
  Complex conj_pow{1.0, 0.0};
  const Complex ubar = std::conj(u);
  for (int i = 0; i < spec.p; ++i) conj_pow *= ubar;
  return conj_pow * poly;
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty())
    throw Error(ErrorCode::ConfigError, "empty complex literal");

  auto parse_double = [&](const std::string& part) -> double {
    const char* begin = part.data();
    const char* end = part.data() + part.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects '+'
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || begin == end)
      throw Error(ErrorCode::ConfigError,
                  "bad numeric literal '" + part + "' in '" + text + "'");
    return v;
  };

  if (s.back() != 'i' && s.back() != 'I') return {parse_double(s), 0.0};

  s.pop_back();
  // split at the last +/- that is not an exponent sign and not leading
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    // pure imaginary: "i", "-i", "2.5i"
    if (s.empty() || s == "+") return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, parse_double(s)};
  }
  std::string re = s.substr(0, split);
  std::string im = s.substr(split);
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return {parse_double(re), parse_double(im)};
}

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace solgas
