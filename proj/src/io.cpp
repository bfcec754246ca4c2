#include "solgas/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solgas {

using json = nlohmann::ordered_json;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string points_to_csv(const std::vector<Complex>& points) {
  std::string out = "re,im\n";
  for (const Complex& z : points)
    out += format_g17(z.real()) + "," + format_g17(z.imag()) + "\n";
  return out;
}

std::string field_to_csv(const FieldSample& field) {
  std::string out = "x,t,re_psi,im_psi,abs_psi\n";
  for (std::size_t ti = 0; ti < field.grid.t_values.size(); ++ti) {
    for (std::size_t xi = 0; xi < field.grid.x_values.size(); ++xi) {
      const Complex p = field.psi[ti][xi];
      out += format_g17(field.grid.x_values[xi]) + "," +
             format_g17(field.grid.t_values[ti]) + "," +
             format_g17(p.real()) + "," + format_g17(p.imag()) + "," +
             format_g17(std::abs(p)) + "\n";
    }
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, const std::string& where) {
  const std::string t = trim(s);
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (begin != end && *begin == '+') ++begin;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || begin == end)
    throw Error(ErrorCode::ConfigError,
                "bad number '" + s + "' in " + where);
  return v;
}

}  // namespace

ScatteringData read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot open spectrum file " + path);
  std::vector<SpectralPoint> pts;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.find_first_not_of("0123456789+-.eE, \t") != std::string::npos)
      continue;  // header
    const auto parts = split(t, ',');
    if (parts.size() != 4)
      throw Error(ErrorCode::ConfigError,
                  "spectrum rows need re_z,im_z,re_c,im_c: '" + t + "'");
    pts.push_back({{parse_number(parts[0], path), parse_number(parts[1], path)},
                   {parse_number(parts[2], path), parse_number(parts[3], path)}});
  }
  return ScatteringData(std::move(pts));
}

std::string fekete_sidecar_json(const FeketeResult& r) {
  json j;
  j["energy"] = r.energy;
  j["gradient_norm"] = r.gradient_norm;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["seed"] = r.seed;
  j["n"] = r.points.size();
  return j.dump(2) + "\n";
}

std::string shielding_csv(const ConvergenceTable& table) {
  std::string out =
      "n,sup_error,x_min,x_max,condition_estimate,linear_residual,failed\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.n) + "," + format_g17(row.sup_error) + "," +
           format_g17(row.window.x_min) + "," + format_g17(row.window.x_max) +
           "," + format_g17(row.diagnostics.condition_estimate) + "," +
           format_g17(row.diagnostics.linear_residual) + "," +
           (row.failed ? "1" : "0") + "\n";
  }
  return out;
}

std::string shielding_json(const ConvergenceTable& table) {
  json rows = json::array();
  bool monotone = true;
  double prev = -1.0;
  for (const auto& row : table.rows) {
    json r;
    r["n"] = row.n;
    r["sup_error"] = row.sup_error;
    r["failed"] = row.failed;
    if (row.failed) r["error"] = row.error;
    r["condition_estimate"] = row.diagnostics.condition_estimate;
    rows.push_back(r);
    if (!row.failed) {
      if (prev >= 0.0 && row.sup_error >= prev) monotone = false;
      prev = row.sup_error;
    }
  }
  json j;
  j["rows"] = rows;
  j["sup_error_decreasing"] = monotone;
  return j.dump(2) + "\n";
}

std::string drift_csv(const DriftFit& fit) {
  std::string out = "n,peak_distance,main_peak_offset\n";
  for (const auto& row : fit.rows)
    out += std::to_string(row.n) + "," + format_g17(row.peak_distance) + "," +
           format_g17(row.main_peak_offset) + "\n";
  return out;
}

std::string drift_json(const DriftFit& fit) {
  json j;
  j["p"] = fit.p;
  j["q"] = fit.q;
  j["r_squared"] = fit.r_squared;
  j["predicted_x0"] = fit.predicted_x0;
  json rows = json::array();
  for (const auto& row : fit.rows) {
    json r;
    r["n"] = row.n;
    r["peak_distance"] = row.peak_distance;
    r["main_peak_offset"] = row.main_peak_offset;
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string fluctuation_csv(const FluctuationReport& report) {
  std::string out = "n,trial,re_psi,im_psi\n";
  for (std::size_t i = 0; i < report.per_n.size(); ++i) {
    for (std::size_t t = 0; t < report.raw_re[i].size(); ++t) {
      out += std::to_string(report.per_n[i].n) + "," + std::to_string(t) +
             "," + format_g17(report.raw_re[i][t]) + "," +
             format_g17(report.raw_im[i][t]) + "\n";
    }
  }
  return out;
}

std::string fluctuation_json(const FluctuationReport& report) {
  json j;
  json rows = json::array();
  for (const auto& rec : report.per_n) {
    json r;
    r["n"] = rec.n;
    r["mean_re"] = rec.sample_mean.real();
    r["mean_im"] = rec.sample_mean.imag();
    r["sigma"] = rec.sigma;
    r["normality_p"] = rec.normality_p;
    r["trials"] = rec.trials;
    r["failed_trials"] = rec.failed_trials;
    rows.push_back(r);
  }
  j["per_n"] = rows;
  j["alpha"] = report.fit.alpha;
  j["constant"] = report.fit.constant;
  j["r_squared"] = report.fit.r_squared;
  return j.dump(2) + "\n";
}

std::string elliptic_csv(const EllipticProfileReport& report) {
  std::string out = "x,abs_psi\n";
  for (std::size_t i = 0; i < report.profile_x.size(); ++i)
    out += format_g17(report.profile_x[i]) + "," +
           format_g17(report.profile_abs[i]) + "\n";
  return out;
}

std::string elliptic_json(const EllipticProfileReport& report) {
  json j;
  j["n"] = report.n;
  j["measured_period"] = report.measured_period;
  j["predicted_period"] = report.predicted_period;
  j["measured_envelope_min"] = report.measured_envelope_min;
  j["measured_envelope_max"] = report.measured_envelope_max;
  j["predicted_envelope_min"] = report.predicted_envelope_min;
  j["predicted_envelope_max"] = report.predicted_envelope_max;
  j["decay_check"] = report.decay_check;
  j["decay_max_abs"] = report.decay_max_abs;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::ConfigError, "cannot write " + path);
  out << contents;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config Config::from_file(const std::string& path) {
  return from_string(read_file(path));
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw Error(ErrorCode::ConfigError, "duplicate key " + key);
    cfg.values_[key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw Error(ErrorCode::ConfigError, "missing config key " + key);
  used_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  return parse_number(get_string(key), "config key " + key);
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
  return std::lround(parse_number(get_string(key), "config key " + key));
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

Complex Config::get_complex(const std::string& key) const {
  return parse_complex(get_string(key));
}

Complex Config::get_complex(const std::string& key, Complex fallback) const {
  return has(key) ? get_complex(key) : fallback;
}

std::vector<long> Config::get_int_list(const std::string& key) const {
  std::vector<long> out;
  for (const std::string& part : split(get_string(key), ','))
    out.push_back(
        std::lround(parse_number(part, "config key " + key)));
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) out.push_back(key);
  return out;
}

Domain domain_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("domain.kind");
  if (kind == "disk") {
    DiskDomain d{cfg.get_complex("domain.center"),
                 cfg.get_double("domain.radius")};
    d.validate();
    return d;
  }
  if (kind == "quadrature") {
    QuadratureDomain d{cfg.get_complex("domain.d0"),
                       cfg.get_complex("domain.d1"),
                       cfg.get_double("domain.rho"),
                       int(cfg.get_int("domain.m"))};
    d.validate();
    return d;
  }
  if (kind == "ellipse") {
    EllipseDomain d{cfg.get_double("domain.alpha1"),
                    cfg.get_double("domain.alpha2"),
                    cfg.get_double("domain.rho")};
    d.validate();
    return d;
  }
  throw Error(ErrorCode::ConfigError,
              "domain.kind must be disk, quadrature or ellipse (got '" + kind +
                  "')");
}

DensitySpec density_from_config(const Config& cfg) {
  DensitySpec d;
  d.p = int(cfg.get_int("density.p", 0));
  d.expansion_center = cfg.get_complex("density.center", Complex(0.0, 0.0));
  for (const std::string& part : split(cfg.get_string("density.coeffs"), ','))
    d.coeffs.push_back(parse_complex(trim(part)));
  d.validate();
  return d;
}

}  // namespace solgas
