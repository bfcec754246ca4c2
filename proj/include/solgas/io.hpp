#pragma once

// File formats: CSV writers with 17 significant digits and LF endings,
// JSON reports with stable snake_case keys, and the flat `section.key = value`
// config format with RE+IMi complex literals.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "solgas/core.hpp"
#include "solgas/domains.hpp"
#include "solgas/engine.hpp"
#include "solgas/experiments.hpp"
#include "solgas/sampling.hpp"

namespace solgas {

std::string format_g17(double v);

std::string points_to_csv(const std::vector<Complex>& points);  // re,im
std::string field_to_csv(const FieldSample& field);  // x,t,re_psi,im_psi,abs_psi

// spectrum rows: re_z,im_z,re_c,im_c (header optional)
ScatteringData read_spectrum_csv(const std::string& path);

std::string fekete_sidecar_json(const FeketeResult& result);
std::string shielding_csv(const ConvergenceTable& table);
std::string shielding_json(const ConvergenceTable& table);
std::string drift_csv(const DriftFit& fit);
std::string drift_json(const DriftFit& fit);
std::string fluctuation_csv(const FluctuationReport& report);
std::string fluctuation_json(const FluctuationReport& report);
std::string elliptic_csv(const EllipticProfileReport& report);
std::string elliptic_json(const EllipticProfileReport& report);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// Flat config: one `section.key = value` per line, '#' comments.  Lookups
// mark keys as used; unknown_keys() reports the rest so the CLI can reject
// typos by name.
class Config {
public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  Complex get_complex(const std::string& key) const;
  Complex get_complex(const std::string& key, Complex fallback) const;
  std::vector<long> get_int_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  std::vector<std::string> unused_keys() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

// domain.* keys -> Domain; density.* keys -> DensitySpec
Domain domain_from_config(const Config& cfg);
DensitySpec density_from_config(const Config& cfg);

}  // namespace solgas
