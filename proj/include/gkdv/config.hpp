#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gkdv {

// Flat `key = value` run configuration. Keys k and c are required; speed
// dependent defaults (half_length, dt, sample_every) are filled from c.
struct RunConfig {
  int k = 7;
  double c = 1.0;
  std::size_t n_points = 2048;
  double half_length = 50.0;
  double dt = 5e-4;
  double drift_budget = 1e-8;
  double t_end = 10.0;
  double sample_every = 0.025;
  std::string variant = "instability";
  double eps = 1e-4;
  std::vector<double> sizes{1e-3, 2e-3, 4e-3};
  std::vector<double> offsets{1e-3, 5e-4, 2.5e-4};
  double t_stay_units = 15.0;
  double horizon_units = 30.0;
  double tol = 1e-10;
  double s_max = 1e-2;
  double delta_stay = 0.1;
  double delta_chart = 0.3;
  double c2 = 2.0;
  std::uint64_t seed = 1;
  double init_y = 0.0;
  double init_a_plus = 0.0;
  double init_a_minus = 0.0;
  double init_ve = 0.0;
  std::string init_state;
  int checkpoint_every = 0;
  std::string output_dir = "gkdv_out";

  bool operator==(const RunConfig&) const = default;
};

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};
using ConfigEntries = std::map<std::string, ConfigEntry>;

const std::vector<std::string>& config_keys();

// Tokenize without validating values; rejects unknown and duplicate keys.
ConfigEntries parse_entries(const std::string& text);
// Validate and fill defaults.
RunConfig build_config(const ConfigEntries& entries);
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

// Name of the environment variable selecting the output root.
inline constexpr const char* kOutputRootEnv = "GKDV_OUTPUT_ROOT";

}  // namespace gkdv
