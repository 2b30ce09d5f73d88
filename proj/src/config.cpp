#include "gkdv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gkdv/csv.hpp"
#include "gkdv/errors.hpp"

namespace gkdv {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "k",           "c",           "n_points",      "half_length",   "dt",         "drift_budget", "t_end",
      "sample_every", "variant",    "eps",           "sizes",         "offsets",    "t_stay_units", "horizon_units",
      "tol",         "s_max",       "delta_stay",    "delta_chart",   "c2",         "seed",         "init_y",
      "init_a_plus", "init_a_minus", "init_ve",      "init_state",    "checkpoint_every", "output_dir"};
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& key, const ConfigEntry& e) {
  return e.line > 0 ? "line " + std::to_string(e.line) + ", key '" + key + "'" : "command line, key '" + key + "'";
}

double to_double(const std::string& key, const ConfigEntry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last || !std::isfinite(v)) {
    throw ConfigError(where(key, e) + ": expected a finite number, got '" + e.value + "'");
  }
  return v;
}

long long to_int(const std::string& key, const ConfigEntry& e) {
  long long v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) throw ConfigError(where(key, e) + ": expected an integer, got '" + e.value + "'");
  return v;
}

std::vector<double> to_list(const std::string& key, const ConfigEntry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(key, ConfigEntry{trim(item), e.line}));
  }
  if (out.empty()) throw ConfigError(where(key, e) + ": empty list");
  return out;
}

void require(bool ok, const std::string& key, const ConfigEntry& e, const std::string& what) {
  if (!ok) throw ConfigError(where(key, e) + ": " + what + ", got '" + e.value + "'");
}

}  // namespace

ConfigEntries parse_entries(const std::string& text) {
  ConfigEntries out;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  const auto& keys = config_keys();
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    auto it = out.find(key);
    if (it != out.end()) {
      throw ConfigError("duplicate key '" + key + "' at lines " + std::to_string(it->second.line) + " and " +
                        std::to_string(line));
    }
    out.emplace(key, ConfigEntry{value, line});
  }
  return out;
}

RunConfig build_config(const ConfigEntries& entries) {
  RunConfig cfg;
  for (const char* req : {"k", "c"}) {
    if (!entries.count(req)) throw ConfigError(std::string("missing required key '") + req + "'");
  }
  auto has = [&](const char* key) { return entries.count(key) > 0; };
  auto positive = [&](const char* key, double& field) {
    if (!has(key)) return;
    const auto& e = entries.at(key);
    field = to_double(key, e);
    require(field > 0.0, key, e, "must be positive");
  };
  auto real = [&](const char* key, double& field) {
    if (has(key)) field = to_double(key, entries.at(key));
  };

  {
    const auto& e = entries.at("k");
    const long long k = to_int("k", e);
    require(k > 5, "k", e, "k must be an integer > 5 (the lab studies the supercritical case)");
    require(k < 64, "k", e, "k must be < 64");
    cfg.k = static_cast<int>(k);
  }
  positive("c", cfg.c);
  if (has("n_points")) {
    const auto& e = entries.at("n_points");
    const long long n = to_int("n_points", e);
    require(n >= 128 && (n & (n - 1)) == 0, "n_points", e, "must be a power of two >= 128");
    cfg.n_points = static_cast<std::size_t>(n);
  }
  cfg.half_length = 50.0 / std::sqrt(cfg.c);
  cfg.dt = 5e-4 / std::pow(cfg.c, 1.5);
  cfg.sample_every = 0.025 / std::pow(cfg.c, 1.5);
  positive("half_length", cfg.half_length);
  positive("dt", cfg.dt);
  positive("drift_budget", cfg.drift_budget);
  positive("t_end", cfg.t_end);
  positive("sample_every", cfg.sample_every);
  if (has("variant")) {
    const auto& e = entries.at("variant");
    static const std::vector<std::string> variants{"instability", "shoot-cs", "shoot-cu", "center",
                                                   "exit-time",   "stability", "rescale"};
    require(std::find(variants.begin(), variants.end(), e.value) != variants.end(), "variant", e,
            "unknown experiment variant");
    cfg.variant = e.value;
  }
  positive("eps", cfg.eps);
  for (const char* key : {"sizes", "offsets"}) {
    if (!has(key)) continue;
    const auto& e = entries.at(key);
    auto list = to_list(key, e);
    for (double v : list) {
      if (std::string(key) == "sizes") {
        require(v >= 0.0, key, e, "entries must be nonnegative");
      } else {
        require(v != 0.0, key, e, "entries must be nonzero");
      }
    }
    (std::string(key) == "sizes" ? cfg.sizes : cfg.offsets) = std::move(list);
  }
  positive("t_stay_units", cfg.t_stay_units);
  positive("horizon_units", cfg.horizon_units);
  positive("tol", cfg.tol);
  positive("s_max", cfg.s_max);
  positive("delta_stay", cfg.delta_stay);
  positive("delta_chart", cfg.delta_chart);
  positive("c2", cfg.c2);
  if (has("seed")) {
    const auto& e = entries.at("seed");
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    require(ec == std::errc() && p == e.value.data() + e.value.size(), "seed", e, "expected an unsigned integer");
    cfg.seed = v;
  }
  real("init_y", cfg.init_y);
  real("init_a_plus", cfg.init_a_plus);
  real("init_a_minus", cfg.init_a_minus);
  real("init_ve", cfg.init_ve);
  if (has("init_state")) cfg.init_state = entries.at("init_state").value;
  if (has("checkpoint_every")) {
    const auto& e = entries.at("checkpoint_every");
    const long long v = to_int("checkpoint_every", e);
    require(v >= 0, "checkpoint_every", e, "must be nonnegative");
    cfg.checkpoint_every = static_cast<int>(v);
  }
  if (has("output_dir")) {
    const auto& e = entries.at("output_dir");
    require(!e.value.empty(), "output_dir", e, "must not be empty");
    cfg.output_dir = e.value;
  }
  {
    const double ratio = cfg.c2 / cfg.c;
    if (ratio < 0.25 || ratio > 4.0) throw ConfigError("key 'c2': c2/c must lie in [0.25, 4]");
  }
  return cfg;
}

RunConfig parse_config(const std::string& text) { return build_config(parse_entries(text)); }

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
  };
  os << "k = " << cfg.k << "\n";
  os << "c = " << format_double(cfg.c) << "\n";
  os << "n_points = " << cfg.n_points << "\n";
  os << "half_length = " << format_double(cfg.half_length) << "\n";
  os << "dt = " << format_double(cfg.dt) << "\n";
  os << "drift_budget = " << format_double(cfg.drift_budget) << "\n";
  os << "t_end = " << format_double(cfg.t_end) << "\n";
  os << "sample_every = " << format_double(cfg.sample_every) << "\n";
  os << "variant = " << cfg.variant << "\n";
  os << "eps = " << format_double(cfg.eps) << "\n";
  os << "sizes = " << list(cfg.sizes) << "\n";
  os << "offsets = " << list(cfg.offsets) << "\n";
  os << "t_stay_units = " << format_double(cfg.t_stay_units) << "\n";
  os << "horizon_units = " << format_double(cfg.horizon_units) << "\n";
  os << "tol = " << format_double(cfg.tol) << "\n";
  os << "s_max = " << format_double(cfg.s_max) << "\n";
  os << "delta_stay = " << format_double(cfg.delta_stay) << "\n";
  os << "delta_chart = " << format_double(cfg.delta_chart) << "\n";
  os << "c2 = " << format_double(cfg.c2) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "init_y = " << format_double(cfg.init_y) << "\n";
  os << "init_a_plus = " << format_double(cfg.init_a_plus) << "\n";
  os << "init_a_minus = " << format_double(cfg.init_a_minus) << "\n";
  os << "init_ve = " << format_double(cfg.init_ve) << "\n";
  if (!cfg.init_state.empty()) os << "init_state = " << cfg.init_state << "\n";
  os << "checkpoint_every = " << cfg.checkpoint_every << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
  return os.str();
}

}  // namespace gkdv
