// gkdv_lab: command-line front end for the supercritical gKdV soliton lab.
//
//   gkdv_lab [--config FILE] [--<key> VALUE ...] <subcommand>
//
// Subcommands: profile, spectrum, decompose, evolve, experiment <variant>.
// Exit codes: 0 ok, 1 unexpected failure, 2 configuration, 3 resolution,
// 4 contract (drift budget, tolerance windows).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "gkdv/config.hpp"
#include "gkdv/csv.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/manifold_lab.hpp"

namespace fs = std::filesystem;
using namespace gkdv;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResolution = 3;
constexpr int kExitContract = 4;

struct Summary {
  CsvTable table;
  bool pass = true;
  std::vector<std::string> names;

  Summary() { table.header = {"value", "lower", "upper", "pass"}; table.columns.resize(4); }

  void add(const std::string& name, double value, double lower, double upper) {
    const bool ok = value >= lower && value <= upper;
    pass = pass && ok;
    names.push_back(name);
    table.columns[0].push_back(value);
    table.columns[1].push_back(lower);
    table.columns[2].push_back(upper);
    table.columns[3].push_back(ok ? 1.0 : 0.0);
    std::printf("  %-28s %-24s [%s, %s] %s\n", name.c_str(), format_double(value).c_str(),
                format_double(lower).c_str(), format_double(upper).c_str(), ok ? "ok" : "VIOLATED");
  }
  void info(const std::string& name, double value) {
    add(name, value, -INFINITY, INFINITY);
  }

  void write(const fs::path& path) const {
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    os << "name,value,lower,upper,pass\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      os << names[i] << "," << format_double(table.columns[0][i]) << "," << format_double(table.columns[1][i]) << ","
         << format_double(table.columns[2][i]) << "," << (table.columns[3][i] > 0 ? 1 : 0) << "\n";
    }
  }
};

fs::path output_root(const RunConfig& cfg) {
  const char* env = std::getenv(kOutputRootEnv);
  return env && *env ? fs::path(env) / cfg.output_dir : fs::path(cfg.output_dir);
}

GridPtr make_grid(const RunConfig& cfg) { return Grid::make(cfg.n_points, cfg.half_length); }

LabSettings lab_settings(const RunConfig& cfg) {
  LabSettings s;
  s.dt = cfg.dt;
  s.delta_stay = cfg.delta_stay;
  s.delta_chart = cfg.delta_chart;
  s.t_stay_units = cfg.t_stay_units;
  s.horizon_units = cfg.horizon_units;
  s.tol = cfg.tol;
  s.s_max = cfg.s_max;
  return s;
}

void save_config(const fs::path& dir, const RunConfig& cfg) {
  fs::create_directories(dir);
  std::ofstream(dir / "config.txt", std::ios::binary) << serialize_config(cfg);
}

int cmd_profile(const RunConfig& cfg) {
  const WaveParams p(cfg.k, cfg.c);
  const GridPtr grid = make_grid(cfg);
  const Field q = soliton_profile(p, grid);
  const Field qxx = spectral_derivative(q, 2);
  double res = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    res = std::max(res, std::abs(qxx[j] - p.c * q[j] + std::pow(q[j], p.k)));
  }
  const fs::path dir = output_root(cfg) / "profile";
  save_config(dir, cfg);
  CsvTable t;
  t.header = {"x", "Q", "dx_Q", "dc_Q"};
  t.columns = {grid->nodes(), q.values(), spectral_derivative(q, 1).values(), dc_profile(p, grid).values()};
  write_csv(dir / "profile.csv", t);
  std::printf("Q(0) = %s\nprofile residual (max) = %s\nmass P(Q) = %s\nenergy E(Q) = %s\n",
              format_double(soliton_value(p, 0.0)).c_str(), format_double(res).c_str(),
              format_double(momentum(q)).c_str(), format_double(energy(q, p.k)).c_str());
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  const WaveParams p(cfg.k, cfg.c);
  const GridPtr grid = make_grid(cfg);
  const SpectralFrame fr = unstable_eigenpair(p, grid);
  const OperatorMatrix jl = assemble_JLc(p, grid);
  auto residual = [&](const Field& v, double mu) {
    Field r = jl.apply(v);
    r.axpy(-mu, v);
    return norm_l2(r) / norm_l2(v);
  };
  const fs::path dir = output_root(cfg) / "spectrum";
  save_config(dir, cfg);
  CsvTable t;
  t.header = {"x", "V_plus", "V_minus"};
  t.columns = {grid->nodes(), fr.v_plus.values(), fr.v_minus.values()};
  write_csv(dir / "eigenfunctions.csv", t);
  std::printf("spectrum k=%d c=%s N=%zu L=%s\n", p.k, format_double(p.c).c_str(), grid->size(),
              format_double(grid->half_length()).c_str());
  Summary s;
  s.info("lambda", fr.lambda);
  s.add("residual_plus", residual(fr.v_plus, fr.lambda), 0.0, 1e-7);
  s.add("residual_minus", residual(fr.v_minus, -fr.lambda), 0.0, 1e-7);
  s.add("normalization_LVp_Vm", inner_l2(fr.l_v_plus, fr.v_minus), 1.0 - 1e-8, 1.0 + 1e-8);
  s.info("parity_sigma", fr.parity);
  s.add("coercivity_A_c", fr.a_c, 0.0, INFINITY);
  s.write(dir / "summary.csv");
  std::printf("spectrum: %s\n", s.pass ? "PASS" : "FAIL");
  return s.pass ? 0 : kExitContract;
}

int cmd_decompose(const RunConfig& cfg) {
  if (cfg.init_state.empty()) throw ConfigError("decompose needs init_state = <state CSV with columns x,u>");
  const WaveParams p(cfg.k, cfg.c);
  const GridPtr grid = make_grid(cfg);
  const Chart chart(unstable_eigenpair(p, grid));
  const Field u = read_state_csv(cfg.init_state, grid);
  const Distance d = chart.distance_to_manifold(u);
  const Coords c = chart.fit_modulation(u, d.y);
  const fs::path dir = output_root(cfg) / "decompose";
  save_config(dir, cfg);
  CsvTable t;
  t.header = {"y", "a_plus", "a_minus", "ve_h1_norm", "dist"};
  t.columns = {{c.y}, {c.a_plus}, {c.a_minus}, {norm_h1(c.v_e)}, {d.value}};
  write_csv(dir / "coordinates.csv", t);
  std::printf("y = %s\na_plus = %s\na_minus = %s\nve_h1_norm = %s\ndist = %s\n", format_double(c.y).c_str(),
              format_double(c.a_plus).c_str(), format_double(c.a_minus).c_str(),
              format_double(norm_h1(c.v_e)).c_str(), format_double(d.value).c_str());
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  const WaveParams p(cfg.k, cfg.c);
  const GridPtr grid = make_grid(cfg);
  const Chart chart(unstable_eigenpair(p, grid));
  Field u0;
  if (!cfg.init_state.empty()) {
    u0 = read_state_csv(cfg.init_state, grid);
  } else {
    Coords c;
    c.y = cfg.init_y;
    c.a_plus = cfg.init_a_plus;
    c.a_minus = cfg.init_a_minus;
    if (cfg.init_ve != 0.0) {
      SeededRng rng(cfg.seed);
      c.v_e = translate(cfg.init_ve * random_center_field(chart.frame(), rng), cfg.init_y);
    }
    u0 = chart.embed(c);
  }
  EvolveOptions opt;
  opt.t_end = cfg.t_end;
  opt.dt = cfg.dt;
  opt.sample_every = cfg.sample_every;
  opt.drift_budget = cfg.drift_budget;
  opt.checkpoint_every = cfg.checkpoint_every;
  const Trajectory tr = evolve(u0, p, opt, &chart);
  const fs::path dir = output_root(cfg) / "evolve";
  save_config(dir, cfg);
  write_trajectory_csv(dir / "trajectory.csv", tr);
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "state_%05zu.csv", i);
    write_state_csv(dir / name, tr.states[i]);
  }
  const ConservationReport r = conservation_report(tr);
  std::printf("evolve: %zu samples, exit %s\n", tr.size(), to_string(tr.exit));
  Summary s;
  s.add("energy_drift", r.energy_drift, 0.0, r.budget);
  s.add("momentum_drift", r.momentum_drift, 0.0, r.budget);
  s.add("finite", tr.exit == ExitFlag::NonFinite ? 0.0 : 1.0, 1.0, 1.0);
  s.write(dir / "summary.csv");
  std::printf("evolve: %s\n", s.pass ? "PASS" : "FAIL (drift budget)");
  return s.pass ? 0 : kExitContract;
}

std::string short_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_experiment(const RunConfig& cfg, const std::string& variant) {
  const WaveParams p(cfg.k, cfg.c);
  const GridPtr grid = make_grid(cfg);
  const Chart chart(unstable_eigenpair(p, grid));
  const SpectralFrame& fr = chart.frame();
  const LabSettings ls = lab_settings(cfg);
  const fs::path dir = output_root(cfg) / ("experiment-" + variant);
  save_config(dir, cfg);
  SeededRng rng(cfg.seed);
  const Field ve0 = random_center_field(fr, rng);
  write_state_csv(dir / "ve0.csv", ve0);
  Summary s;
  s.info("lambda", fr.lambda);

  auto nonzero_sizes = [&] {
    std::vector<double> v;
    for (double e : cfg.sizes) {
      if (e > 0.0) v.push_back(e);
    }
    return v;
  };

  if (variant == "instability") {
    const RateFit fwd = instability_rate(chart, cfg.eps, ls, false);
    const RateFit bwd = instability_rate(chart, cfg.eps, ls, true);
    write_trajectory_csv(dir / "forward.csv", fwd.trajectory);
    write_trajectory_csv(dir / "backward.csv", bwd.trajectory);
    s.info("eps_used_forward", fwd.eps);
    s.add("slope_forward", fwd.slope, 0.98 * fr.lambda, 1.02 * fr.lambda);
    s.info("eps_used_backward", bwd.eps);
    s.add("slope_backward", bwd.slope, 0.98 * fr.lambda, 1.02 * fr.lambda);
  } else if (variant == "shoot-cs" || variant == "shoot-cu") {
    const bool cu = variant == "shoot-cu";
    std::vector<double> eps, stars;
    for (double e : cfg.sizes) {
      const Field w = e * ve0;
      const ShootResult r = cu ? shoot_cu(chart, w, ls) : shoot_cs(chart, w, ls);
      const std::string tag = "eps_" + short_tag(e);
      s.info(tag + "_a_star", r.a_star);
      s.info(tag + "_probes", r.probes);
      s.add(tag + "_bracket_width", r.bracket_width, 0.0, ls.tol);
      s.add(tag + "_stay_time", r.stay_time, ls.t_stay(fr.lambda), INFINITY);
      if (e == 0.0) {
        s.add("a_star_at_zero", std::abs(r.a_star), 0.0, 1e-9);
      } else {
        eps.push_back(e);
        stars.push_back(r.a_star);
      }
    }
    if (eps.size() >= 2) s.add("tangency_slope", loglog_slope(eps, stars), 1.9, INFINITY);
  } else if (variant == "center") {
    for (double e : cfg.sizes) {
      const CenterShot c = shoot_center(chart, e * ve0, ls);
      const std::string tag = "eps_" + short_tag(e);
      s.info(tag + "_a_plus", c.a_plus);
      s.info(tag + "_a_minus", c.a_minus);
      s.info(tag + "_rounds", c.rounds);
      s.add(tag + "_forward_stay", c.forward_stay, ls.t_stay(fr.lambda), INFINITY);
      s.add(tag + "_backward_stay", c.backward_stay, ls.t_stay(fr.lambda), INFINITY);
    }
  } else if (variant == "exit-time") {
    const Field w(grid);
    std::vector<ExitRecord> recs;
    for (double o : cfg.offsets) {
      recs.push_back(exit_time(chart, o, w, 0.0, ls));
      s.info("offset_" + short_tag(o) + "_exit_time", recs.back().exit_time);
      s.info("offset_" + short_tag(o) + "_side", recs.back().exit_side);
    }
    const double target = std::numbers::ln2 / fr.lambda;
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      const double ratio = std::abs(cfg.offsets[i] / cfg.offsets[i + 1]);
      if (std::abs(ratio - 2.0) > 1e-12) continue;
      s.add("spacing_" + std::to_string(i), recs[i + 1].exit_time - recs[i].exit_time, 0.9 * target, 1.1 * target);
    }
  } else if (variant == "stability") {
    const auto rows = orbital_stability_run(chart, ve0, cfg.sizes, ls.t_stay(fr.lambda), ls);
    double cstab = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const std::string tag = "eps_" + short_tag(r.eps);
      s.info(tag + "_excursion", r.excursion);
      s.info(tag + "_pinning_min", r.pinning_min);
      s.info(tag + "_pinning_max", r.pinning_max);
      write_trajectory_csv(dir / (tag + "_forward.csv"), r.forward);
      write_trajectory_csv(dir / (tag + "_backward.csv"), r.backward);
      if (r.eps > 0.0) cstab = std::max(cstab, r.excursion / r.eps);
      if (i > 0 && rows[i - 1].eps > 0.0) {
        s.add(tag + "_excursion_ratio", r.excursion / rows[i - 1].excursion, 1.3, 3.1);
      }
    }
    s.info("C_stab", cstab);
  } else if (variant == "rescale") {
    const auto sizes = nonzero_sizes();
    const double e = sizes.empty() ? 1e-3 : sizes.front();
    const ShootResult shot = shoot_cs(chart, e * ve0, ls);
    Field state = fr.q + e * ve0;
    state.axpy(shot.a_star, fr.v_plus);
    const WaveParams p2(cfg.k, cfg.c2);
    const GridPtr grid2 = Grid::make(cfg.n_points, cfg.half_length * std::sqrt(cfg.c / cfg.c2));
    const Chart chart2(unstable_eigenpair(p2, grid2));
    LabSettings ls2 = ls;
    ls2.dt = cfg.dt * std::pow(cfg.c / cfg.c2, 1.5);
    const RescaleCheck rc = rescale_invariance_check(chart, chart2, state, ls2);
    s.info("a_star_source", shot.a_star);
    s.info("a_plus_mapped", rc.a_plus_mapped);
    s.info("a_star_target", rc.a_star);
    s.add("reshoot_deviation", rc.deviation, 0.0, 10.0 * cfg.tol);
    s.add("lambda_ratio", chart2.lambda() / fr.lambda, std::pow(cfg.c2 / cfg.c, 1.5) * (1 - 1e-5),
          std::pow(cfg.c2 / cfg.c, 1.5) * (1 + 1e-5));
  } else {
    throw ConfigError("unknown experiment variant '" + variant + "'");
  }
  s.write(dir / "summary.csv");
  std::printf("experiment %s: %s\n", variant.c_str(), s.pass ? "PASS" : "FAIL");
  return s.pass ? 0 : kExitContract;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for solitary waves of supercritical gKdV"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value configuration file");
  std::map<std::string, std::string> overrides;
  for (const auto& key : config_keys()) {
    app.add_option("--" + key, overrides[key], "override config key '" + key + "'");
  }
  auto* profile = app.add_subcommand("profile", "sample the soliton profile");
  auto* spectrum = app.add_subcommand("spectrum", "unstable eigenpair, normalization and coercivity");
  auto* decompose = app.add_subcommand("decompose", "modulation coordinates of a state CSV");
  auto* evolve_cmd = app.add_subcommand("evolve", "time integration with coordinate recording");
  auto* experiment = app.add_subcommand("experiment", "manifold experiments");
  std::string variant;
  experiment->add_option("variant", variant,
                         "instability | shoot-cs | shoot-cu | center | exit-time | stability | rescale");
  (void)profile;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    ConfigEntries entries;
    if (!config_path.empty()) entries = parse_entries(read_file(config_path));
    for (const auto& [key, value] : overrides) {
      if (app.count("--" + key) > 0) entries[key] = ConfigEntry{value, 0};
    }
    if (experiment->parsed() && !variant.empty()) entries["variant"] = ConfigEntry{variant, 0};
    const RunConfig cfg = build_config(entries);
    if (profile->parsed()) return cmd_profile(cfg);
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (decompose->parsed()) return cmd_decompose(cfg);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg);
    return cmd_experiment(cfg, cfg.variant);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const ResolutionError& e) {
    std::fprintf(stderr, "resolution error: %s\n", e.what());
    return kExitResolution;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "contract violation: %s\n", e.what());
    return kExitContract;
  } catch (const ChartError& e) {
    std::fprintf(stderr, "chart error: %s\n", e.what());
    return kExitContract;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
