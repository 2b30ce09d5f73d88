// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exits 0 when every criterion was evaluated, whatever the verdicts; a
// criterion that throws is reported as FAIL with the error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gkdv/manifold_lab.hpp"

using namespace gkdv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::vector<std::string> details;

  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    details.emplace_back(buf);
  }
};

struct Criterion {
  int id;
  const char* name;
  std::function<void(Verdict&)> body;
};

// Shared state, built on first use.
struct Lab {
  WaveParams p{7, 1.0};
  GridPtr grid = Grid::make(2048, 50.0);
  SpectralFrame frame = unstable_eigenpair(p, grid);
  Chart chart{frame};
  LabSettings ls = LabSettings::for_speed(1.0);
  Field ve0;
  std::vector<double> sizes{1e-3, 2e-3, 4e-3};
  std::vector<ShootResult> shots;  // shoot_cs(sizes[i] ve0)

  Lab() {
    SeededRng rng(1);
    ve0 = random_center_field(frame, rng);
  }
};

Lab& lab() {
  static Lab l;
  return l;
}

Field final_state(const Field& u0, const WaveParams& p, double t, double dt) {
  EvolveOptions o;
  o.t_end = t;
  o.dt = dt;
  o.sample_every = std::abs(t);
  o.checkpoint_every = 1;
  o.record_coords = false;
  return evolve(u0, p, o).states.back();
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

void profile_exactness(Verdict& v) {
  const auto t0 = Clock::now();
  const WaveParams p(7, 1.0);
  const GridPtr g = Grid::make(2048, 50.0);
  const double peak_err = std::abs(soliton_value(p, 0.0) - std::cbrt(2.0));
  const Field q = soliton_profile(p, g);
  const Field qxx = spectral_derivative(q, 2);
  double res = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) res = std::max(res, std::abs(qxx[j] - q[j] + std::pow(q[j], 7)));
  const double secs = seconds_since(t0);
  v.note("|Q(0) - 2^(1/3)| = %.3e (< 1e-12)", peak_err);
  v.note("max |Q'' - Q + Q^7| = %.3e (< 1e-8), N = 2048, L = 50", res);
  v.note("runtime %.3f s (< 1 s)", secs);
  v.pass = peak_err < 1e-12 && res < 1e-8 && secs < 1.0;
}

struct KernelResiduals {
  double kernel, jordan;
};

KernelResiduals kernel_residuals(std::size_t n) {
  const WaveParams p(7, 1.0);
  const GridPtr g = Grid::make(n, 50.0);
  const Field q = soliton_profile(p, g);
  const Field dq = spectral_derivative(q, 1);
  const Field dc = dc_profile(p, g);
  return {norm_l2(apply_Lc(p, q, dq)), norm_l2(spectral_derivative(apply_Lc(p, q, dc), 1) + dq)};
}

void kernel_jordan(Verdict& v) {
  const auto t0 = Clock::now();
  const KernelResiduals r = kernel_residuals(512);
  const double secs = seconds_since(t0);
  v.note("N = 512: |L dxQ| = %.3e (< 1e-8), |JL dcQ + dxQ| = %.3e (< 1e-7)", r.kernel, r.jordan);
  v.note("runtime %.3f s (< 10 s)", secs);
  const KernelResiduals fine = kernel_residuals(2048);
  v.note("info N = 2048: |L dxQ| = %.3e, |JL dcQ + dxQ| = %.3e", fine.kernel, fine.jordan);
  v.pass = r.kernel < 1e-8 && r.jordan < 1e-7 && secs < 10.0;
}

void scaling_law(Verdict& v) {
  const auto t0 = Clock::now();
  const double l1 = unstable_eigenpair(WaveParams(7, 1.0), Grid::make(2048, 50.0)).lambda;
  double worst = 0.0;
  for (double c : {0.25, 0.5, 2.0, 4.0}) {
    const SpectralFrame f = unstable_eigenpair(WaveParams(7, c), Grid::make(2048, 50.0 / std::sqrt(c)));
    const double rel = std::abs(f.lambda / l1 / std::pow(c, 1.5) - 1.0);
    worst = std::max(worst, rel);
    v.note("c = %-5g lambda_c = %.12f  relative deviation from c^1.5 lambda_1: %.2e", c, f.lambda, rel);
  }
  const double secs = seconds_since(t0);
  v.note("lambda_1 = %.12f; max deviation %.2e (< 1e-5); runtime %.1f s (< 300 s)", l1, worst, secs);
  v.pass = worst < 1e-5 && secs < 300.0;
}

void normalization_parity(Verdict& v) {
  const SpectralFrame& f = lab().frame;
  const double pm = inner_l2(f.l_v_plus, f.v_minus);
  const double pp = std::abs(inner_l2(f.l_v_plus, f.v_plus));
  const double mm = std::abs(inner_l2(f.l_v_minus, f.v_minus));
  const std::size_t n = f.grid->size();
  double dev = 0.0;
  for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(f.v_minus[j] - f.parity * f.v_plus[(n - j) % n]));
  v.note("<L V+, V-> - 1 = %.2e; |<L V+, V+>| = %.2e; |<L V-, V->| = %.2e (< 1e-8)", pm - 1.0, pp, mm);
  v.note("sigma = %+.0f, max |V-(x) - sigma V+(-x)| = %.2e (< 1e-6)", f.parity, dev);
  v.pass = std::abs(pm - 1.0) < 1e-8 && pp < 1e-8 && mm < 1e-8 && dev < 1e-6;
}

void coercivity(Verdict& v) {
  const SpectralFrame& f = lab().frame;
  SeededRng rng(2);
  int violations = 0;
  double worst = INFINITY;
  for (int i = 0; i < 100; ++i) {
    const Field ve = random_center_field(f, rng);
    const double ratio = inner_l2(apply_Lc(f.params, f.q, ve), ve) / std::pow(norm_h1(ve), 2);
    worst = std::min(worst, ratio);
    if (ratio < f.a_c) ++violations;
  }
  v.note("A_c = %.6f; min <L Ve, Ve>/|Ve|^2 over 100 samples = %.6f; violations %d", f.a_c, worst, violations);
  v.pass = f.a_c > 0.0 && violations == 0;
}

void conservation(Verdict& v) {
  Lab& l = lab();
  // Chart-sized for T = 20: a centre-manifold point run 10 time units in each
  // direction.
  LabSettings fine = l.ls;
  fine.tol = 1e-12;
  const CenterShot cs = shoot_center(l.chart, l.sizes[0] * l.ve0, fine);
  Field u0 = l.frame.q + l.sizes[0] * l.ve0;
  u0.axpy(cs.a_plus, l.frame.v_plus);
  u0.axpy(cs.a_minus, l.frame.v_minus);
  double de = 0.0, dp = 0.0, max_dist = 0.0;
  const double e0 = energy(u0, 7), p0 = momentum(u0);
  for (double t_end : {10.0, -10.0}) {
    EvolveOptions o;
    o.t_end = t_end;
    o.dt = l.ls.dt;
    o.sample_every = 0.05;
    const Trajectory tr = evolve(u0, l.p, o, &l.chart);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      de = std::max(de, std::abs(tr.energy[i] - e0) / std::max(1.0, std::abs(e0)));
      dp = std::max(dp, std::abs(tr.momentum[i] - p0) / std::max(1.0, std::abs(p0)));
      max_dist = std::max(max_dist, tr.dist[i]);
    }
    if (tr.exit != ExitFlag::Completed) de = dp = INFINITY;
  }
  v.note("window [-10, 10] at dt = %g from a centre-manifold point (eps = %g): max dist %.3e", l.ls.dt, l.sizes[0],
         max_dist);
  v.note("relative drift E %.3e, P %.3e (< 1e-8)", de, dp);

  SeededRng rng(41);
  const Field w0 = l.frame.q + 1e-2 * random_smooth_field(l.grid, 1.0, rng);
  const Field ref = final_state(w0, l.p, 1.0, 1.5625e-5);
  auto err = [&](double dt) { return norm_h1(final_state(w0, l.p, 1.0, dt) - ref); };
  const double e_125 = err(1.25e-4), e_0625 = err(6.25e-5);
  const double order = std::log2(e_125 / e_0625);
  const double e_5 = err(5e-4), e_25 = err(2.5e-4);
  v.note("self-convergence at t = 1 (reference dt = 1.5625e-5): order %.3f from dt 1.25e-4/6.25e-5 (4 +- 0.3)",
         order);
  v.note("info pre-asymptotic order at the default dt (5e-4/2.5e-4): %.3f", std::log2(e_5 / e_25));
  v.pass = de < 1e-8 && dp < 1e-8 && max_dist <= l.ls.delta_chart && std::abs(order - 4.0) <= 0.3;
}

void rate_agreement(Verdict& v) {
  Lab& l = lab();
  const auto t0 = Clock::now();
  const RateFit fit = instability_rate(l.chart, 1e-4, l.ls, false);
  const double secs = seconds_since(t0);
  const double rel = fit.slope / l.frame.lambda - 1.0;
  v.note("eps = %g (retries %d): fitted slope %.6f vs lambda_1 %.6f, relative %+.2f%% (within 2%%)", fit.eps,
         fit.retries, fit.slope, l.frame.lambda, 100.0 * rel);
  v.note("runtime %.1f s (< 120 s)", secs);
  const RateFit small = instability_rate(l.chart, 1e-5, l.ls, false);
  v.note("info eps = 1e-5: relative %+.2f%%", 100.0 * (small.slope / l.frame.lambda - 1.0));
  v.pass = fit.retries == 0 && std::abs(rel) <= 0.02 && secs < 120.0;
}

void shooting(Verdict& v) {
  Lab& l = lab();
  bool ok = true;
  auto t0 = Clock::now();
  const ShootResult zero = shoot_cs(l.chart, Field(l.grid), l.ls);
  double secs = seconds_since(t0);
  v.note("W = 0: a_star = %.3e (|.| < 1e-9), %d probes, %.1f s", zero.a_star, zero.probes, secs);
  ok = ok && std::abs(zero.a_star) < 1e-9 && secs < 600.0;
  std::vector<double> stars;
  for (double e : l.sizes) {
    t0 = Clock::now();
    l.shots.push_back(shoot_cs(l.chart, e * l.ve0, l.ls));
    secs = seconds_since(t0);
    const ShootResult& r = l.shots.back();
    stars.push_back(r.a_star);
    v.note("eps = %g: a_star = %.6e, bracket %.1e, stay %.2f, %d probes, %.1f s", e, r.a_star, r.bracket_width,
           r.stay_time, r.probes, secs);
    ok = ok && secs < 600.0;
  }
  const double slope = loglog_slope(l.sizes, stars);
  v.note("log-log slope of |a_star| vs eps = %.4f (>= 1.9)", slope);
  v.pass = ok && slope >= 1.9;
}

void exit_spacing(Verdict& v) {
  Lab& l = lab();
  const Field w(l.grid);
  const double target = std::numbers::ln2 / l.frame.lambda;
  std::vector<double> times;
  for (double o : {1e-3, 5e-4, 2.5e-4}) {
    const ExitRecord r = exit_time(l.chart, o, w, 0.0, l.ls);
    times.push_back(r.exit_time);
    v.note("offset %-7g T* = %.5f (side %+d)", o, r.exit_time, r.exit_side);
  }
  bool ok = true;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double rel = (times[i + 1] - times[i]) / target - 1.0;
    v.note("spacing %zu: %.5f vs ln2/lambda = %.5f, relative %+.2f%% (within 10%%)", i, times[i + 1] - times[i], target,
           100.0 * rel);
    ok = ok && std::abs(rel) <= 0.1;
  }
  v.pass = ok;
}

void center_stability(Verdict& v) {
  Lab& l = lab();
  LabSettings fine = l.ls;
  fine.tol = 1e-12;
  const auto rows = orbital_stability_run(l.chart, l.ve0, l.sizes, l.ls.t_stay(l.frame.lambda), fine);
  double cstab = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    cstab = std::max(cstab, r.excursion / r.eps);
    v.note("eps = %g: a+ = %.4e, a- = %.4e, excursion over |t| <= %.3f: %.4e", r.eps, r.a_plus, r.a_minus,
           l.ls.t_stay(l.frame.lambda), r.excursion);
    if (i > 0) {
      const double ratio = r.excursion / rows[i - 1].excursion;
      v.note("  excursion ratio to eps = %g: %.3f (in [1.3, 3.1])", rows[i - 1].eps, ratio);
      ok = ok && ratio >= 1.3 && ratio <= 3.1;
    }
  }
  v.note("C_stab = %.3f (excursion <= C_stab eps for all sizes)", cstab);
  v.pass = ok && std::isfinite(cstab);
}

void rescaling(Verdict& v) {
  Lab& l = lab();
  if (l.shots.empty()) l.shots.push_back(shoot_cs(l.chart, l.sizes[0] * l.ve0, l.ls));
  Field state = l.frame.q + l.sizes[0] * l.ve0;
  state.axpy(l.shots[0].a_star, l.frame.v_plus);
  const double c2 = 2.0;
  const Chart target(unstable_eigenpair(WaveParams(7, c2), Grid::make(2048, 50.0 / std::sqrt(c2))));
  const LabSettings ls2 = LabSettings::for_speed(c2);
  const RescaleCheck rc = rescale_invariance_check(l.chart, target, state, ls2);
  v.note("a+ of rescaled state %.6e, re-shot a_star %.6e, deviation %.3e (< 10 tol = %.0e)", rc.a_plus_mapped,
         rc.a_star, rc.deviation, 10.0 * ls2.tol);
  v.pass = rc.deviation < 10.0 * ls2.tol;
}

void chart_round_trip(Verdict& v) {
  const Chart& ch = lab().chart;
  SeededRng rng(12);
  double embed_err = 0.0, coord_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    Coords c;
    c.y = rng.uniform(-2.0, 2.0);
    c.a_plus = rng.uniform(-1e-2, 1e-2);
    c.a_minus = rng.uniform(-1e-2, 1e-2);
    c.v_e = rng.uniform(0.0, 1e-2) * translate(random_center_field(ch.frame(), rng), c.y);
    const Field u = ch.embed(c);
    const Coords back = ch.fit_modulation(u, c.y + rng.uniform(-0.2, 0.2));
    embed_err = std::max(embed_err, norm_h1(ch.embed(back) - u));
    coord_err = std::max({coord_err, std::abs(back.y - c.y), std::abs(back.a_plus - c.a_plus),
                          std::abs(back.a_minus - c.a_minus), norm_h1(back.v_e - c.v_e)});
  }
  v.note("50 states: max |embed(fit(U)) - U|_H1 = %.2e, max coordinate error = %.2e (< 1e-8)", embed_err, coord_err);
  v.pass = embed_err < 1e-8 && coord_err < 1e-8;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "profile exactness", profile_exactness},
      {2, "kernel and Jordan structure", kernel_jordan},
      {3, "eigenvalue scaling law", scaling_law},
      {4, "normalization and parity", normalization_parity},
      {5, "coercivity", coercivity},
      {6, "conservation and integrator order", conservation},
      {7, "linear/nonlinear rate agreement", rate_agreement},
      {8, "shooting correctness and tangency", shooting},
      {9, "exit-time spacing", exit_spacing},
      {10, "center-manifold stability", center_stability},
      {11, "rescaling coherence", rescaling},
      {12, "round-trip chart fidelity", chart_round_trip},
  };
  int passed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.note("error: %s", e.what());
    }
    passed += v.pass ? 1 : 0;
    std::printf("%s %2d %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, seconds_since(t0));
    for (const auto& d : v.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", passed, criteria.size());
  return 0;
}
