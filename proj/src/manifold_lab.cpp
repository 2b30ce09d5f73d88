#include "gkdv/manifold_lab.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gkdv/errors.hpp"

namespace gkdv {

LabSettings LabSettings::for_speed(double c) {
  LabSettings s;
  s.dt = 5e-4 / std::pow(c, 1.5);
  return s;
}

Field random_smooth_field(const GridPtr& grid, double c, SeededRng& rng, int modes) {
  std::vector<double> alpha(modes), beta(modes);
  for (int j = 0; j < modes; ++j) {
    alpha[j] = rng.uniform(-1.0, 1.0);
    beta[j] = rng.uniform(-1.0, 1.0);
  }
  const double sc = std::sqrt(c);
  return Field::sample(grid, [&](double x) {
    const double z = sc * x;
    double acc = 0.0;
    for (int j = 0; j < modes; ++j) acc += alpha[j] * std::cos(0.5 * j * z) + beta[j] * std::sin(0.5 * j * z);
    return std::exp(-z * z / 8.0) * acc;
  });
}

Field random_center_field(const SpectralFrame& frame, SeededRng& rng) {
  Decomposition d = project(frame, random_smooth_field(frame.grid, frame.params.c, rng));
  d.v_e *= 1.0 / norm_h1(d.v_e);
  return d.v_e;
}

double energy_momentum(const Field& u, const WaveParams& p) { return energy(u, p.k) + p.c * momentum(u); }

ProbeOutcome probe(const Chart& chart, const Field& u0, bool backward, const LabSettings& s, double horizon,
                   Trajectory* keep) {
  const double lambda = chart.lambda();
  ProbeOutcome out;
  EvolveOptions opt;
  opt.dt = s.dt;
  opt.t_end = backward ? -horizon : horizon;
  opt.sample_every = s.sample_units / lambda;
  double last = 0.0;
  opt.stop = [&](const SampleView& v) {
    if (!v.coords.valid) {
      if (v.dist >= s.delta_stay && out.side != 0) {
        out.exited = true;
        out.exit_time = std::abs(v.t);
        return true;
      }
      throw ResolutionError("coordinates undefined inside the chart");
    }
    const double a = backward ? v.coords.a_minus : v.coords.a_plus;
    last = a;
    if (out.side == 0 && std::abs(a) >= s.side_threshold) out.side = a > 0.0 ? 1 : -1;
    if (v.dist >= s.delta_stay) {
      out.exited = true;
      out.exit_time = std::abs(v.t);
      if (out.side == 0) out.side = a >= 0.0 ? 1 : -1;
      return true;
    }
    return false;
  };
  Trajectory tr = evolve(u0, chart.frame().params, opt, &chart);
  if (!out.exited) {
    if (tr.exit == ExitFlag::NonFinite || tr.exit == ExitFlag::BlowUp) {
      throw ResolutionError(std::string("probe trajectory failed: ") + to_string(tr.exit));
    }
    out.exit_time = horizon;
    if (out.side == 0) out.side = last >= 0.0 ? 1 : -1;
  }
  if (keep) *keep = std::move(tr);
  return out;
}

RateFit instability_rate(const Chart& chart, double eps, const LabSettings& s, bool backward) {
  const SpectralFrame& fr = chart.frame();
  const double lambda = fr.lambda;
  RateFit fit;
  fit.t_begin = 1.0 / lambda;
  fit.t_end = 6.0 / lambda;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    Field u0 = fr.q;
    u0.axpy(eps, backward ? fr.v_minus : fr.v_plus);
    EvolveOptions opt;
    opt.dt = s.dt;
    opt.t_end = backward ? -fit.t_end : fit.t_end;
    opt.sample_every = s.sample_units / lambda;
    bool left = false;
    opt.stop = [&](const SampleView& v) {
      left = v.dist > s.delta_chart || !v.coords.valid;
      return left;
    };
    Trajectory tr = evolve(u0, fr.params, opt, &chart);
    if (left || tr.exit != ExitFlag::Completed) {
      eps /= 10.0;
      fit.retries = attempt + 1;
      continue;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double t = std::abs(tr.times[i]);
      if (t < fit.t_begin - 1e-12 || t > fit.t_end + 1e-12) continue;
      const double a = backward ? tr.coords[i].a_minus : tr.coords[i].a_plus;
      const double y = std::log(std::abs(a));
      sx += t;
      sy += y;
      sxx += t * t;
      sxy += t * y;
      ++n;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.eps = eps;
    fit.trajectory = std::move(tr);
    return fit;
  }
  throw ContractError("orbit leaves the chart before the fit window ends, even after 3 retries");
}

namespace {

ShootResult shoot(const Chart& chart, const Field& w, const LabSettings& s, std::optional<Bracket> warm,
                  bool backward) {
  const SpectralFrame& fr = chart.frame();
  const Field& dir = backward ? fr.v_minus : fr.v_plus;
  // a+ = <L V-, W>, a- = <L V+, W>
  const double leak = inner_l2(backward ? fr.l_v_plus : fr.l_v_minus, w);
  if (std::abs(leak) > 1e-9 * norm_l2(w) + 1e-14) {
    throw std::invalid_argument("base perturbation has a nonzero component along the shooting direction: " +
                                std::to_string(leak));
  }
  const double horizon = s.horizon_units / fr.lambda;
  ShootResult res;
  auto state = [&](double x) {
    Field u = fr.q + w;
    u.axpy(x, dir);
    return u;
  };
  auto run = [&](double x) {
    ++res.probes;
    ProbeOutcome o = probe(chart, state(x), backward, s, horizon);
    o.s = x;
    return o;
  };

  double lo = -s.s_max, hi = s.s_max;
  ProbeOutcome plo, phi;
  bool bracketed = false;
  if (warm) {
    double hw = std::max(warm->half_width, 4.0 * s.tol);
    while (hw < s.s_max) {
      lo = warm->center - hw;
      hi = warm->center + hw;
      plo = run(lo);
      phi = run(hi);
      if (plo.side < 0 && phi.side > 0) {
        bracketed = true;
        break;
      }
      hw *= 8.0;
    }
  }
  if (!bracketed) {
    lo = -s.s_max;
    hi = s.s_max;
    plo = run(lo);
    phi = run(hi);
    if (!plo.exited || !phi.exited || plo.side == phi.side) {
      throw ContractError("endpoints +-s_max fail to bracket the manifold (perturbation too large?)");
    }
    if (plo.side > 0 && phi.side < 0) throw ResolutionError("non-monotone exit sides across the bracket");
  }
  while (hi - lo > s.tol) {
    const double mid = 0.5 * (lo + hi);
    const ProbeOutcome pm = run(mid);
    if (pm.side < 0) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
      phi = pm;
    }
  }
  res.lo = lo;
  res.hi = hi;
  res.lo_probe = plo;
  res.hi_probe = phi;
  res.bracket_width = hi - lo;
  res.a_star = 0.5 * (lo + hi);
  const ProbeOutcome acc = run(res.a_star);
  res.stay_time = acc.exit_time;
  res.stays = res.stay_time >= s.t_stay(fr.lambda);
  return res;
}

}  // namespace

ShootResult shoot_cs(const Chart& chart, const Field& w, const LabSettings& s, std::optional<Bracket> warm) {
  return shoot(chart, w, s, warm, false);
}

ShootResult shoot_cu(const Chart& chart, const Field& w, const LabSettings& s, std::optional<Bracket> warm) {
  return shoot(chart, w, s, warm, true);
}

CenterShot shoot_center(const Chart& chart, const Field& ve, const LabSettings& s) {
  const SpectralFrame& fr = chart.frame();
  CenterShot out;
  double ap = 0.0, am = 0.0, dp = 0.0, dm = 0.0;
  bool converged = false;
  for (int round = 1; round <= 20; ++round) {
    std::optional<Bracket> wp, wm;
    if (round > 1) {
      wp = Bracket{ap, std::max(8.0 * s.tol, 4.0 * std::abs(dp))};
      wm = Bracket{am, std::max(8.0 * s.tol, 4.0 * std::abs(dm))};
    }
    Field wcs = ve;
    wcs.axpy(am, fr.v_minus);
    const ShootResult rp = shoot_cs(chart, wcs, s, wp);
    dp = rp.a_star - ap;
    ap = rp.a_star;
    Field wcu = ve;
    wcu.axpy(ap, fr.v_plus);
    const ShootResult rm = shoot_cu(chart, wcu, s, wm);
    dm = rm.a_star - am;
    am = rm.a_star;
    out.probes += rp.probes + rm.probes;
    out.rounds = round;
    out.history_plus.push_back(ap);
    out.history_minus.push_back(am);
    // Each shot is only resolved to the bisection tolerance, so successive
    // rounds can differ by up to one tolerance even at the fixed point.
    if (round > 1 && std::abs(dp) <= 2.0 * s.tol && std::abs(dm) <= 2.0 * s.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ContractError("center-manifold iteration did not settle within 20 rounds");
  out.a_plus = ap;
  out.a_minus = am;
  Field u = fr.q + ve;
  u.axpy(ap, fr.v_plus);
  u.axpy(am, fr.v_minus);
  const double ts = s.t_stay(fr.lambda);
  out.forward_stay = probe(chart, u, false, s, ts).exit_time;
  out.backward_stay = probe(chart, u, true, s, ts).exit_time;
  return out;
}

ExitRecord exit_time(const Chart& chart, double offset, const Field& w, double a_manifold, const LabSettings& s,
                     double t_max_units) {
  if (offset == 0.0) throw std::invalid_argument("exit_time needs a nonzero offset");
  const SpectralFrame& fr = chart.frame();
  Field u0 = fr.q + w;
  u0.axpy(a_manifold + offset, fr.v_plus);
  EvolveOptions opt;
  opt.dt = s.dt;
  opt.t_end = t_max_units / fr.lambda;
  opt.sample_every = std::min(s.sample_units, 0.01) / fr.lambda;
  int side = 0;
  opt.stop = [&](const SampleView& v) {
    if (side == 0 && v.coords.valid && std::abs(v.coords.a_plus) >= s.side_threshold) {
      side = v.coords.a_plus > 0.0 ? 1 : -1;
    }
    return v.dist >= s.delta_stay;
  };
  const Trajectory tr = evolve(u0, fr.params, opt, &chart);
  if (tr.exit != ExitFlag::Stopped) throw ContractError("no exit before T_max");
  const std::size_t i = tr.size() - 1;
  ExitRecord rec;
  rec.initial_offset = std::abs(offset);
  rec.dist_at_exit = tr.dist[i];
  rec.exit_side = side != 0 ? side : (tr.coords[i].a_plus >= 0.0 ? 1 : -1);
  if (i == 0) {
    rec.exit_time = 0.0;
  } else {
    const double l0 = std::log(tr.dist[i - 1]), l1 = std::log(tr.dist[i]);
    const double f = (std::log(s.delta_stay) - l0) / (l1 - l0);
    rec.exit_time = tr.times[i - 1] + f * (tr.times[i] - tr.times[i - 1]);
  }
  return rec;
}

std::vector<StabilityRow> orbital_stability_run(const Chart& chart, const Field& ve_unit,
                                                const std::vector<double>& sizes, double t_horizon,
                                                const LabSettings& s) {
  const SpectralFrame& fr = chart.frame();
  const double base = energy_momentum(fr.q, fr.params);
  std::vector<StabilityRow> rows;
  for (double eps : sizes) {
    StabilityRow row;
    row.eps = eps;
    const Field ve = eps * ve_unit;
    if (eps != 0.0) {
      const CenterShot cs = shoot_center(chart, ve, s);
      row.a_plus = cs.a_plus;
      row.a_minus = cs.a_minus;
    }
    Field u0 = fr.q + ve;
    u0.axpy(row.a_plus, fr.v_plus);
    u0.axpy(row.a_minus, fr.v_minus);
    row.ve_h1_initial = norm_h1(ve);
    EvolveOptions opt;
    opt.dt = s.dt;
    opt.sample_every = s.sample_units / fr.lambda;
    opt.t_end = t_horizon;
    row.forward = evolve(u0, fr.params, opt, &chart);
    opt.t_end = -t_horizon;
    row.backward = evolve(u0, fr.params, opt, &chart);
    row.pinning_min = std::numeric_limits<double>::infinity();
    row.pinning_max = -std::numeric_limits<double>::infinity();
    for (const Trajectory* tr : {&row.forward, &row.backward}) {
      for (std::size_t i = 0; i < tr->size(); ++i) {
        row.excursion = std::max(row.excursion, tr->dist[i]);
        if (tr->coords[i].valid) row.max_ve_h1 = std::max(row.max_ve_h1, tr->coords[i].ve_h1);
        const double pin = tr->energy[i] + fr.params.c * tr->momentum[i] - base;
        row.pinning_min = std::min(row.pinning_min, pin);
        row.pinning_max = std::max(row.pinning_max, pin);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RescaleCheck rescale_invariance_check(const Chart& source, const Chart& target, const Field& state,
                                      const LabSettings& target_settings) {
  const double c = source.frame().params.c;
  const double c2 = target.frame().params.c;
  const double ratio = c2 / c;
  if (ratio < 0.25 - 1e-12 || ratio > 4.0 + 1e-12) throw std::invalid_argument("c2/c must lie in [0.25, 4]");
  const SpectralFrame& tf = target.frame();
  const Field u2 = rescale(state, source.frame().params.k, std::sqrt(ratio), tf.grid);
  Field w = u2 - tf.q;
  RescaleCheck out;
  out.a_plus_mapped = inner_l2(tf.l_v_minus, w);
  w.axpy(-out.a_plus_mapped, tf.v_plus);
  out.shot = shoot_cs(target, w, target_settings, Bracket{out.a_plus_mapped, 1e-6});
  out.a_star = out.shot.a_star;
  out.deviation = std::abs(out.a_star - out.a_plus_mapped);
  return out;
}

}  // namespace gkdv
