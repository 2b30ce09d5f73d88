#include "gkdv/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fft.hpp"
#include "gkdv/errors.hpp"

namespace gkdv {

const char* to_string(ExitFlag f) {
  switch (f) {
    case ExitFlag::Completed: return "completed";
    case ExitFlag::BlowUp: return "blow_up_guard";
    case ExitFlag::NonFinite: return "non_finite";
    case ExitFlag::Stopped: return "stopped";
  }
  return "unknown";
}

void phi_functions(std::complex<double> z, std::complex<double>& phi1, std::complex<double>& phi2,
                   std::complex<double>& phi3) {
  constexpr int kPoints = 32;
  phi1 = phi2 = phi3 = 0.0;
  for (int j = 0; j < kPoints; ++j) {
    const std::complex<double> w = z + std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / kPoints);
    const std::complex<double> e = std::exp(w);
    phi1 += (e - 1.0) / w;
    phi2 += (e - 1.0 - w) / (w * w);
    phi3 += (e - 1.0 - w - 0.5 * w * w) / (w * w * w);
  }
  phi1 /= static_cast<double>(kPoints);
  phi2 /= static_cast<double>(kPoints);
  phi3 /= static_cast<double>(kPoints);
}

Propagator::Propagator(const WaveParams& p, GridPtr grid, double dt, Mode mode, const Field* potential)
    : p_(p), grid_(std::move(grid)), dt_(dt), mode_(mode) {
  if (!(std::abs(dt) > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be nonzero");
  if (mode == Mode::Linearized) {
    if (!potential) throw std::invalid_argument("linearized propagator needs a potential");
    potential_ = potential->values();
  }
  const std::size_t n = grid_->size();
  const std::size_t nyq = n / 2;
  const std::size_t ns = nyq + 1;
  const auto kappa = grid_->half_wavenumbers();
  lin_.resize(ns);
  qf_.resize(ns);
  f1_.resize(ns);
  f2_.resize(ns);
  f3_.resize(ns);
  dk_.resize(ns);
  const std::size_t cutoff = n / 3;
  for (std::size_t m = 0; m < ns; ++m) {
    const double k = m == nyq ? 0.0 : kappa[m];
    lin_[m] = std::complex<double>(0.0, p_.c * k + k * k * k);
    // -i k with the 2/3 rule for the nonlinear term.
    const bool keep = mode_ == Mode::Linearized ? m < nyq : m <= cutoff;
    dk_[m] = keep ? std::complex<double>(0.0, -k) : 0.0;
    const std::complex<double> z = dt_ * lin_[m];
    std::complex<double> a1, a2, a3, h1, h2, h3;
    phi_functions(0.5 * z, h1, h2, h3);
    phi_functions(z, a1, a2, a3);
    qf_[m] = 0.5 * dt_ * h1;
    f1_[m] = dt_ * (a1 - 3.0 * a2 + 4.0 * a3);
    f2_[m] = dt_ * (a2 - 2.0 * a3);
    f3_[m] = dt_ * (-a2 + 4.0 * a3);
  }
  phys_.resize(n);
  for (Spectrum* s : {&nv_, &na_, &nb_, &nc_, &a_, &b_, &c_, &tmp_}) s->resize(ns);
}

void Propagator::nonlinear(const Spectrum& v, Spectrum& out) {
  const auto& fft = detail::RealFft::get(grid_->size());
  fft.inverse(v.data(), phys_.data());
  const double inv_n = 1.0 / static_cast<double>(grid_->size());
  if (mode_ == Mode::Nonlinear) {
    for (double& x : phys_) {
      const double u = x * inv_n;
      double r = 1.0, b = u;
      for (int e = p_.k; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
      }
      x = r;
    }
  } else {
    for (std::size_t j = 0; j < phys_.size(); ++j) phys_[j] = potential_[j] * phys_[j] * inv_n;
  }
  fft.forward(phys_.data(), out.data());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] *= dk_[m];
}

void Propagator::step(Spectrum& v) {
  const std::size_t ns = v.size();
  nonlinear(v, nv_);
  for (std::size_t m = 0; m < ns; ++m) a_[m] = v[m] + qf_[m] * (lin_[m] * v[m] + nv_[m]);
  nonlinear(a_, na_);
  for (std::size_t m = 0; m < ns; ++m) b_[m] = v[m] + qf_[m] * (lin_[m] * v[m] + na_[m]);
  nonlinear(b_, nb_);
  for (std::size_t m = 0; m < ns; ++m) c_[m] = a_[m] + qf_[m] * (lin_[m] * a_[m] + 2.0 * nb_[m] - nv_[m]);
  nonlinear(c_, nc_);
  for (std::size_t m = 0; m < ns; ++m) {
    const std::complex<double> lv = lin_[m] * v[m];
    v[m] += f1_[m] * (lv + nv_[m]) + 2.0 * f2_[m] * (2.0 * lv + na_[m] + nb_[m]) + f3_[m] * (lv + nc_[m]);
  }
}

namespace {

struct Schedule {
  long total_steps;
  long steps_per_sample;
  double h;
};

Schedule make_schedule(const EvolveOptions& opt) {
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw std::invalid_argument("dt must be positive");
  if (!(opt.sample_every > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!std::isfinite(opt.t_end)) throw std::invalid_argument("t_end must be finite");
  Schedule s;
  s.total_steps = std::lround(std::abs(opt.t_end) / opt.dt);
  s.steps_per_sample = std::max(1L, std::lround(opt.sample_every / opt.dt));
  s.h = opt.t_end < 0.0 ? -opt.dt : opt.dt;
  return s;
}

template <class Record>
ExitFlag run(Propagator& prop, Spectrum& v, const Schedule& sch, double guard2, Record&& record) {
  const Grid& grid = prop.grid();
  if (record(0L)) return ExitFlag::Stopped;
  for (long step = 1; step <= sch.total_steps; ++step) {
    prop.step(v);
    const double h1 = spectral_inner_h1(grid, v, v);
    if (!std::isfinite(h1)) {
      return ExitFlag::NonFinite;
    }
    if (h1 > guard2) {
      record(step);
      return ExitFlag::BlowUp;
    }
    if (step % sch.steps_per_sample == 0 || step == sch.total_steps) {
      if (record(step)) return ExitFlag::Stopped;
    }
  }
  return ExitFlag::Completed;
}

}  // namespace

Trajectory evolve(const Field& u0, const WaveParams& p, const EvolveOptions& opt, const Chart* chart) {
  p.validate();
  if (!u0.all_finite()) throw std::invalid_argument("initial state is not finite");
  const Schedule sch = make_schedule(opt);
  const GridPtr& grid = u0.grid_ptr();
  Propagator prop(p, grid, sch.h, Propagator::Mode::Nonlinear);
  Spectrum v = forward(u0);

  const double q_h1 = chart ? chart->q_h1() : norm_h1(soliton_profile(p, grid));
  const double guard2 = 100.0 * q_h1 * q_h1;

  Trajectory tr;
  tr.drift_budget = opt.drift_budget;
  double y_prev = 0.0;
  long sample_index = 0;
  auto record = [&](long step) {
    const double t = static_cast<double>(step) * sch.h;
    const Field u = inverse(grid, v);
    tr.times.push_back(t);
    tr.energy.push_back(energy(u, p.k));
    tr.momentum.push_back(momentum(u));
    CoordSample cs{std::numeric_limits<double>::quiet_NaN(), 0, 0, 0, false};
    double d = std::numeric_limits<double>::quiet_NaN();
    if (chart) {
      const Distance dist = chart->distance_to_manifold(u);
      d = dist.value;
      if (opt.record_coords) {
        cs = chart->sample(u, sample_index == 0 ? dist.y : y_prev);
        if (!cs.valid) cs = chart->sample(u, dist.y);
        if (cs.valid) y_prev = cs.y;
      }
    }
    tr.coords.push_back(cs);
    tr.dist.push_back(d);
    if (opt.checkpoint_every > 0 && sample_index % opt.checkpoint_every == 0) {
      tr.state_times.push_back(t);
      tr.states.push_back(u);
    }
    ++sample_index;
    return opt.stop ? opt.stop(SampleView{t, u, tr.coords.back(), d}) : false;
  };
  tr.exit = run(prop, v, sch, guard2, record);
  return tr;
}

Trajectory evolve_linearized(const Field& v0, const SpectralFrame& frame, const EvolveOptions& opt) {
  require_same_grid(v0, frame.q);
  const Schedule sch = make_schedule(opt);
  const GridPtr& grid = frame.grid;
  Field pot(grid);
  for (std::size_t j = 0; j < pot.size(); ++j) pot[j] = frame.params.k * std::pow(frame.q[j], frame.params.k - 1);
  Propagator prop(frame.params, grid, sch.h, Propagator::Mode::Linearized, &pot);
  Spectrum v = forward(v0);
  const double guard2 = std::numeric_limits<double>::infinity();

  Trajectory tr;
  tr.drift_budget = opt.drift_budget;
  long sample_index = 0;
  auto record = [&](long step) {
    const double t = static_cast<double>(step) * sch.h;
    const Field u = inverse(grid, v);
    tr.times.push_back(t);
    tr.energy.push_back(0.5 * inner_l2(apply_Lc(frame.params, frame.q, u), u));
    tr.momentum.push_back(inner_l2(frame.q, u));
    const Decomposition d = project(frame, u);
    tr.coords.push_back(CoordSample{d.a_t, d.a_plus, d.a_minus, norm_h1(d.v_e), true});
    tr.dist.push_back(norm_h1(u));
    if (opt.checkpoint_every > 0 && sample_index % opt.checkpoint_every == 0) {
      tr.state_times.push_back(t);
      tr.states.push_back(u);
    }
    ++sample_index;
    return opt.stop ? opt.stop(SampleView{t, u, tr.coords.back(), tr.dist.back()}) : false;
  };
  tr.exit = run(prop, v, sch, guard2, record);
  return tr;
}

ConservationReport conservation_report(const Trajectory& tr) {
  if (tr.size() < 2) throw std::invalid_argument("conservation report needs at least two samples");
  ConservationReport r;
  r.budget = tr.drift_budget;
  const double e0 = tr.energy.front(), p0 = tr.momentum.front();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double de = std::abs(tr.energy[i] - e0) / std::max(1.0, std::abs(e0));
    const double dp = std::abs(tr.momentum[i] - p0) / std::max(1.0, std::abs(p0));
    r.energy_drift = std::isfinite(de) ? std::max(r.energy_drift, de) : std::numeric_limits<double>::infinity();
    r.momentum_drift = std::isfinite(dp) ? std::max(r.momentum_drift, dp) : std::numeric_limits<double>::infinity();
  }
  r.within_budget = tr.exit != ExitFlag::NonFinite && tr.exit != ExitFlag::BlowUp && r.energy_drift < r.budget &&
                    r.momentum_drift < r.budget;
  return r;
}

double high_mode_fraction(const Field& u) {
  const Spectrum s = forward(u);
  const std::size_t nyq = u.size() / 2;
  const std::size_t cut = u.size() / 3;
  double total = 0.0, high = 0.0;
  for (std::size_t m = 0; m <= nyq; ++m) {
    const double w = (m == 0 || m == nyq) ? 1.0 : 2.0;
    const double e = w * std::norm(s[m]);
    total += e;
    if (m > cut) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace gkdv
