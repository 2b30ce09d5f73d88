#include "gkdv/coords.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fft.hpp"
#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

double weight(std::size_t m, std::size_t nyq) { return (m == 0 || m == nyq) ? 1.0 : 2.0; }

}  // namespace

Chart::Chart(SpectralFrame frame) : frame_(std::move(frame)) {
  q_hat_ = forward(frame_.q);
  dq_hat_ = forward(frame_.dx_q);
  vp_hat_ = forward(frame_.v_plus);
  vm_hat_ = forward(frame_.v_minus);
  lvp_hat_ = forward(frame_.l_v_plus);
  lvm_hat_ = forward(frame_.l_v_minus);
  gram_ = projection_gram(frame_).partialPivLu();
  lvm_q_ = inner_l2(frame_.l_v_minus, frame_.q);
  lvp_q_ = inner_l2(frame_.l_v_plus, frame_.q);
  dq_q_ = inner_l2(frame_.dx_q, frame_.q);
  q_h1_ = norm_h1(frame_.q);
}

Field Chart::embed(double y, double a_plus, double a_minus) const {
  Spectrum s = q_hat_;
  for (std::size_t m = 0; m < s.size(); ++m) s[m] += a_plus * vp_hat_[m] + a_minus * vm_hat_[m];
  translate_spectrum(*frame_.grid, s, y);
  return inverse(frame_.grid, s);
}

Field Chart::embed(const Coords& c) const {
  Field u = embed(c.y, c.a_plus, c.a_minus);
  if (!c.v_e.empty()) u += c.v_e;
  return u;
}

Chart::Projections Chart::projections(const Spectrum& u_hat, double y) const {
  // <g(. + y), u> = <g, u(. - y)>; the translated spectrum of u and its
  // y-derivative are formed on the fly.
  const Grid& grid = *frame_.grid;
  const std::size_t nyq = grid.size() / 2;
  const auto kappa = grid.half_wavenumbers();
  double s_lvm = 0, s_lvp = 0, s_dq = 0, d_lvm = 0, d_lvp = 0, d_dq = 0;
  auto dot = [](std::complex<double> a, std::complex<double> b) { return a.real() * b.real() + a.imag() * b.imag(); };
  for (std::size_t m = 0; m <= nyq; ++m) {
    std::complex<double> z, dz;
    if (m == nyq) {
      const double kn = grid.nyquist();
      z = u_hat[m] * std::cos(kn * y);
      dz = u_hat[m] * (-kn * std::sin(kn * y));
    } else {
      z = u_hat[m] * std::polar(1.0, -kappa[m] * y);
      dz = std::complex<double>(0.0, -kappa[m]) * z;
    }
    const double w = weight(m, nyq);
    s_lvm += w * dot(lvm_hat_[m], z);
    s_lvp += w * dot(lvp_hat_[m], z);
    s_dq += w * dot(dq_hat_[m], z);
    d_lvm += w * dot(lvm_hat_[m], dz);
    d_lvp += w * dot(lvp_hat_[m], dz);
    d_dq += w * dot(dq_hat_[m], dz);
  }
  const double sc = grid.spacing() / static_cast<double>(grid.size());
  const Eigen::Vector3d a = gram_.solve(Eigen::Vector3d(sc * s_dq - dq_q_, sc * s_lvm - lvm_q_, sc * s_lvp - lvp_q_));
  const Eigen::Vector3d da = gram_.solve(Eigen::Vector3d(sc * d_dq, sc * d_lvm, sc * d_lvp));
  Projections p;
  p.a_t = a[0];
  p.a_plus = a[1];
  p.a_minus = a[2];
  p.da_t = da[0];
  return p;
}

double Chart::gauge(const Field& u, double y) const { return projections(forward(u), y).a_t; }

Coords Chart::fit_modulation(const Field& u, double y_guess) const {
  require_same_grid(u, frame_.q);
  const Spectrum u_hat = forward(u);
  const double width = 1.0 / std::sqrt(frame_.params.c);
  double y = y_guess;
  Projections p = projections(u_hat, y);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    if (!std::isfinite(p.a_t) || !std::isfinite(p.da_t)) break;
    if (std::abs(p.da_t) < 1e-6) {
      throw ChartError("degenerate chart: d a_T / dy = " + std::to_string(p.da_t));
    }
    double step = -p.a_t / p.da_t;
    // Safeguard: never move more than half a soliton width per iteration, and
    // backtrack while the gauge residual grows.
    if (std::abs(step) > 0.5 * width) step = std::copysign(0.5 * width, step);
    Projections trial = projections(u_hat, y + step);
    for (int back = 0; back < 30 && std::abs(trial.a_t) > std::abs(p.a_t) && std::abs(step) > 1e-15; ++back) {
      step *= 0.5;
      trial = projections(u_hat, y + step);
    }
    // Residual no longer decreasing: rounding floor reached.
    const bool stalled = std::abs(trial.a_t) >= std::abs(p.a_t) && std::abs(p.a_t) < 1e-12;
    y += step;
    p = trial;
    if (stalled || std::abs(step) <= 1e-14 * std::max(1.0, std::abs(y)) || p.a_t == 0.0) {
      converged = true;
      break;
    }
  }
  if (!converged || std::abs(p.a_t) > 1e-10) {
    throw ChartError("modulation fit did not converge (state outside chart), a_T = " + std::to_string(p.a_t));
  }

  Coords c;
  c.y = y;
  c.a_plus = p.a_plus;
  c.a_minus = p.a_minus;
  Spectrum s = q_hat_;
  for (std::size_t m = 0; m < s.size(); ++m) {
    s[m] += c.a_plus * vp_hat_[m] + c.a_minus * vm_hat_[m] + p.a_t * dq_hat_[m];
  }
  translate_spectrum(*frame_.grid, s, y);
  c.v_e = u - inverse(frame_.grid, s);
  return c;
}

CoordSample Chart::sample(const Field& u, double y_guess) const {
  CoordSample s;
  try {
    const Coords c = fit_modulation(u, y_guess);
    s.y = c.y;
    s.a_plus = c.a_plus;
    s.a_minus = c.a_minus;
    s.ve_h1 = norm_h1(c.v_e);
  } catch (const ChartError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s = CoordSample{nan, nan, nan, nan, false};
  }
  return s;
}

Distance Chart::distance_to_manifold(const Field& u) const {
  require_same_grid(u, frame_.q);
  const Grid& grid = *frame_.grid;
  const std::size_t n = grid.size();
  const std::size_t nyq = n / 2;
  const auto kappa = grid.half_wavenumbers();
  const Spectrum u_hat = forward(u);

  // g(y) = <u, Q(. + y)>_{H1}; at y = s h this is an inverse DFT.
  Spectrum corr(nyq + 1);
  for (std::size_t m = 0; m <= nyq; ++m) {
    const double w = m == nyq ? 1.0 : 1.0 + kappa[m] * kappa[m];
    corr[m] = std::conj(u_hat[m]) * q_hat_[m] * w;
  }
  std::vector<double> g(n);
  detail::RealFft::get(n).inverse(corr.data(), g.data());
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    if (g[s] > g[best]) best = s;
  }
  double y = (best < nyq ? static_cast<double>(best) : static_cast<double>(best) - static_cast<double>(n)) * grid.spacing();

  // Newton on g'(y) = 0 from the best grid shift.
  auto derivs = [&](double yy, double& d1, double& d2) {
    d1 = d2 = 0.0;
    for (std::size_t m = 0; m <= nyq; ++m) {
      const double km = m == nyq ? grid.nyquist() : kappa[m];
      const double w = weight(m, nyq) * (m == nyq ? 1.0 : 1.0 + km * km);
      const std::complex<double> z = corr[m] * std::polar(1.0, km * yy);
      // Re(z) is the contribution to g; derivatives of Re(z e^{i k y}).
      d1 += w * (-km * z.imag());
      d2 += w * (-km * km * z.real());
    }
  };
  for (int it = 0; it < 30; ++it) {
    double d1, d2;
    derivs(y, d1, d2);
    if (!(d2 < 0.0)) break;
    double step = -d1 / d2;
    if (std::abs(step) > grid.spacing()) step = std::copysign(grid.spacing(), step);
    y += step;
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(y))) break;
  }

  Spectrum r = q_hat_;
  translate_spectrum(grid, r, y);
  for (std::size_t m = 0; m <= nyq; ++m) r[m] = u_hat[m] - r[m];
  return Distance{std::sqrt(std::max(0.0, spectral_inner_h1(grid, r, r))), y};
}

ModulationResidual modulation_residual(std::span<const double> times, std::span<const CoordSample> coords,
                                       double lambda) {
  if (times.size() != coords.size()) throw std::invalid_argument("times and coordinates differ in length");
  if (times.size() < 5) throw std::invalid_argument("need at least five samples for centred differences");
  const double h = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * std::abs(h)) {
      throw std::invalid_argument("modulation residual needs uniform sampling");
    }
  }
  if (std::abs(h) * lambda >= 0.05) {
    throw std::invalid_argument("sampling too coarse: |dt_sample| * lambda = " + std::to_string(std::abs(h) * lambda));
  }
  for (const auto& c : coords) {
    if (!c.valid) throw ChartError("trajectory leaves the chart");
  }
  ModulationResidual out;
  auto d = [&](std::size_t i, double CoordSample::*f) {
    return (coords[i - 2].*f - 8.0 * (coords[i - 1].*f) + 8.0 * (coords[i + 1].*f) - coords[i + 2].*f) / (12.0 * h);
  };
  for (std::size_t i = 2; i + 2 < times.size(); ++i) {
    const auto& c = coords[i];
    out.times.push_back(times[i]);
    out.r_plus.push_back(std::abs(d(i, &CoordSample::a_plus) - lambda * c.a_plus));
    out.r_minus.push_back(std::abs(d(i, &CoordSample::a_minus) + lambda * c.a_minus));
    out.size.push_back(std::abs(c.a_plus) + std::abs(c.a_minus) + c.ve_h1);
  }
  return out;
}

}  // namespace gkdv
