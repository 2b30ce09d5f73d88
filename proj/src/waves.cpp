#include "gkdv/waves.hpp"

#include <cmath>
#include <string>

#include "gkdv/errors.hpp"

namespace gkdv {

WaveParams::WaveParams(int k_, double c_) : k(k_), c(c_) { validate(); }

void WaveParams::validate() const {
  if (k <= 5) {
    throw ConfigError("k = " + std::to_string(k) + " is not supercritical; the lab requires k > 5");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("wave speed c must be positive and finite");
}

namespace {

// sech(a)^{2/(k-1)} computed without overflow.
double sech_power(double a, double expo) {
  const double e = std::exp(-2.0 * std::abs(a));
  return std::pow(2.0 * std::exp(-std::abs(a)) / (1.0 + e), expo);
}

double unit_profile(int k, double z) {
  const double km1 = static_cast<double>(k - 1);
  const double amp = std::pow(0.5 * (k + 1), 1.0 / km1);
  return amp * sech_power(0.5 * km1 * z, 2.0 / km1);
}

}  // namespace

double soliton_value(const WaveParams& p, double x) {
  const double sc = std::sqrt(p.c);
  return std::pow(p.c, 1.0 / (p.k - 1)) * unit_profile(p.k, sc * x);
}

double soliton_slope(const WaveParams& p, double x) {
  const double sc = std::sqrt(p.c);
  const double z = sc * x;
  const double q = unit_profile(p.k, z);
  return -std::pow(p.c, 1.0 / (p.k - 1)) * sc * q * std::tanh(0.5 * (p.k - 1) * z);
}

Field soliton_profile(const WaveParams& p, const GridPtr& grid, double shift) {
  p.validate();
  Field q = Field::sample(grid, [&](double x) { return soliton_value(p, x + shift); });
  const double peak = soliton_value(p, 0.0);
  const double edge = std::max(std::abs(q[0]), std::abs(q[grid->size() - 1]));
  if (edge > kBoundaryGuard * peak) {
    throw ResolutionError("soliton not decayed at the domain edge: |Q(+-L)|/Q(0) = " + std::to_string(edge / peak) +
                          "; increase half_length");
  }
  return q;
}

Field dc_profile(const WaveParams& p, const GridPtr& grid, double shift) {
  p.validate();
  const double km1 = static_cast<double>(p.k - 1);
  const double sc = std::sqrt(p.c);
  const double amp = std::pow(p.c, 1.0 / km1);
  return Field::sample(grid, [&](double x) {
    const double xs = x + shift;
    const double z = sc * xs;
    const double q = unit_profile(p.k, z);
    return amp * q * (1.0 / (km1 * p.c) - std::tanh(0.5 * km1 * z) * xs / (2.0 * sc));
  });
}

Field rescale(const Field& f, int k, double lambda, const GridPtr& target) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("rescale factor must be positive");
  const Grid& src = f.grid();
  const double amp = std::pow(lambda, 2.0 / (k - 1));
  // Target nodes that are exactly the scaled source nodes: the interpolant
  // reproduces the samples, so copy them.
  if (target->size() == src.size() &&
      std::abs(lambda * target->half_length() - src.half_length()) <= 1e-14 * src.half_length()) {
    Field out(target, f.values());
    out *= amp;
    return out;
  }
  const double peak = f.max_abs();
  const double edge = std::max(std::abs(f[0]), std::abs(f[src.size() - 1]));
  const Spectrum spec = forward(f);
  Field out(target);
  bool outside = false;
  for (std::size_t j = 0; j < target->size(); ++j) {
    const double xs = lambda * target->x(j);
    if (xs < -src.half_length() || xs >= src.half_length()) {
      outside = true;
      out[j] = 0.0;
    } else {
      out[j] = amp * interpolate(src, spec, xs);
    }
  }
  if (outside && edge > kBoundaryGuard * peak) {
    throw ResolutionError("rescale samples outside the decayed region of the source field");
  }
  return out;
}

Field rescale(const Field& f, int k, double lambda) { return rescale(f, k, lambda, f.grid_ptr()); }

double energy(const Field& f, int k) {
  const Field fx = spectral_derivative(f, 1);
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    double pw = 1.0;
    for (int p = 0; p < k + 1; ++p) pw *= f[j];
    acc += 0.5 * fx[j] * fx[j] - pw / (k + 1);
  }
  return acc * f.grid().spacing();
}

double momentum(const Field& f) { return 0.5 * inner_l2(f, f); }

GridPtr scaled_grid(std::size_t n_points, double half_length_at_unit_speed, double c) {
  return Grid::make(n_points, half_length_at_unit_speed / std::sqrt(c));
}

}  // namespace gkdv
