#include "gkdv/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "gkdv/errors.hpp"

namespace gkdv {

Grid::Grid(std::size_t n_points, double half_length) : n_(n_points), half_length_(half_length) {
  if (n_ < 128 || (n_ & (n_ - 1)) != 0) {
    throw ConfigError("n_points must be a power of two >= 128, got " + std::to_string(n_));
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ConfigError("half_length must be positive and finite");
  }
  spacing_ = 2.0 * half_length_ / static_cast<double>(n_);
  const double k0 = std::numbers::pi / half_length_;
  wavenumbers_.resize(n_);
  const auto half = static_cast<long>(n_ / 2);
  for (long m = 0; m < static_cast<long>(n_); ++m) {
    const long s = m < half ? m : m - static_cast<long>(n_);
    wavenumbers_[m] = k0 * static_cast<double>(s);
  }
  // The half spectrum stores +N/2 at index N/2; keep the signed value in
  // wavenumbers() and expose the positive magnitude separately.
  half_wavenumbers_nyquist_ = k0 * static_cast<double>(half);
}

std::shared_ptr<const Grid> Grid::make(std::size_t n_points, double half_length) {
  return std::make_shared<const Grid>(n_points, half_length);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw std::invalid_argument("field size does not match grid");
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += s * other.values_[j];
  return *this;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

Spectrum forward(const Field& f) {
  const auto& fft = detail::RealFft::get(f.size());
  Spectrum out(f.size() / 2 + 1);
  fft.forward(f.values().data(), out.data());
  return out;
}

Field inverse(const GridPtr& grid, const Spectrum& spec) {
  if (spec.size() != grid->spectrum_size()) throw std::invalid_argument("spectrum size does not match grid");
  Field out(grid);
  detail::RealFft::get(grid->size()).inverse(spec.data(), out.values().data());
  out *= 1.0 / static_cast<double>(grid->size());
  return out;
}

void apply_derivative(const Grid& grid, Spectrum& spec, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("derivative order must be 1, 2 or 3, got " + std::to_string(order));
  }
  const auto kappa = grid.half_wavenumbers();
  const std::complex<double> i(0.0, 1.0);
  const std::size_t nyq = grid.size() / 2;
  for (std::size_t m = 0; m < nyq; ++m) {
    std::complex<double> factor(1.0, 0.0);
    for (int p = 0; p < order; ++p) factor *= i * kappa[m];
    spec[m] *= factor;
  }
  spec[nyq] = 0.0;
}

Field spectral_derivative(const Field& f, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("derivative order must be 1, 2 or 3, got " + std::to_string(order));
  }
  Spectrum s = forward(f);
  apply_derivative(f.grid(), s, order);
  return inverse(f.grid_ptr(), s);
}

double inner_l2(const Field& f, const Field& g) {
  require_same_grid(f, g);
  double acc = 0.0;
  const auto& a = f.values();
  const auto& b = g.values();
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc * f.grid().spacing();
}

double inner_h1(const Field& f, const Field& g) {
  require_same_grid(f, g);
  return inner_l2(f, g) + inner_l2(spectral_derivative(f, 1), spectral_derivative(g, 1));
}

double norm_l2(const Field& f) { return std::sqrt(inner_l2(f, f)); }
double norm_h1(const Field& f) { return std::sqrt(inner_h1(f, f)); }

namespace {
double spectral_inner(const Grid& grid, const Spectrum& f, const Spectrum& g, bool h1) {
  const std::size_t nyq = grid.size() / 2;
  const auto kappa = grid.half_wavenumbers();
  double acc = 0.0;
  for (std::size_t m = 0; m <= nyq; ++m) {
    double w = (m == 0 || m == nyq) ? 1.0 : 2.0;
    if (h1 && m != nyq) w *= 1.0 + kappa[m] * kappa[m];
    acc += w * (f[m].real() * g[m].real() + f[m].imag() * g[m].imag());
  }
  const double n = static_cast<double>(grid.size());
  return acc * grid.spacing() / n;
}
}  // namespace

double spectral_inner_l2(const Grid& grid, const Spectrum& f, const Spectrum& g) {
  return spectral_inner(grid, f, g, false);
}

double spectral_inner_h1(const Grid& grid, const Spectrum& f, const Spectrum& g) {
  return spectral_inner(grid, f, g, true);
}

void translate_spectrum(const Grid& grid, Spectrum& spec, double y) {
  const std::size_t nyq = grid.size() / 2;
  const auto kappa = grid.half_wavenumbers();
  for (std::size_t m = 1; m < nyq; ++m) spec[m] *= std::polar(1.0, kappa[m] * y);
  // Only the cosine part of the Nyquist mode survives sampling on the grid.
  spec[nyq] *= std::cos(grid.nyquist() * y);
}

Field translate(const Field& f, double y) {
  if (y == 0.0) return f;
  Spectrum s = forward(f);
  translate_spectrum(f.grid(), s, y);
  return inverse(f.grid_ptr(), s);
}

double interpolate(const Grid& grid, const Spectrum& spec, double x) {
  const std::size_t nyq = grid.size() / 2;
  const auto kappa = grid.half_wavenumbers();
  const double xi = x + grid.half_length();
  double acc = spec[0].real();
  for (std::size_t m = 1; m < nyq; ++m) {
    const double ph = kappa[m] * xi;
    acc += 2.0 * (spec[m].real() * std::cos(ph) - spec[m].imag() * std::sin(ph));
  }
  acc += spec[nyq].real() * std::cos(grid.nyquist() * xi);
  return acc / static_cast<double>(grid.size());
}

}  // namespace gkdv
