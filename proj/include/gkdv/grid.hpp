#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gkdv {

using Spectrum = std::vector<std::complex<double>>;

// Uniform periodic grid on [-L, L) with N nodes, x_j = -L + j*h.
class Grid {
 public:
  Grid(std::size_t n_points, double half_length);

  static std::shared_ptr<const Grid> make(std::size_t n_points, double half_length);

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }
  double half_length() const { return half_length_; }
  double spacing() const { return spacing_; }
  double x(std::size_t j) const { return -half_length_ + static_cast<double>(j) * spacing_; }
  std::vector<double> nodes() const;

  // Full wavenumber table in FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1 (times pi/L).
  std::span<const double> wavenumbers() const { return wavenumbers_; }
  // Non-negative half used with real transforms, kappa_0 .. kappa_{N/2}.
  std::span<const double> half_wavenumbers() const {
    return std::span<const double>(wavenumbers_).first(n_ / 2 + 1);
  }
  double nyquist() const { return half_wavenumbers_nyquist_; }

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && half_length_ == other.half_length_;
  }

 private:
  std::size_t n_;
  double half_length_;
  double spacing_;
  double half_wavenumbers_nyquist_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  template <class F>
  static Field sample(GridPtr grid, F&& f) {
    Field out(grid);
    for (std::size_t j = 0; j < grid->size(); ++j) out.values_[j] = f(grid->x(j));
    return out;
  }

  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t j) { return values_[j]; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  // this += s * other
  Field& axpy(double s, const Field& other);

  double max_abs() const;
  bool all_finite() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);

void require_same_grid(const Field& a, const Field& b);

// Real FFT wrappers. Unnormalized forward; inverse divides by N.
Spectrum forward(const Field& f);
Field inverse(const GridPtr& grid, const Spectrum& spec);

// Spectral derivative of order 1, 2 or 3. The Nyquist mode is dropped for
// every order, so D2 == D1 * D1 on the grid.
Field spectral_derivative(const Field& f, int order);
void apply_derivative(const Grid& grid, Spectrum& spec, int order);

double inner_l2(const Field& f, const Field& g);
double inner_h1(const Field& f, const Field& g);
double norm_l2(const Field& f);
double norm_h1(const Field& f);

// Rectangle-rule inner products computed from real-FFT spectra.
double spectral_inner_l2(const Grid& grid, const Spectrum& f, const Spectrum& g);
double spectral_inner_h1(const Grid& grid, const Spectrum& f, const Spectrum& g);

// f(. + y) via the trigonometric interpolant.
Field translate(const Field& f, double y);
void translate_spectrum(const Grid& grid, Spectrum& spec, double y);

// Band-limited interpolant of f evaluated at arbitrary x (periodic extension).
double interpolate(const Grid& grid, const Spectrum& spec, double x);

}  // namespace gkdv
