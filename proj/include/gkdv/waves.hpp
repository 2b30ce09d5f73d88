#pragma once

#include "gkdv/grid.hpp"

namespace gkdv {

// Nonlinearity exponent k (integer, k > 5) and wave speed c > 0.
struct WaveParams {
  int k = 7;
  double c = 1.0;

  WaveParams() = default;
  WaveParams(int k_, double c_);
  void validate() const;
};

// Closed-form Q_c(x).
double soliton_value(const WaveParams& p, double x);
// d/dx Q_c(x).
double soliton_slope(const WaveParams& p, double x);

// Relative magnitude at the domain edge above which a profile is rejected.
inline constexpr double kBoundaryGuard = 1e-12;

// Q_c(x + shift) sampled on the grid; throws ResolutionError if the profile
// is not decayed to kBoundaryGuard at the domain edge.
Field soliton_profile(const WaveParams& p, const GridPtr& grid, double shift = 0.0);

// d/dc Q_c(x + shift), from the chain rule on the closed form.
Field dc_profile(const WaveParams& p, const GridPtr& grid, double shift = 0.0);

// T^lambda f (x) = lambda^{2/(k-1)} f(lambda x), evaluated on `target`
// through the band-limited interpolant of f. Points with |lambda x| outside
// the source box are set to zero, which requires f to be decayed there.
Field rescale(const Field& f, int k, double lambda, const GridPtr& target);
Field rescale(const Field& f, int k, double lambda);

double energy(const Field& f, int k);
double momentum(const Field& f);

// Standard grid for speed c: same node count, half-length scaled by 1/sqrt(c).
GridPtr scaled_grid(std::size_t n_points, double half_length_at_unit_speed, double c);

}  // namespace gkdv
