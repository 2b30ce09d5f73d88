#pragma once

#include "gkdv/coords.hpp"
#include "gkdv/spectral.hpp"

namespace fixtures {

// Standard resolution for k = 7, c = 1: N = 2048 on [-50, 50).
inline const gkdv::GridPtr& grid() {
  static const gkdv::GridPtr g = gkdv::Grid::make(2048, 50.0);
  return g;
}

inline const gkdv::WaveParams& params() {
  static const gkdv::WaveParams p(7, 1.0);
  return p;
}

// The eigen-solve takes a few seconds; share one per test binary.
inline const gkdv::SpectralFrame& frame() {
  static const gkdv::SpectralFrame f = gkdv::unstable_eigenpair(params(), grid());
  return f;
}

inline const gkdv::Chart& chart() {
  static const gkdv::Chart c(frame());
  return c;
}

// Values frozen from mpmath quadrature of the closed-form profile (30 digits).
inline constexpr double kMomentumQ = 1.1129126745223053846;   // P(Q), k = 7, c = 1
inline constexpr double kEnergyQ = 0.22258253490446107691;    // E(Q), k = 7, c = 1
inline constexpr double kMomentumQ2 = 0.99149247513405852049;  // P(Q_2), k = 7
inline constexpr double kEnergyQ2 = 0.3965969900536234082;     // E(Q_2), k = 7

}  // namespace fixtures
