#pragma once

#include <span>
#include <vector>

#include "gkdv/spectral.hpp"

namespace gkdv {

// Modulation coordinates of U = Q(. + y) + a+ V+(. + y) + a- V-(. + y) + v_e,
// with the gauge a_T(y) = 0. v_e is stored in the lab frame.
struct Coords {
  double y = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  Field v_e;
};

// Scalar summary of a Coords value, as recorded along trajectories.
struct CoordSample {
  double y = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  double ve_h1 = 0.0;
  bool valid = true;
};

struct Distance {
  double value = 0.0;
  double y = 0.0;  // minimizing translation
};

// Local coordinates near the translation family of one soliton. All
// translation-dependent inner products are evaluated in Fourier space.
class Chart {
 public:
  explicit Chart(SpectralFrame frame);

  const SpectralFrame& frame() const { return frame_; }
  const GridPtr& grid() const { return frame_.grid; }
  double lambda() const { return frame_.lambda; }
  double q_h1() const { return q_h1_; }

  Field embed(const Coords& c) const;
  Field embed(double y, double a_plus, double a_minus) const;

  // Newton solve of a_T(y) = 0 started at y_guess; throws ChartError if the
  // derivative degenerates or the iteration fails.
  Coords fit_modulation(const Field& u, double y_guess = 0.0) const;
  CoordSample sample(const Field& u, double y_guess = 0.0) const;

  // min over y of |U - Q(. + y)|_{H1}.
  Distance distance_to_manifold(const Field& u) const;

  // a_T(y) for the given state; exposed for gauge checks.
  double gauge(const Field& u, double y) const;

 private:
  struct Projections {
    double a_t, a_plus, a_minus, da_t;
  };
  Projections projections(const Spectrum& u_hat, double y) const;

  SpectralFrame frame_;
  Spectrum q_hat_, dq_hat_, vp_hat_, vm_hat_, lvp_hat_, lvm_hat_;
  Eigen::PartialPivLU<Eigen::Matrix3d> gram_;
  double lvm_q_ = 0.0, lvp_q_ = 0.0, dq_q_ = 0.0;
  double q_h1_ = 0.0;
};

// Residuals of the linear modulation law along a sampled trajectory:
//   r+ = |da+/dt - lambda a+|,  r- = |da-/dt + lambda a-|
// from fourth-order centred differences (two samples dropped at each end).
struct ModulationResidual {
  std::vector<double> times;
  std::vector<double> r_plus;
  std::vector<double> r_minus;
  std::vector<double> size;  // |a+| + |a-| + |v_e|_{H1}
};

ModulationResidual modulation_residual(std::span<const double> times, std::span<const CoordSample> coords,
                                       double lambda);

}  // namespace gkdv
