#pragma once

#include <Eigen/Dense>

#include "gkdv/grid.hpp"
#include "gkdv/waves.hpp"

namespace gkdv {

// Dense collocation matrix of a linear operator on a fixed grid.
class OperatorMatrix {
 public:
  OperatorMatrix(GridPtr grid, Eigen::MatrixXd m);

  const Eigen::MatrixXd& matrix() const { return m_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  Field apply(const Field& f) const;

 private:
  GridPtr grid_;
  Eigen::MatrixXd m_;
};

// L_c = c - d_xx - k Q_c^{k-1}(. + shift)
OperatorMatrix assemble_Lc(const WaveParams& p, const GridPtr& grid, double shift = 0.0);
// J L_c = d_x L_c
OperatorMatrix assemble_JLc(const WaveParams& p, const GridPtr& grid, double shift = 0.0);

// Matrix-free action of L_c around a given profile.
Field apply_Lc(const WaveParams& p, const Field& profile, const Field& f);

// Linearized data around Q_c(. + shift).
//   lambda      growth rate of the unstable mode
//   v_plus/minus  eigenfunctions of J L_c for +lambda / -lambda, scaled so that
//               <L V+, V-> = 1, |V+|_2 = |V-|_2 and <L V+, Q> > 0
//   a_c         coercivity constant of L_c on the neutral subspace, H1 norm
//   parity      sigma with V-(x) = sigma V+(-x) (profile centred at 0)
struct SpectralFrame {
  WaveParams params;
  GridPtr grid;
  double shift = 0.0;
  double lambda = 0.0;
  double a_c = 0.0;
  double parity = 0.0;
  Field q, dx_q, dc_q;
  Field v_plus, v_minus;
  Field l_v_plus, l_v_minus;

  // Same frame around Q_c(. + shift + y); fields are translated.
  SpectralFrame translated(double y) const;
};

SpectralFrame unstable_eigenpair(const WaveParams& p, const GridPtr& grid, double shift = 0.0);

// min <L v, v> / |v|_{H1}^2 over v with a_T = a_+ = a_- = 0.
double coercivity_constant(const SpectralFrame& frame);

struct Decomposition {
  double a_t = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  Field v_e;
};

// Gram matrix of the constraints (d_x Q, L V-, L V+) against the basis
// (d_x Q, V+, V-). Close to [[|d_x Q|^2, *, *], [0, 1, 0], [0, 0, 1]]; solving
// with it instead of using the identity makes the discrete projection exact.
Eigen::Matrix3d projection_gram(const SpectralFrame& frame);

Decomposition project(const SpectralFrame& frame, const Field& v);

// Eigenvalues of a real square matrix with the largest and the smallest real
// part. Throws ResolutionError if the largest is not real or not above
// `threshold`.
struct ExtremeEigenvalues {
  double largest = 0.0;
  double smallest = 0.0;
};
ExtremeEigenvalues extreme_real_eigenvalues(const Eigen::MatrixXd& m, double threshold = 1e-6);

// Real eigenvalue of largest real part and its eigenvector, found by power
// iteration on the Cayley transform (I - tau M)^{-1} (I + tau M). Throws
// ResolutionError if the iteration does not settle on a real eigenvalue
// above `threshold`.
struct DominantMode {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
};
DominantMode dominant_real_mode(const Eigen::MatrixXd& m, double tau, double threshold = 1e-6);

}  // namespace gkdv
