#include "gkdv/spectral.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"
#include "gkdv/errors.hpp"

namespace gkdv {

OperatorMatrix::OperatorMatrix(GridPtr grid, Eigen::MatrixXd m) : grid_(std::move(grid)), m_(std::move(m)) {
  if (static_cast<std::size_t>(m_.rows()) != grid_->size() || m_.rows() != m_.cols()) {
    throw std::invalid_argument("operator matrix does not match grid");
  }
}

Field OperatorMatrix::apply(const Field& f) const {
  Field out(grid_);
  Eigen::Map<const Eigen::VectorXd> in(f.values().data(), f.size());
  Eigen::Map<Eigen::VectorXd>(out.values().data(), out.size()) = m_ * in;
  return out;
}

namespace {

// Circulant differentiation matrix of the given order.
Eigen::MatrixXd derivative_matrix(const GridPtr& grid, int order) {
  const std::size_t n = grid->size();
  Field e0(grid);
  e0[0] = 1.0;
  const Field col = spectral_derivative(e0, order);
  Eigen::MatrixXd d(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) d(i, j) = col[(i + n - j) % n];
  }
  return d;
}

Field potential(const WaveParams& p, const Field& q) {
  Field v(q.grid_ptr());
  for (std::size_t j = 0; j < q.size(); ++j) v[j] = p.k * std::pow(q[j], p.k - 1);
  return v;
}

Eigen::MatrixXd lc_matrix(const WaveParams& p, const GridPtr& grid, double shift) {
  const Field q = soliton_profile(p, grid, shift);
  const Field pot = potential(p, q);
  Eigen::MatrixXd m = -derivative_matrix(grid, 2);
  for (std::size_t j = 0; j < grid->size(); ++j) m(j, j) += p.c - pot[j];
  return m;
}

Field reflect(const Field& f) {
  const std::size_t n = f.size();
  Field out(f.grid_ptr());
  for (std::size_t j = 0; j < n; ++j) out[j] = f[(n - j) % n];
  return out;
}

Field to_field(const GridPtr& grid, const Eigen::VectorXd& v) {
  return Field(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

OperatorMatrix assemble_Lc(const WaveParams& p, const GridPtr& grid, double shift) {
  return OperatorMatrix(grid, lc_matrix(p, grid, shift));
}

OperatorMatrix assemble_JLc(const WaveParams& p, const GridPtr& grid, double shift) {
  const Eigen::MatrixXd l = lc_matrix(p, grid, shift);
  const std::size_t n = grid->size();
  Eigen::MatrixXd jl(n, n);
  Field col(grid);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = l(i, j);
    const Field d = spectral_derivative(col, 1);
    for (std::size_t i = 0; i < n; ++i) jl(i, j) = d[i];
  }
  return OperatorMatrix(grid, std::move(jl));
}

Field apply_Lc(const WaveParams& p, const Field& profile, const Field& f) {
  require_same_grid(profile, f);
  Field out = spectral_derivative(f, 2);
  out *= -1.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] += (p.c - p.k * std::pow(profile[j], p.k - 1)) * f[j];
  }
  return out;
}

ExtremeEigenvalues extreme_real_eigenvalues(const Eigen::MatrixXd& m, double threshold) {
  const Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw ResolutionError("eigenvalue iteration did not converge");
  const Eigen::VectorXcd w = es.eigenvalues();
  Eigen::Index imax = 0, imin = 0;
  for (Eigen::Index i = 1; i < w.size(); ++i) {
    if (w[i].real() > w[imax].real()) imax = i;
    if (w[i].real() < w[imin].real()) imin = i;
  }
  if (!(w[imax].real() > threshold)) {
    throw ResolutionError("no real eigenvalue above " + std::to_string(threshold) +
                          " (non-supercritical input or under-resolved grid)");
  }
  if (std::abs(w[imax].imag()) > 1e-8 * std::max(1.0, std::abs(w[imax].real()))) {
    throw ResolutionError("leading eigenvalue is not real: " + std::to_string(w[imax].real()) + " + " +
                          std::to_string(w[imax].imag()) + "i");
  }
  return {w[imax].real(), w[imin].real()};
}

DominantMode dominant_real_mode(const Eigen::MatrixXd& m, double tau, double threshold) {
  const Eigen::Index n = m.rows();
  // Cayley transform C = (I - tau M)^{-1} (I + tau M) maps Re mu > 0 outside
  // the unit circle and the imaginary axis onto it.
  Eigen::MatrixXd minus = -tau * m;
  minus.diagonal().array() += 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(minus);
  auto apply_c = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return lu.solve(x + tau * (m * x)); };
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.37 * i + 0.1);
  x /= x.norm();
  DominantMode out;
  double rho = 0.0;
  for (int it = 1; it <= 400; ++it) {
    Eigen::VectorXd y = apply_c(x);
    rho = x.dot(y);
    const double res = (y - rho * x).norm();
    x = y / y.norm();
    if (rho < 0.0) x = -x;
    out.iterations = it;
    // The residual floor is set by rounding in the LU solves (about 1e-13 |rho|).
    if (res < 1e-11 * std::abs(rho)) {
      double acc = 0.0;
      for (int extra = 0; extra < 4; ++extra) {
        Eigen::VectorXd z = apply_c(x);
        acc += x.dot(z);
        x = z / z.norm();
      }
      rho = 0.25 * acc;
      out.vector = x;
      out.eigenvalue = (rho - 1.0) / (tau * (rho + 1.0));
      if (!(out.eigenvalue > threshold)) {
        throw ResolutionError("no real eigenvalue above " + std::to_string(threshold) +
                              " (non-supercritical input or under-resolved grid)");
      }
      return out;
    }
  }
  throw ResolutionError("dominant eigenvalue not isolated or not real (power iteration stalled at rho = " +
                        std::to_string(rho) + ")");
}

SpectralFrame SpectralFrame::translated(double y) const {
  SpectralFrame out = *this;
  out.shift = shift + y;
  for (Field* f : {&out.q, &out.dx_q, &out.dc_q, &out.v_plus, &out.v_minus, &out.l_v_plus, &out.l_v_minus}) {
    *f = translate(*f, y);
  }
  return out;
}

SpectralFrame unstable_eigenpair(const WaveParams& p, const GridPtr& grid, double shift) {
  p.validate();
  SpectralFrame fr;
  fr.params = p;
  fr.grid = grid;
  fr.shift = shift;
  fr.q = soliton_profile(p, grid, shift);
  fr.dx_q = spectral_derivative(fr.q, 1);
  fr.dc_q = dc_profile(p, grid, shift);

  const OperatorMatrix jl = assemble_JLc(p, grid, shift);
  // The growth rate scales like c^{3/2}; keep tau * lambda of order one.
  const double tau = 0.5 / std::pow(p.c, 1.5);
  const DominantMode up = dominant_real_mode(jl.matrix(), tau);
  const DominantMode down = dominant_real_mode(-jl.matrix(), tau);
  if (std::abs(up.eigenvalue - down.eigenvalue) > 1e-6 * up.eigenvalue) {
    throw ResolutionError("spectrum of JL is not symmetric: " + std::to_string(up.eigenvalue) + " vs " +
                          std::to_string(-down.eigenvalue));
  }
  fr.lambda = up.eigenvalue;
  Field vp = to_field(grid, up.vector);
  Field vm = to_field(grid, down.vector);

  for (const auto& [v, mu] : {std::pair{&vp, up.eigenvalue}, std::pair{&vm, -down.eigenvalue}}) {
    Field r = jl.apply(*v);
    r.axpy(-mu, *v);
    if (r.max_abs() > 1e-7 * v->max_abs() * std::max(1.0, std::abs(mu))) {
      throw ResolutionError("eigenvector residual too large");
    }
  }

  vp *= 1.0 / norm_l2(vp);
  vm *= 1.0 / norm_l2(vm);
  // <V+, Q> = -<L V+, dc Q> vanishes identically, so the sign is fixed by
  // <L V+, Q> = (1 - k) <V+, Q^k> instead.
  Field lvp = apply_Lc(p, fr.q, vp);
  if (inner_l2(lvp, fr.q) < 0.0) {
    vp *= -1.0;
    lvp *= -1.0;
  }
  double s = inner_l2(lvp, vm);
  if (std::abs(s) < 1e-10) throw ResolutionError("<L V+, V-> vanishes; eigenfunctions degenerate");
  if (s < 0.0) {
    vm *= -1.0;
    s = -s;
  }
  const double scale = 1.0 / std::sqrt(s);
  vp *= scale;
  vm *= scale;
  fr.v_plus = std::move(vp);
  fr.v_minus = std::move(vm);
  fr.l_v_plus = apply_Lc(p, fr.q, fr.v_plus);
  fr.l_v_minus = apply_Lc(p, fr.q, fr.v_minus);

  const Field rv = reflect(translate(fr.v_plus, -shift));
  const Field mv = translate(fr.v_minus, -shift);
  fr.parity = inner_l2(mv, rv) >= 0.0 ? 1.0 : -1.0;

  fr.a_c = coercivity_constant(fr);
  return fr;
}

double coercivity_constant(const SpectralFrame& fr) {
  const GridPtr& grid = fr.grid;
  const auto n = static_cast<Eigen::Index>(grid->size());
  auto as_vec = [](const Field& f) { return Eigen::Map<const Eigen::VectorXd>(f.values().data(), f.size()); };

  Eigen::MatrixXd cons(n, 3);
  cons.col(0) = as_vec(fr.l_v_plus);
  cons.col(1) = as_vec(fr.l_v_minus);
  cons.col(2) = as_vec(fr.dx_q);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(cons);
  const auto h = qr.householderQ();

  Eigen::MatrixXd l = lc_matrix(fr.params, grid, fr.shift);
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n) - derivative_matrix(grid, 2);
  l = h.transpose() * l;
  l = l * h;
  g = h.transpose() * g;
  g = g * h;
  const Eigen::Index m = n - 3;
  Eigen::MatrixXd a = l.bottomRightCorner(m, m);
  Eigen::MatrixXd b = g.bottomRightCorner(m, m);
  a = 0.5 * (a + a.transpose()).eval();
  b = 0.5 * (b + b.transpose()).eval();

  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ResolutionError("generalized eigenvalue problem did not converge");
  return es.eigenvalues()[0];
}

Eigen::Matrix3d projection_gram(const SpectralFrame& fr) {
  const Field* tests[3] = {&fr.dx_q, &fr.l_v_minus, &fr.l_v_plus};
  const Field* basis[3] = {&fr.dx_q, &fr.v_plus, &fr.v_minus};
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = inner_l2(*tests[i], *basis[j]);
  }
  return g;
}

Decomposition project(const SpectralFrame& fr, const Field& v) {
  const Eigen::Vector3d rhs(inner_l2(fr.dx_q, v), inner_l2(fr.l_v_minus, v), inner_l2(fr.l_v_plus, v));
  const Eigen::Vector3d a = projection_gram(fr).partialPivLu().solve(rhs);
  Decomposition d;
  d.a_t = a[0];
  d.a_plus = a[1];
  d.a_minus = a[2];
  d.v_e = v;
  d.v_e.axpy(-d.a_t, fr.dx_q);
  d.v_e.axpy(-d.a_plus, fr.v_plus);
  d.v_e.axpy(-d.a_minus, fr.v_minus);
  return d;
}

}  // namespace gkdv
