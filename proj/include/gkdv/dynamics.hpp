#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gkdv/coords.hpp"

namespace gkdv {

enum class ExitFlag { Completed, BlowUp, NonFinite, Stopped };

const char* to_string(ExitFlag f);

struct Trajectory {
  std::vector<double> times;
  std::vector<CoordSample> coords;
  std::vector<double> energy;
  std::vector<double> momentum;
  std::vector<double> dist;
  // Checkpointed states and their times (only when requested).
  std::vector<double> state_times;
  std::vector<Field> states;
  ExitFlag exit = ExitFlag::Completed;
  double drift_budget = 1e-8;

  std::size_t size() const { return times.size(); }
};

// What a stop predicate sees at each sample.
struct SampleView {
  double t;
  const Field& u;
  const CoordSample& coords;
  double dist;
};

struct EvolveOptions {
  double t_end = 1.0;        // negative integrates backward
  double dt = 5e-4;          // step magnitude
  double sample_every = 0.025;
  int checkpoint_every = 0;  // store every n-th sample state; 0 = none
  bool record_coords = true;
  double drift_budget = 1e-8;
  std::function<bool(const SampleView&)> stop;
};

// Fourth-order exponential time differencing in Fourier space. The linear
// part i(c k + k^3) is integrated exactly; the update is written as
// increments on v so that an equilibrium is reproduced to rounding.
class Propagator {
 public:
  enum class Mode { Nonlinear, Linearized };

  // `potential` (k Q^{k-1}) is required for the linearized mode.
  Propagator(const WaveParams& p, GridPtr grid, double dt, Mode mode, const Field* potential = nullptr);

  void step(Spectrum& v);
  double dt() const { return dt_; }
  const Grid& grid() const { return *grid_; }

 private:
  void nonlinear(const Spectrum& v, Spectrum& out);

  WaveParams p_;
  GridPtr grid_;
  double dt_;
  Mode mode_;
  std::vector<double> potential_;
  std::vector<std::complex<double>> lin_, qf_, f1_, f2_, f3_, dk_;
  // workspace
  std::vector<double> phys_;
  Spectrum nv_, na_, nb_, nc_, a_, b_, c_, tmp_;
};

// Mean of phi_1..phi_3 over 32 points on the unit circle around z.
void phi_functions(std::complex<double> z, std::complex<double>& phi1, std::complex<double>& phi2,
                   std::complex<double>& phi3);

// Nonlinear flow. When `chart` is given, modulation coordinates and the
// distance to the manifold are recorded at every sample.
Trajectory evolve(const Field& u0, const WaveParams& p, const EvolveOptions& opt, const Chart* chart = nullptr);

// Linearized flow V_t = J L_c V around the frame's profile. Samples record
// the projections (a_T in the y slot), the quadratic form <L V, V>/2 in the
// energy slot and <Q, V> in the momentum slot; both are invariants.
Trajectory evolve_linearized(const Field& v0, const SpectralFrame& frame, const EvolveOptions& opt);

struct ConservationReport {
  double energy_drift = 0.0;
  double momentum_drift = 0.0;
  double budget = 0.0;
  bool within_budget = true;
};

ConservationReport conservation_report(const Trajectory& traj);

// Fraction of spectral energy in the top third of the resolved modes.
double high_mode_fraction(const Field& u);

}  // namespace gkdv
