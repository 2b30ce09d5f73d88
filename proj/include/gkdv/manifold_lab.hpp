#pragma once

#include <optional>
#include <vector>

#include "gkdv/dynamics.hpp"
#include "gkdv/random.hpp"

namespace gkdv {

struct LabSettings {
  double dt = 5e-4;
  double delta_stay = 0.1;
  double delta_chart = 0.3;
  double t_stay_units = 15.0;   // T_stay = t_stay_units / lambda
  double horizon_units = 30.0;  // probe horizon in units of 1/lambda
  double sample_units = 0.05;   // sampling interval in units of 1/lambda
  double tol = 1e-10;
  double s_max = 1e-2;
  // The exit side is the sign of the watched coordinate when it first reaches
  // this size. Later on the dispersive side a+ is dominated by quadratic
  // terms and turns positive before dist reaches delta_stay.
  double side_threshold = 2e-3;

  // Defaults for speed c: dt scales like c^{-3/2} with the growth rate.
  static LabSettings for_speed(double c);
  double t_stay(double lambda) const { return t_stay_units / lambda; }
};

// Smooth random field localized on the soliton scale (Gaussian envelope
// times a short random trigonometric sum).
Field random_smooth_field(const GridPtr& grid, double c, SeededRng& rng, int modes = 6);
// Random direction in the neutral subspace, unit H1 norm.
Field random_center_field(const SpectralFrame& frame, SeededRng& rng);

enum class Side { Stable = 0, Unstable = 1 };

// One trajectory classification used by shooting.
struct ProbeOutcome {
  double s = 0.0;
  bool exited = false;
  double exit_time = 0.0;  // |t| at exit, or the horizon
  int side = 0;            // sign of the watched coordinate at its first side_threshold crossing
};

// Evolve u0 forward (watch a+) or backward (watch a-) until dist >= delta_stay
// or the horizon.
ProbeOutcome probe(const Chart& chart, const Field& u0, bool backward, const LabSettings& s, double horizon,
                   Trajectory* keep = nullptr);

struct RateFit {
  double slope = 0.0;
  double eps = 0.0;
  int retries = 0;
  double t_begin = 0.0, t_end = 0.0;
  Trajectory trajectory;
};

// Least-squares slope of log|a+| (forward, U0 = Q + eps V+) or of log|a-|
// against -t (backward, U0 = Q + eps V-) over [1, 6]/lambda.
RateFit instability_rate(const Chart& chart, double eps, const LabSettings& s, bool backward = false);

struct ShootResult {
  double a_star = 0.0;
  double bracket_width = 0.0;
  double lo = 0.0, hi = 0.0;
  ProbeOutcome lo_probe, hi_probe;
  double stay_time = 0.0;  // of the accepted midpoint
  bool stays = false;      // stay_time >= T_stay
  int probes = 0;
};

struct Bracket {
  double center = 0.0;
  double half_width = 0.0;
};

// Bisection on s in U0 = Q + W + s V+ (forward time). W must have no a+
// component.
ShootResult shoot_cs(const Chart& chart, const Field& w, const LabSettings& s,
                     std::optional<Bracket> warm = std::nullopt);
// Mirror: U0 = Q + W + s V-, backward time, watched coordinate a-.
ShootResult shoot_cu(const Chart& chart, const Field& w, const LabSettings& s,
                     std::optional<Bracket> warm = std::nullopt);

struct CenterShot {
  double a_plus = 0.0;
  double a_minus = 0.0;
  int rounds = 0;
  int probes = 0;
  double forward_stay = 0.0;
  double backward_stay = 0.0;
  std::vector<double> history_plus, history_minus;
};

// Alternating shots a+ <- h_cs(a-), a- <- h_cu(a+) for Q + Ve + a+ V+ + a- V-.
CenterShot shoot_center(const Chart& chart, const Field& ve, const LabSettings& s);

struct ExitRecord {
  double initial_offset = 0.0;
  double exit_time = 0.0;
  int exit_side = 0;
  double dist_at_exit = 0.0;
};

// U0 = Q + W + (a_manifold + offset) V+; first time dist reaches delta_stay,
// interpolated in log(dist) between samples.
ExitRecord exit_time(const Chart& chart, double offset, const Field& w, double a_manifold, const LabSettings& s,
                     double t_max_units = 40.0);

struct StabilityRow {
  double eps = 0.0;
  double a_plus = 0.0, a_minus = 0.0;
  double excursion = 0.0;     // max dist over |t| <= T_horizon
  double max_ve_h1 = 0.0;
  double ve_h1_initial = 0.0;
  double pinning_min = 0.0;   // min over t of (E + cP)(U) - (E + cP)(Q)
  double pinning_max = 0.0;
  Trajectory forward, backward;
};

std::vector<StabilityRow> orbital_stability_run(const Chart& chart, const Field& ve_unit,
                                                const std::vector<double>& sizes, double t_horizon,
                                                const LabSettings& s);

struct RescaleCheck {
  double a_plus_mapped = 0.0;  // a+ coordinate of the rescaled state at speed c2
  double a_star = 0.0;         // re-shot value at c2
  double deviation = 0.0;
  ShootResult shot;
};

// Rescale a state on the approximate W^cs at the chart's speed to the speed
// of `target`, then re-shoot along V+ of the target.
RescaleCheck rescale_invariance_check(const Chart& source, const Chart& target, const Field& state,
                                      const LabSettings& target_settings);

// Energy-momentum functional E + cP.
double energy_momentum(const Field& u, const WaveParams& p);

}  // namespace gkdv
