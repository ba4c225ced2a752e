#pragma once

#include <string>
#include <vector>

#include "porocomb/evolution.hpp"
#include "porocomb/hypothesis.hpp"
#include "porocomb/problem.hpp"

namespace porocomb {

enum class WindowMode { theoretical, adaptive };

/// continuation: eps(t0) = min{1, |u(t0)| / (kappa R(t0) + mu0)} per window.
/// contraction:  T' from contraction_step, recomputed from |u(t0)| per window.
enum class WindowRule { continuation, contraction };

/// homogeneous: u0(t_k) = U(t_k, t0) phi.  constant: u0(t_k) = phi.
enum class SeedKind { homogeneous, constant };

struct SolverConfig {
  StepScheme scheme;
  double picard_tol = 1e-10;     // gap <= tol * (1 + sup |u|)
  int picard_max_iters = 50;
  int time_steps_per_window = 8; // used when dt == 0
  double dt = 0;                 // > 0: uniform global time grid with step T / ceil(T / dt)
  WindowMode window_mode = WindowMode::theoretical;
  WindowRule window_rule = WindowRule::continuation;
  double adaptive_window = 0;    // initial adaptive window; 0 means the remaining horizon
  int max_halvings = 10;
  SeedKind seed = SeedKind::homogeneous;
  double blowup_ceiling = 1e12;
  double coupled_outer_tol = 1e-8;
  int coupled_outer_max = 60;
  int beta_probes = 33;
  bool check_apriori = true;

  void validate() const;
};

/// Propagated-trapezoid running integral of U(t, s) f(s) ds over uniform steps:
///   I_{k+1} = P_k (I_k + h/2 f_k) + h/2 f_{k+1},  I_0 = 0.
class DuhamelAccumulator {
 public:
  explicit DuhamelAccumulator(const Field<double>& shape)
      : value_(Field<double>::Zero(shape.rows(), shape.cols())) {}

  void advance(const Propagator& step, const Field<double>& f_from, const Field<double>& f_to) {
    const double h = step.dt();
    value_ += 0.5 * h * f_from;
    step.apply_in_place(value_);
    value_ += 0.5 * h * f_to;
  }

  const Field<double>& value() const { return value_; }

 private:
  Field<double> value_;
};

/// Everything the map Phi needs on one window that does not depend on the iterate:
/// step propagators, fuel at the nodes, and the homogeneous evolution of phi.
class WindowContext {
 public:
  WindowContext(const LayerParams& params, const FuelHistory& fuel, const Grid<double>& grid,
                std::vector<double> times, const Field<double>& phi, const StepScheme& scheme);

  const std::vector<double>& times() const { return times_; }
  const Trajectory<double>& homogeneous() const { return homogeneous_; }
  const std::vector<Propagator>& steps() const { return steps_; }
  const std::vector<Field<double>>& fuel() const { return fuel_; }
  const LayerParams& params() const { return *params_; }
  double dx() const { return dx_; }

  /// Phi u on the window's nodes.
  Trajectory<double> apply(const Trajectory<double>& u) const;

 private:
  const LayerParams* params_;
  double dx_;
  std::vector<double> times_;
  std::vector<Propagator> steps_;
  std::vector<Field<double>> fuel_;
  Trajectory<double> homogeneous_;
};

/// Phi u(t) = U(t, t0) phi + integral_{t0}^{t} U(t, s) f(s, u(s)) ds on traj's nodes.
Trajectory<double> picard_map(const Trajectory<double>& traj, const Field<double>& phi,
                              const LayerParams& params, const FuelHistory& fuel,
                              const Grid<double>& grid, const StepScheme& scheme);

Trajectory<double> seed_trajectory(const WindowContext& ctx, SeedKind kind);

struct LocalResult {
  Trajectory<double> trajectory;
  int iterations = 0;
  std::vector<double> gaps;  // sup-metric between successive iterates
  double max_gap_ratio = 0;  // over pairs whose previous gap is above round-off
  double max_iterate_norm = 0;
};

/// Picard iteration on one window from the chosen seed. Throws DivergenceError
/// when the budget runs out or, in adaptive mode, when the gap grows three times in a row.
/// When `radius` > 0 every iterate is tested against the ball of that radius
/// (BallViolation in theoretical mode, a warning in `warnings` otherwise).
LocalResult solve_local(const WindowContext& ctx, const SolverConfig& cfg, double radius = 0,
                        std::vector<std::string>* warnings = nullptr);

struct WindowRecord {
  double t_start = 0, t_end = 0;
  int steps = 0;
  int iterations = 0;
  double max_gap_ratio = 0;
  double radius = 0;     // ball radius tested, 0 when not tested
  double epsilon = 0;    // window length proposed by the rule
  bool floored = false;  // proposed window shorter than one step
  int halvings = 0;
};

struct GlobalResult {
  Trajectory<double> trajectory;
  std::vector<WindowRecord> windows;
  HypothesisReport audit;
  double sup_norm = 0;
  double apriori_bound = 0;
  bool apriori_ok = true;
  std::vector<std::string> warnings;
};

/// Time step used for beta probes and the audit when the solve runs on [0, T].
double audit_step(const SolverConfig& cfg, double T);

/// Chains local solves over [0, T]; each window restarts from the previous terminal state.
GlobalResult solve_global(const Problem& problem, double T, const SolverConfig& cfg);

struct CoupledResult {
  GlobalResult temperature;
  Trajectory<double> fuel;
  int outer_iterations = 0;
  std::vector<double> outer_changes;  // sup-metric between successive temperature iterates
};

/// Outer fixed point over (u, y): freeze y, solve for u, re-integrate the fuel
/// along the time grid, repeat. Requires cfg.dt > 0 so every sweep shares the nodes.
CoupledResult solve_coupled(const Problem& problem, double T, const SolverConfig& cfg);

/// Trapezoidal exponential fuel integration along u's time nodes starting from y0.
Trajectory<double> integrate_fuel(const Field<double>& y0, const Trajectory<double>& u,
                                  const LayerParams& params);

}  // namespace porocomb
