#pragma once

#include <vector>

#include "porocomb/evolution.hpp"
#include "porocomb/problem.hpp"

namespace porocomb {

enum class OracleIntegrator { implicit_trapezoid, explicit_rk4 };

struct OracleConfig {
  OracleIntegrator integrator = OracleIntegrator::implicit_trapezoid;
  double dt = 1e-3;
  double newton_tol = 1e-12;  // on the update, relative to 1 + |u|_inf
  int newton_max_iters = 25;
  AdvectionScheme advection = AdvectionScheme::automatic;
};

/// Method-of-lines integration of du/dt = -L_h(t) u + f(t, u) on [0, T] with
/// step T / ceil(T / dt). L_h(t) is assembled with the fuel at the stage time.
/// Coupled problems are integrated with the fuel frozen at y0.
Trajectory<double> mol_solve(const Problem& problem, double T, const OracleConfig& cfg);

/// Jacobian of source_f with respect to u: diagonal d f_i / d u_i and the
/// couplings d f_i / d u_{i+1} (upper, n-1 rows) and d f_i / d u_{i-1} (lower, n-1 rows).
struct SourceJacobian {
  Field<double> diag, upper, lower;
};
SourceJacobian source_jacobian(const LayerParams& p, const Field<double>& y,
                               const Field<double>& u);

/// Linear interpolation of a trajectory in time; throws outside its range.
Field<double> interpolate(const Trajectory<double>& traj, double t);

struct Comparison {
  std::vector<double> times;
  std::vector<double> errors;  // l2_norm(a(t) - b(t)) at a's nodes
  double sup_metric = 0;
  double reference_norm = 0;   // sup-norm of a
  double relative = 0;         // sup_metric / reference_norm
};

/// Errors of b against a on a's nodes, b interpolated in time where needed.
Comparison compare(const Trajectory<double>& a, const Trajectory<double>& b, double dx);

/// log2(e_k / e_{k+1}) for a ladder of errors at successively halved steps.
std::vector<double> observed_orders(const std::vector<double>& errors);

}  // namespace porocomb
