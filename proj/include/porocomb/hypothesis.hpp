#pragma once

#include <string>
#include <vector>

#include "porocomb/evolution.hpp"
#include "porocomb/problem.hpp"

namespace porocomb {

struct Violation {
  std::string hypothesis;  // "H1", "H2", "H3"
  Index layer = -1;        // -1 when not layer-specific
  Index node = -1;         // -1 when not node-specific
  std::string message;
};

struct H1Result {
  bool pass = true;
  double k1 = 0, k2 = 0;
  double max_first_difference = 0;   // sup |D a|, |D b|, |D c|, |D lambda|
  double max_second_difference = 0;  // sup |D^2 ...|
  std::vector<Violation> violations;
};

struct H2Result {
  bool pass = true;
  double k3 = 0;
  double max_y_x = 0, max_y_xx = 0, max_y_t = 0, max_y_tx = 0;
  std::vector<Violation> violations;
};

struct H3Result {
  bool pass = true;
  double sup_d = 0, sup_q = 0, sup_K = 0;
  double qhat1_l2 = 0, qhat2_l2 = 0;
  double qhat1_leakage = 0, qhat2_leakage = 0;
  std::vector<Violation> violations;
};

H1Result check_H1(const LayerParams& p, const Grid<double>& grid);

/// Prescribed families are probed on (grid nodes) x (probe_count times in [0, T])
/// with analytic derivatives; coupled mode checks y0; tabulated fuel checks every node.
H2Result check_H2(const FuelHistory& fuel, FuelMode mode, const Grid<double>& grid, double T,
                  int probe_count = 33);

H3Result check_H3(const LayerParams& p, const Grid<double>& grid);

/// Per-layer Lipschitz constants of u -> f(t, u) on the ball of radius rho,
/// valid for every fuel field with 0 <= y <= fuel_bound.
std::vector<double> lipschitz_kappa_layers(const LayerParams& p, double fuel_bound, double rho,
                                           double dx);
double lipschitz_kappa(const LayerParams& p, double fuel_bound, double rho, double dx);

/// Bound on sup_t ||f(t, 0)||; only the ambient-loss terms survive at u = 0.
double source_at_zero_bound(const LayerParams& p, double dx);

/// mu(rho) = kappa(rho) rho + sup_t ||f(t, 0)||.
double bound_mu(const LayerParams& p, double fuel_bound, double rho, double dx);

struct BetaEstimate {
  double beta = 0;          // floored at zero
  double max_step_norm = 0; // largest ||P||_2 over probes and layers
  int max_iterations = 0;
};

/// beta = max over probe steps [t, t+dt] of ln ||P||_2 / dt, floored at zero.
/// Probes collapse to one when the coefficients do not depend on t.
BetaEstimate growth_beta(const LayerParams& p, const FuelHistory& fuel, const Grid<double>& grid,
                         const std::vector<double>& probe_times, double dt,
                         const StepScheme& scheme, int max_iterations = 2000,
                         double tolerance = 1e-8);

/// Largest eigenvalue of the symmetric part of -L_h for one layer of a step
/// (the logarithmic 2-norm of -L_h). Requires theta > 0.
double step_log_norm(const Propagator& P, Index layer);

/// Upper bound on ||P||_2 for one layer. For theta > 0 it follows from
/// step_log_norm and is sharp to O(dt^2) in ln ||P||; otherwise, or when
/// theta dt omega >= 1/2, ||P||_2 is computed by Lanczos on P^T P, converged
/// once the Ritz residual is within `tolerance` of the top Ritz value.
/// `iterations` reports the Lanczos steps used (zero for the bound).
double step_norm(const Propagator& P, Index layer, int max_iterations, double tolerance,
                 int* iterations = nullptr);

/// Lanczos estimate of ||P||_2 for one layer (a lower bound that converges to it).
double lanczos_step_norm(const Propagator& P, Index layer, int max_iterations, double tolerance,
                         int* iterations = nullptr);

/// 0.9 * min{T, 1/(kappa e^{beta T}), (R e^{-beta T} - rho)/mu}; zero kappa or mu drop their term.
double contraction_step(double kappa, double beta, double mu, double rho, double R, double T);

/// min{1, phi_norm / (kappa R(t0) + mu)} with R(t0) = 2 phi_norm e^{beta (t0 + 1)}.
double continuation_epsilon(double t0, double phi_norm, double kappa, double mu, double beta);

std::vector<double> probe_times(double T, int count);

struct HypothesisReport {
  double T = 0;
  double k1 = 0, k2 = 0, k3 = 0;
  double kappa = 0;         // on the ball of radius R
  double kappa_global = 0;  // valid on the whole space
  double mu = 0;            // on the ball of radius R
  double mu0 = 0;           // sup_t ||f(t, 0)||
  double beta = 0;
  double rho = 0, R = 0, T_prime = 0;
  double step_dt = 0;
  int probe_count = 0;
  H1Result h1;
  H2Result h2;
  H3Result h3;
  std::vector<std::string> notes;

  bool passed() const { return h1.pass && h2.pass && h3.pass; }
  std::vector<Violation> violations() const;
};

/// Full audit: (H1)-(H3), kappa, mu, beta, the balls rho = ||phi|| and
/// R = 2 rho e^{beta T}, and the contraction window T'.
HypothesisReport audit(const Problem& problem, double T, double step_dt, const StepScheme& scheme,
                       int probe_count = 33);

/// "key: value" lines nested by section.
std::string to_text(const HypothesisReport& r);

}  // namespace porocomb
