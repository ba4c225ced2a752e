#pragma once

#include <string>
#include <vector>

#include "porocomb/function_spec.hpp"
#include "porocomb/mild_solver.hpp"

namespace porocomb {

enum class PerturbTarget { phi, a, b, c, lambda, d, q, K, qhat1, qhat2, y };

PerturbTarget parse_perturb_target(const std::string& name);
std::string to_string(PerturbTarget target);

/// One perturbed field: target + s * direction. `layer` is 0-based; for q it
/// selects the interface between layers layer and layer+1; qhat targets ignore it.
struct Perturbation {
  PerturbTarget target = PerturbTarget::phi;
  Index layer = 0;
  FunctionSpec direction;
};

struct PerturbationSpec {
  std::vector<Perturbation> items;
  std::vector<double> levels = default_levels();

  /// s_j = 2^{-j}, j = 0 .. count-1.
  static std::vector<double> default_levels(int count = 9);
};

/// Base problem with every target replaced by target + s * direction. Perturbing
/// c also updates its stored derivative; perturbing y adds a fuel offset.
Problem build_perturbed(const Problem& base, const PerturbationSpec& spec, double s);

/// s * max over items of max(sup |direction|, discrete L2 norm of direction).
double perturbation_size(const Problem& base, const PerturbationSpec& spec, double s);

struct DependenceLevel {
  int j = 0;
  double s = 0;
  double eps = 0;           // perturbation_size at s
  double delta = 0;         // sup-metric between perturbed and base trajectories
  double ratio = 0;         // delta_j / delta_{j-1}; NaN when undefined
  double delta0 = 0, delta1 = 0, delta3 = 0, delta4 = 0;  // sup over t of each term
  double delta_sum = 0;     // sup over t of delta0 + delta1 + delta3 + delta4
  double beta = 0;          // growth estimate of the perturbed problem
  double bound = 0;         // delta_sum (1 + T c e^{cT}), c = 1 + e^{beta T}
  double bound_kappa = 0;   // same with c = (1 + e^{beta T}) kappa_global
  bool skipped = false;
  bool noise = false;       // perturbation below 100 x solver tolerance
  std::string note;
};

struct DependenceReport {
  double T = 0;
  double base_sup_norm = 0;
  std::vector<DependenceLevel> levels;
  int crossover = -1;             // first level whose ratio leaves [0.4, 0.6]; -1 if none
  bool monotone = true;           // every computed ratio <= 1.05
  double symmetric_ratio = 0;     // delta(-s) / delta(s) at the smallest computed level; NaN if not run
};

DependenceReport dependence_study(const Problem& base, const PerturbationSpec& spec, double T,
                                  const SolverConfig& cfg, bool symmetric_check = true);

struct OperatorProbeRow {
  double s = 0;
  double operator_diff = 0;    // l2_norm((L_h^s - L_h) psi) at time t
  double propagator_diff = 0;  // l2_norm((U^s - U)(t + steps dt, t) psi)
};

std::vector<OperatorProbeRow> operator_convergence_probe(const Problem& base,
                                                         const PerturbationSpec& spec,
                                                         const std::vector<double>& levels,
                                                         const Field<double>& probe, double t,
                                                         double dt, int steps,
                                                         const StepScheme& scheme);

}  // namespace porocomb
