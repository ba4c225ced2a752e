#pragma once

#include <vector>

#include "porocomb/grid.hpp"
#include "porocomb/model.hpp"
#include "porocomb/tridiagonal.hpp"

namespace porocomb {

enum class AdvectionScheme {
  automatic,  // central where the cell Peclet number |beta| dx / alpha <= 2, upwind elsewhere
  upwind,     // first-order upwind everywhere
};

struct StepScheme {
  double theta = 0.5;  // 0.5 Crank-Nicolson, 1 backward Euler
  AdvectionScheme advection = AdvectionScheme::automatic;
};

/// Discrete L_h psi = -alpha psi'' + beta psi' for one layer with homogeneous
/// Neumann closure (zero flux through the end faces, zero-gradient ghost for advection).
Tridiagonal<double> assemble_operator(const Profile<double>& alpha, const Profile<double>& beta,
                                      double dx, AdvectionScheme scheme);

/// One theta-step of the homogeneous problem, per layer:
///   (I + theta dt L_h) u_new = (I - (1 - theta) dt L_h) u_old.
class Propagator {
 public:
  struct LayerStep {
    Tridiagonal<double> implicit_part;
    Tridiagonal<double> explicit_part;
    ThomasSolver<double> solver;
  };

  Propagator() = default;
  Propagator(std::vector<LayerStep> layers, double t_from, double t_to, double theta);

  static Propagator identity(Index layers, double t);

  double t_from() const { return t_from_; }
  double t_to() const { return t_to_; }
  double dt() const { return t_to_ - t_from_; }
  double theta() const { return theta_; }
  bool is_identity() const { return layers_.empty(); }
  Index layers() const { return static_cast<Index>(layers_.size()); }
  const LayerStep& layer(Index i) const { return layers_[static_cast<std::size_t>(i)]; }

  Field<double> apply(const Field<double>& field) const;
  void apply_in_place(Field<double>& field) const;

  /// Adjoint action P^T on one layer (Euclidean, equal to the dx-weighted adjoint).
  Profile<double> apply_transpose(Index layer, const Profile<double>& v) const;
  Profile<double> apply_layer(Index layer, const Profile<double>& v) const;

 private:
  std::vector<LayerStep> layers_;
  double t_from_ = 0, t_to_ = 0, theta_ = 0.5;
};

/// Builds the step from precomputed coefficients.
Propagator build_propagator(const Coefficients& coeffs, double dx, double t_from, double t_to,
                            const StepScheme& scheme);

/// Builds the step with coefficients frozen at the midpoint (t_from + t_to)/2.
Propagator build_propagator(const LayerParams& p, const FuelHistory& fuel,
                            const Grid<double>& grid, double t_from, double t_to,
                            const StepScheme& scheme);

/// Composition of n_steps uniform sub-steps over [t_from, t_to].
Field<double> propagate(const LayerParams& p, const FuelHistory& fuel, const Grid<double>& grid,
                        double t_from, double t_to, int n_steps, const Field<double>& field,
                        const StepScheme& scheme);

}  // namespace porocomb
