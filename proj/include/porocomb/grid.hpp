#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

#include "porocomb/error.hpp"

namespace porocomb {

using Index = Eigen::Index;

/// Uniform grid on the truncated line [x_min, x_max] with m nodes.
template <typename Scalar = double>
struct Grid {
  Scalar x_min{};
  Scalar x_max{};
  Index m{};
  Scalar dx{};

  Scalar node(Index j) const { return x_min + static_cast<Scalar>(j) * dx; }

  Eigen::Array<Scalar, Eigen::Dynamic, 1> nodes() const {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> x(m);
    for (Index j = 0; j < m; ++j) x(j) = node(j);
    return x;
  }

  bool operator==(const Grid& o) const {
    return x_min == o.x_min && x_max == o.x_max && m == o.m;
  }
};

template <typename Scalar>
Grid<Scalar> make_grid(Scalar x_min, Scalar x_max, Index m) {
  if (!(x_min < x_max)) throw InvalidArgument("make_grid: x_min must be < x_max");
  if (m < 3) throw InvalidArgument("make_grid: need m >= 3 nodes for second differences");
  Grid<Scalar> g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.m = m;
  g.dx = (x_max - x_min) / static_cast<Scalar>(m - 1);
  return g;
}

/// n layers by m nodes; each layer is a contiguous row.
template <typename Scalar = double>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar = double>
using Profile = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
bool all_finite(const Eigen::ArrayBase<Derived>& a) {
  return a.allFinite();
}

/// Rectangle-rule L2 norm of each layer: sqrt(dx * sum_j psi_ij^2).
template <typename Derived>
Profile<typename Derived::Scalar> layer_l2_norms(const Eigen::ArrayBase<Derived>& field,
                                                 typename Derived::Scalar dx) {
  using S = typename Derived::Scalar;
  if (!field.allFinite()) throw InvalidArgument("l2_norm: non-finite entries");
  Profile<S> out(field.rows());
  for (Index i = 0; i < field.rows(); ++i) {
    S sum = 0;
    for (Index j = 0; j < field.cols(); ++j) sum += field(i, j) * field(i, j);
    out(i) = std::sqrt(dx * sum);
  }
  return out;
}

/// Product-space norm: max over layers of the layer L2 norms.
template <typename Derived>
typename Derived::Scalar l2_norm(const Eigen::ArrayBase<Derived>& field,
                                 typename Derived::Scalar dx) {
  if (field.rows() == 0) return 0;
  return layer_l2_norms(field, dx).maxCoeff();
}

template <typename Derived, typename Scalar>
Scalar l2_norm(const Eigen::ArrayBase<Derived>& field, const Grid<Scalar>& grid) {
  return l2_norm(field, grid.dx);
}

/// Time-node sequence of fields on a shared grid.
template <typename Scalar = double>
struct Trajectory {
  std::vector<Scalar> times;
  std::vector<Field<Scalar>> states;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  void push_back(Scalar t, Field<Scalar> state) {
    if (!times.empty() && !(t > times.back()))
      throw InvalidArgument("Trajectory: times must be strictly increasing");
    if (!states.empty() && (state.rows() != states.front().rows() ||
                            state.cols() != states.front().cols()))
      throw InvalidArgument("Trajectory: all states must share shape");
    times.push_back(t);
    states.push_back(std::move(state));
  }

  Scalar sup_norm(Scalar dx) const {
    Scalar s = 0;
    for (const auto& st : states) s = std::max(s, l2_norm(st, dx));
    return s;
  }
};

/// d(a, b) = max over shared time nodes of l2_norm(a(t) - b(t)).
template <typename Scalar>
Scalar sup_metric(const Trajectory<Scalar>& a, const Trajectory<Scalar>& b, Scalar dx) {
  if (a.times.size() != b.times.size())
    throw InvalidArgument("sup_metric: trajectories have different node counts");
  Scalar d = 0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (a.times[k] != b.times[k])
      throw InvalidArgument("sup_metric: time nodes differ");
    if (a.states[k].rows() != b.states[k].rows() || a.states[k].cols() != b.states[k].cols())
      throw InvalidArgument("sup_metric: state shapes differ");
    d = std::max(d, l2_norm(a.states[k] - b.states[k], dx));
  }
  return d;
}

template <typename Scalar>
Scalar sup_metric(const Trajectory<Scalar>& a, const Trajectory<Scalar>& b,
                  const Grid<Scalar>& grid) {
  return sup_metric(a, b, grid.dx);
}

/// Guard-band diagnostic: largest |value| within `band` nodes of either end,
/// relative to the field's sup over all nodes (0 for the zero field).
template <typename Derived>
typename Derived::Scalar boundary_leakage(const Eigen::ArrayBase<Derived>& field, Index band) {
  using S = typename Derived::Scalar;
  S sup = field.abs().maxCoeff();
  if (sup == S(0)) return 0;
  const Index m = field.cols();
  band = std::min(band, m);
  S edge = 0;
  for (Index i = 0; i < field.rows(); ++i)
    for (Index j = 0; j < band; ++j)
      edge = std::max({edge, std::abs(field(i, j)), std::abs(field(i, m - 1 - j))});
  return edge / sup;
}

inline constexpr Index kGuardBandNodes = 10;
inline constexpr double kGuardBandTolerance = 1e-8;

}  // namespace porocomb
