#pragma once

#include <random>

#include "porocomb/model.hpp"
#include "porocomb/problem.hpp"

namespace porocomb::testing {

struct Constants {
  double a = 1, b = 0, c = 0, lambda = 1, d = 0, K = 0, A = 0, q = 0, qhat = 0;
};

/// n layers of constant coefficients on `grid`; every interface gets q, both ends qhat.
inline LayerParams constant_params(Index n, const Grid<double>& grid, const Constants& k,
                                   double u_e = 0, double E = 1) {
  const Index m = grid.m;
  LayerParams p;
  p.a = Field<double>::Constant(n, m, k.a);
  p.b = Field<double>::Constant(n, m, k.b);
  p.c = Field<double>::Constant(n, m, k.c);
  p.c_x = Field<double>::Zero(n, m);
  p.d = Field<double>::Constant(n, m, k.d);
  p.lambda = Field<double>::Constant(n, m, k.lambda);
  p.K = Field<double>::Constant(n, m, k.K);
  p.A = Field<double>::Constant(n, m, k.A);
  p.q = Field<double>::Constant(n - 1, m, k.q);
  p.qhat1 = Profile<double>::Constant(m, k.qhat);
  p.qhat2 = Profile<double>::Constant(m, k.qhat);
  p.u_e = u_e;
  p.E = E;
  return p;
}

inline FuelHistory constant_fuel(Index n, double y) {
  return FuelHistory::prescribed(std::vector<FuelFamily>(static_cast<std::size_t>(n),
                                                         FuelFamily::constant(y)));
}

/// Gaussian exp(-(x - center)^2 / (2 var)) in every layer.
inline Field<double> gaussian(Index n, const Grid<double>& grid, double center, double var,
                              double amplitude = 1) {
  Field<double> f(n, grid.m);
  for (Index j = 0; j < grid.m; ++j) {
    const double x = grid.node(j) - center;
    f.col(j).setConstant(amplitude * std::exp(-x * x / (2 * var)));
  }
  return f;
}

inline Field<double> random_field(Index n, Index m, std::mt19937& rng, double scale = 1) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Field<double> f(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) f(i, j) = scale * U(rng);
  return f;
}

}  // namespace porocomb::testing
