#include "porocomb/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace porocomb {

namespace {

struct Operators {
  std::vector<Tridiagonal<double>> layers;
  Field<double> y;
  double max_alpha = 0;
};

Operators operators_at(const LayerParams& p, const FuelHistory& fuel, const Grid<double>& grid,
                       double t, AdvectionScheme scheme) {
  Operators ops;
  ops.y = fuel.at(t, grid);
  const Coefficients c = coefficient_fields(p, ops.y);
  ops.max_alpha = c.alpha.maxCoeff();
  for (Index i = 0; i < p.layers(); ++i)
    ops.layers.push_back(assemble_operator(c.alpha.row(i).transpose(), c.beta.row(i).transpose(),
                                           grid.dx, scheme));
  return ops;
}

Field<double> apply_operator(const Operators& ops, const Field<double>& u) {
  Field<double> out(u.rows(), u.cols());
  Profile<double> tmp(u.cols());
  for (Index i = 0; i < u.rows(); ++i) {
    ops.layers[static_cast<std::size_t>(i)].multiply(u.row(i), tmp);
    out.row(i) = tmp.transpose();
  }
  return out;
}

Field<double> rhs(const LayerParams& p, const Operators& ops, const Field<double>& u) {
  return source_f(p, ops.y, u) - apply_operator(ops, u);
}

}  // namespace

SourceJacobian source_jacobian(const LayerParams& p, const Field<double>& y,
                               const Field<double>& u) {
  const Index n = p.layers();
  const Index m = p.nodes();
  if (n < 2) throw InvalidArgument("source_jacobian: at least two layers are required");
  SourceJacobian J{Field<double>(n, m), Field<double>::Zero(n - 1, m),
                   Field<double>::Zero(n - 1, m)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      const double den = p.a(i, j) + p.b(i, j) * y(i, j);
      if (!(den > 0)) throw InvalidArgument("source_jacobian: a + b y <= 0");
      const double v = u(i, j);
      double d = -p.c_x(i, j) +
                 p.K(i, j) * p.b(i, j) * y(i, j) * arrhenius_g(v, p.E) +
                 (p.K(i, j) * p.b(i, j) * v + p.d(i, j)) * y(i, j) * arrhenius_g_prime(v, p.E);
      if (i + 1 < n) {
        d -= p.q(i, j);
        J.upper(i, j) = p.q(i, j) / den;
      }
      if (i > 0) {
        d -= p.q(i - 1, j);
        J.lower(i - 1, j) = p.q(i - 1, j) / den;
      }
      if (i == 0) d -= p.qhat1(j);
      if (i == n - 1) d -= p.qhat2(j);
      J.diag(i, j) = d / den;
    }
  }
  return J;
}

Trajectory<double> mol_solve(const Problem& problem, double T, const OracleConfig& cfg) {
  if (!(cfg.dt > 0)) throw InvalidArgument("mol_solve: dt must be positive");
  if (!(T > 0)) throw InvalidArgument("mol_solve: T must be positive");
  const LayerParams& p = problem.params;
  const Grid<double>& grid = problem.grid;
  const FuelHistory fuel = effective_fuel(problem);
  const Index n = p.layers();
  const Index m = grid.m;
  if (problem.phi.rows() != n || problem.phi.cols() != m)
    throw InvalidArgument("mol_solve: initial data shape mismatch");

  const long N = static_cast<long>(std::ceil(T / cfg.dt - 1e-9));
  const double h = T / static_cast<double>(N);
  auto time = [&](long k) { return k == N ? T : static_cast<double>(k) * h; };

  Trajectory<double> traj;
  Field<double> u = problem.phi;
  traj.push_back(0.0, u);

  if (cfg.integrator == OracleIntegrator::explicit_rk4) {
    for (long k = 0; k < N; ++k) {
      const double t = time(k);
      const Operators o0 = operators_at(p, fuel, grid, t, cfg.advection);
      const Operators oh = operators_at(p, fuel, grid, t + 0.5 * h, cfg.advection);
      const Operators o1 = operators_at(p, fuel, grid, time(k + 1), cfg.advection);
      const double alpha_max = std::max({o0.max_alpha, oh.max_alpha, o1.max_alpha});
      if (h > 0.4 * grid.dx * grid.dx / alpha_max)
        throw InvalidArgument("mol_solve: explicit step violates dt <= 0.4 dx^2 / max alpha");
      const Field<double> k1 = rhs(p, o0, u);
      const Field<double> k2 = rhs(p, oh, u + 0.5 * h * k1);
      const Field<double> k3 = rhs(p, oh, u + 0.5 * h * k2);
      const Field<double> k4 = rhs(p, o1, u + h * k3);
      u += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      traj.push_back(time(k + 1), u);
    }
    return traj;
  }

  // Implicit trapezoid: v - u + h/2 (L1 v - f1(v)) + h/2 (L0 u - f0(u)) = 0, Newton on v.
  using SpMat = Eigen::SparseMatrix<double>;
  const Index size = n * m;
  auto idx = [m](Index i, Index j) { return static_cast<int>(i * m + j); };
  Operators o0 = operators_at(p, fuel, grid, 0.0, cfg.advection);
  for (long k = 0; k < N; ++k) {
    const Operators o1 = operators_at(p, fuel, grid, time(k + 1), cfg.advection);
    const Field<double> known = u + 0.5 * h * rhs(p, o0, u);
    Field<double> v = u;
    bool converged = false;
    for (int it = 0; it < cfg.newton_max_iters; ++it) {
      const Field<double> residual = v - known - 0.5 * h * rhs(p, o1, v);
      const SourceJacobian Jf = source_jacobian(p, o1.y, v);
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(static_cast<std::size_t>(size) * 5);
      for (Index i = 0; i < n; ++i) {
        const Tridiagonal<double>& L = o1.layers[static_cast<std::size_t>(i)];
        for (Index j = 0; j < m; ++j) {
          const int r = idx(i, j);
          trip.emplace_back(r, r, 1.0 + 0.5 * h * (L.diag(j) - Jf.diag(i, j)));
          if (j > 0) trip.emplace_back(r, idx(i, j - 1), 0.5 * h * L.sub(j));
          if (j + 1 < m) trip.emplace_back(r, idx(i, j + 1), 0.5 * h * L.super(j));
          if (i + 1 < n) trip.emplace_back(r, idx(i + 1, j), -0.5 * h * Jf.upper(i, j));
          if (i > 0) trip.emplace_back(r, idx(i - 1, j), -0.5 * h * Jf.lower(i - 1, j));
        }
      }
      SpMat J(size, size);
      J.setFromTriplets(trip.begin(), trip.end());
      Eigen::SparseLU<SpMat> lu;
      lu.compute(J);
      if (lu.info() != Eigen::Success) throw DivergenceError("mol_solve: singular Newton matrix: " + lu.lastErrorMessage());
      Eigen::VectorXd rvec = Eigen::Map<const Eigen::VectorXd>(residual.data(), size);
      const Eigen::VectorXd delta = lu.solve(rvec);
      v -= Eigen::Map<const Field<double>>(delta.data(), n, m);
      if (!v.allFinite()) break;
      if (delta.lpNorm<Eigen::Infinity>() <= cfg.newton_tol * (1 + v.abs().maxCoeff())) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw DivergenceError("mol_solve: Newton iteration did not converge at t = " +
                            std::to_string(time(k + 1)));
    u = v;
    traj.push_back(time(k + 1), u);
    o0 = o1;
  }
  return traj;
}

// ---------------------------------------------------------------------------

Field<double> interpolate(const Trajectory<double>& traj, double t) {
  if (traj.empty()) throw InvalidArgument("interpolate: empty trajectory");
  const auto& ts = traj.times;
  const double span = ts.back() - ts.front();
  const double slack = 1e-12 * std::max(1.0, std::abs(span));
  if (t < ts.front() - slack || t > ts.back() + slack)
    throw InvalidArgument("interpolate: time outside the trajectory range");
  if (t <= ts.front()) return traj.states.front();
  if (t >= ts.back()) return traj.states.back();
  const auto it = std::lower_bound(ts.begin(), ts.end(), t);
  const std::size_t k1 = static_cast<std::size_t>(it - ts.begin());
  if (ts[k1] == t) return traj.states[k1];
  const std::size_t k0 = k1 - 1;
  const double w = (t - ts[k0]) / (ts[k1] - ts[k0]);
  return (1 - w) * traj.states[k0] + w * traj.states[k1];
}

Comparison compare(const Trajectory<double>& a, const Trajectory<double>& b, double dx) {
  if (a.empty() || b.empty()) throw InvalidArgument("compare: empty trajectory");
  if (a.times.back() < b.times.front() || b.times.back() < a.times.front())
    throw InvalidArgument("compare: disjoint time ranges");
  Comparison c;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a.times[k];
    const Field<double> bt = interpolate(b, t);
    if (bt.rows() != a.states[k].rows() || bt.cols() != a.states[k].cols())
      throw InvalidArgument("compare: state shapes differ");
    const double e = l2_norm(a.states[k] - bt, dx);
    c.times.push_back(t);
    c.errors.push_back(e);
    c.sup_metric = std::max(c.sup_metric, e);
    c.reference_norm = std::max(c.reference_norm, l2_norm(a.states[k], dx));
  }
  c.relative = c.reference_norm > 0 ? c.sup_metric / c.reference_norm : c.sup_metric;
  return c;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    out.push_back(std::log2(errors[k] / errors[k + 1]));
  return out;
}

}  // namespace porocomb
