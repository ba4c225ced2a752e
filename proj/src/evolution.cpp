#include "porocomb/evolution.hpp"

#include <cmath>

namespace porocomb {

Tridiagonal<double> assemble_operator(const Profile<double>& alpha, const Profile<double>& beta,
                                      double dx, AdvectionScheme scheme) {
  const Index m = alpha.size();
  if (beta.size() != m || m < 3) throw InvalidArgument("assemble_operator: bad coefficient size");
  Tridiagonal<double> L(m);
  const double idx2 = 1.0 / (dx * dx);
  const double idx = 1.0 / dx;
  for (Index j = 0; j < m; ++j) {
    const double a = alpha(j);
    const double b = beta(j);
    if (!(a > 0)) throw InvalidArgument("assemble_operator: alpha must be positive at every node");

    // -alpha psi''
    if (j == 0) {
      L.diag(j) += a * idx2;
      L.super(j) -= a * idx2;
    } else if (j == m - 1) {
      L.sub(j) -= a * idx2;
      L.diag(j) += a * idx2;
    } else {
      L.sub(j) -= a * idx2;
      L.diag(j) += 2 * a * idx2;
      L.super(j) -= a * idx2;
    }

    // +beta psi'
    const bool central = scheme == AdvectionScheme::automatic && std::abs(b) * dx / a <= 2.0;
    if (central) {
      const double h = 0.5 * b * idx;
      if (j == 0) {
        L.diag(j) -= h;
        L.super(j) += h;
      } else if (j == m - 1) {
        L.sub(j) -= h;
        L.diag(j) += h;
      } else {
        L.sub(j) -= h;
        L.super(j) += h;
      }
    } else if (b > 0) {
      if (j > 0) {
        L.diag(j) += b * idx;
        L.sub(j) -= b * idx;
      }
    } else if (b < 0) {
      if (j < m - 1) {
        L.diag(j) -= b * idx;
        L.super(j) += b * idx;
      }
    }
  }
  return L;
}

Propagator::Propagator(std::vector<LayerStep> layers, double t_from, double t_to, double theta)
    : layers_(std::move(layers)), t_from_(t_from), t_to_(t_to), theta_(theta) {}

Propagator Propagator::identity(Index /*layers*/, double t) {
  Propagator p;
  p.t_from_ = t;
  p.t_to_ = t;
  return p;
}

void Propagator::apply_in_place(Field<double>& field) const {
  if (is_identity()) return;
  if (field.rows() != layers()) throw InvalidArgument("Propagator::apply: layer count mismatch");
  Profile<double> tmp(field.cols());
  for (Index i = 0; i < layers(); ++i) {
    const LayerStep& s = layers_[static_cast<std::size_t>(i)];
    if (s.implicit_part.size() != field.cols())
      throw InvalidArgument("Propagator::apply: grid mismatch");
    auto row = field.row(i);
    if (theta_ < 1.0) {
      s.explicit_part.multiply(row, tmp);
    } else {
      tmp = row.transpose();
    }
    s.solver.solve_in_place(tmp);
    row = tmp.transpose();
  }
}

Field<double> Propagator::apply(const Field<double>& field) const {
  Field<double> out = field;
  apply_in_place(out);
  return out;
}

Profile<double> Propagator::apply_layer(Index layer, const Profile<double>& v) const {
  if (is_identity()) return v;
  const LayerStep& s = layers_[static_cast<std::size_t>(layer)];
  Profile<double> out(v.size());
  if (theta_ < 1.0) {
    s.explicit_part.multiply(v, out);
  } else {
    out = v;
  }
  s.solver.solve_in_place(out);
  return out;
}

Profile<double> Propagator::apply_transpose(Index layer, const Profile<double>& v) const {
  if (is_identity()) return v;
  const LayerStep& s = layers_[static_cast<std::size_t>(layer)];
  // P = A^{-1} B, so P^T = B^T A^{-T}.
  Profile<double> w = v;
  ThomasSolver<double>(s.implicit_part.transposed()).solve_in_place(w);
  if (theta_ < 1.0) {
    Profile<double> out(v.size());
    s.explicit_part.transposed().multiply(w, out);
    return out;
  }
  return w;
}

Propagator build_propagator(const Coefficients& coeffs, double dx, double t_from, double t_to,
                            const StepScheme& scheme) {
  const double dt = t_to - t_from;
  if (dt < 0) throw InvalidArgument("build_propagator: nonpositive step (t_to < t_from)");
  if (!(scheme.theta >= 0.5 && scheme.theta <= 1.0))
    throw InvalidArgument("build_propagator: theta must lie in [0.5, 1]");
  const Index n = coeffs.alpha.rows();
  if (dt == 0) return Propagator::identity(n, t_from);
  std::vector<Propagator::LayerStep> steps;
  steps.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Tridiagonal<double> L = assemble_operator(coeffs.alpha.row(i).transpose(),
                                                    coeffs.beta.row(i).transpose(), dx,
                                                    scheme.advection);
    Propagator::LayerStep s;
    s.implicit_part = Tridiagonal<double>::identity(L.size());
    s.explicit_part = Tridiagonal<double>::identity(L.size());
    const double wi = scheme.theta * dt;
    const double we = (1 - scheme.theta) * dt;
    s.implicit_part.sub += wi * L.sub;
    s.implicit_part.diag += wi * L.diag;
    s.implicit_part.super += wi * L.super;
    s.explicit_part.sub -= we * L.sub;
    s.explicit_part.diag -= we * L.diag;
    s.explicit_part.super -= we * L.super;
    if (!(s.implicit_part.dominance_margin() > 0))
      throw Error("build_propagator: implicit matrix is not diagonally dominant");
    s.solver = ThomasSolver<double>(s.implicit_part);
    steps.push_back(std::move(s));
  }
  return Propagator(std::move(steps), t_from, t_to, scheme.theta);
}

Propagator build_propagator(const LayerParams& p, const FuelHistory& fuel,
                            const Grid<double>& grid, double t_from, double t_to,
                            const StepScheme& scheme) {
  if (t_to < t_from) throw InvalidArgument("build_propagator: nonpositive step (t_to < t_from)");
  if (t_to == t_from) return Propagator::identity(p.layers(), t_from);
  const Field<double> y = fuel.at(0.5 * (t_from + t_to), grid);
  return build_propagator(coefficient_fields(p, y), grid.dx, t_from, t_to, scheme);
}

Field<double> propagate(const LayerParams& p, const FuelHistory& fuel, const Grid<double>& grid,
                        double t_from, double t_to, int n_steps, const Field<double>& field,
                        const StepScheme& scheme) {
  if (n_steps < 1) throw InvalidArgument("propagate: n_steps must be >= 1");
  if (t_to < t_from) throw InvalidArgument("propagate: t_to < t_from");
  Field<double> u = field;
  if (t_to == t_from) return u;
  const double h = (t_to - t_from) / n_steps;
  for (int k = 0; k < n_steps; ++k) {
    const double a = t_from + k * h;
    const double b = (k + 1 == n_steps) ? t_to : t_from + (k + 1) * h;
    build_propagator(p, fuel, grid, a, b, scheme).apply_in_place(u);
  }
  return u;
}

}  // namespace porocomb
