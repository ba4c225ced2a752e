#include "porocomb/dependence.hpp"

#include <cmath>
#include <limits>

namespace porocomb {

namespace {

constexpr std::pair<PerturbTarget, const char*> kTargetNames[] = {
    {PerturbTarget::phi, "phi"},     {PerturbTarget::a, "a"},
    {PerturbTarget::b, "b"},         {PerturbTarget::c, "c"},
    {PerturbTarget::lambda, "lambda"}, {PerturbTarget::d, "d"},
    {PerturbTarget::q, "q"},         {PerturbTarget::K, "K"},
    {PerturbTarget::qhat1, "qhat1"}, {PerturbTarget::qhat2, "qhat2"},
    {PerturbTarget::y, "y"},
};

const double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

PerturbTarget parse_perturb_target(const std::string& name) {
  for (const auto& [t, s] : kTargetNames)
    if (name == s) return t;
  throw InvalidArgument("unknown perturbation target '" + name + "'");
}

std::string to_string(PerturbTarget target) {
  for (const auto& [t, s] : kTargetNames)
    if (t == target) return s;
  return "?";
}

std::vector<double> PerturbationSpec::default_levels(int count) {
  std::vector<double> s;
  for (int j = 0; j < count; ++j) s.push_back(std::ldexp(1.0, -j));
  return s;
}

Problem build_perturbed(const Problem& base, const PerturbationSpec& spec, double s) {
  Problem p = base;
  const Index n = base.layers();
  for (const Perturbation& item : spec.items) {
    const Profile<double> dir = s * item.direction.sample(base.grid);
    const bool per_layer = item.target != PerturbTarget::qhat1 &&
                           item.target != PerturbTarget::qhat2;
    const Index limit = item.target == PerturbTarget::q ? n - 1 : n;
    if (per_layer && (item.layer < 0 || item.layer >= limit))
      throw InvalidArgument("build_perturbed: layer index out of range for target " +
                            to_string(item.target));
    const Index i = item.layer;
    switch (item.target) {
      case PerturbTarget::phi: p.phi.row(i) += dir.transpose(); break;
      case PerturbTarget::a: p.params.a.row(i) += dir.transpose(); break;
      case PerturbTarget::b: p.params.b.row(i) += dir.transpose(); break;
      case PerturbTarget::c: {
        p.params.c.row(i) += dir.transpose();
        const Profile<double> c_row = p.params.c.row(i).transpose();
        p.params.c_x.row(i) = centered_derivative(c_row, base.grid.dx).transpose();
        break;
      }
      case PerturbTarget::lambda: p.params.lambda.row(i) += dir.transpose(); break;
      case PerturbTarget::d: p.params.d.row(i) += dir.transpose(); break;
      case PerturbTarget::q: p.params.q.row(i) += dir.transpose(); break;
      case PerturbTarget::K: p.params.K.row(i) += dir.transpose(); break;
      case PerturbTarget::qhat1: p.params.qhat1 += dir; break;
      case PerturbTarget::qhat2: p.params.qhat2 += dir; break;
      case PerturbTarget::y: {
        Field<double> off = p.fuel.offset();
        if (off.size() == 0) off = Field<double>::Zero(n, base.grid.m);
        off.row(i) += dir.transpose();
        p.fuel.set_offset(std::move(off));
        break;
      }
    }
  }
  return p;
}

double perturbation_size(const Problem& base, const PerturbationSpec& spec, double s) {
  double size = 0;
  for (const Perturbation& item : spec.items) {
    const Profile<double> dir = item.direction.sample(base.grid);
    const double sup = dir.abs().maxCoeff();
    const double l2 = std::sqrt(base.grid.dx * dir.square().sum());
    size = std::max(size, std::abs(s) * std::max(sup, l2));
  }
  return size;
}

// ---------------------------------------------------------------------------

namespace {

struct Terms {
  double delta0 = 0, delta1 = 0, delta3 = 0, delta4 = 0, sum = 0;
};

/// Discrete Duhamel decomposition of u^s - u on the shared time grid, with u the base solution.
Terms decomposition(const Problem& base, const Problem& pert, const Trajectory<double>& u,
                    const StepScheme& scheme) {
  const Grid<double>& grid = base.grid;
  const double dx = grid.dx;
  const FuelHistory fuel = effective_fuel(base);
  const FuelHistory fuel_s = effective_fuel(pert);

  Terms r;
  Field<double> w0 = pert.phi - base.phi;     // U^s (phi^s - phi)
  Field<double> hs = base.phi, hb = base.phi; // U^s phi, U phi
  DuhamelAccumulator i3(base.phi), i4s(base.phi), i4b(base.phi);
  Field<double> y = fuel.at(u.times[0], grid);
  Field<double> ys = fuel_s.at(u.times[0], grid);
  Field<double> f_prev = source_f(base.params, y, u.states[0]);
  Field<double> fs_prev = source_f(pert.params, ys, u.states[0]);

  auto record = [&](const Field<double>& a, const Field<double>& b, const Field<double>& c,
                    const Field<double>& d) {
    const double t0 = l2_norm(a, dx), t1 = l2_norm(b, dx), t3 = l2_norm(c, dx),
                 t4 = l2_norm(d, dx);
    r.delta0 = std::max(r.delta0, t0);
    r.delta1 = std::max(r.delta1, t1);
    r.delta3 = std::max(r.delta3, t3);
    r.delta4 = std::max(r.delta4, t4);
    r.sum = std::max(r.sum, t0 + t1 + t3 + t4);
  };
  record(w0, hs - hb, i3.value(), i4s.value() - i4b.value());

  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double ta = u.times[k], tb = u.times[k + 1];
    const Propagator P = build_propagator(base.params, fuel, grid, ta, tb, scheme);
    const Propagator Ps = build_propagator(pert.params, fuel_s, grid, ta, tb, scheme);
    y = fuel.at(tb, grid);
    ys = fuel_s.at(tb, grid);
    const Field<double> f_next = source_f(base.params, y, u.states[k + 1]);
    const Field<double> fs_next = source_f(pert.params, ys, u.states[k + 1]);

    Ps.apply_in_place(w0);
    Ps.apply_in_place(hs);
    P.apply_in_place(hb);
    i3.advance(Ps, fs_prev - f_prev, fs_next - f_next);
    i4s.advance(Ps, f_prev, f_next);
    i4b.advance(P, f_prev, f_next);
    record(w0, hs - hb, i3.value(), i4s.value() - i4b.value());

    f_prev = f_next;
    fs_prev = fs_next;
  }
  return r;
}

}  // namespace

DependenceReport dependence_study(const Problem& base, const PerturbationSpec& spec, double T,
                                  const SolverConfig& cfg, bool symmetric_check) {
  if (!(cfg.dt > 0))
    throw InvalidArgument("dependence_study: requires a uniform time step dt > 0");
  if (base.fuel_mode != FuelMode::prescribed)
    throw InvalidArgument("dependence_study: requires prescribed fuel");
  const double dx = base.grid.dx;
  const GlobalResult ref = solve_global(base, T, cfg);

  DependenceReport rep;
  rep.T = T;
  rep.base_sup_norm = ref.sup_norm;
  rep.symmetric_ratio = kNaN;
  const double noise_floor = 100 * cfg.picard_tol * (1 + ref.sup_norm);

  double prev_delta = kNaN;
  int smallest = -1;
  for (std::size_t j = 0; j < spec.levels.size(); ++j) {
    DependenceLevel L;
    L.j = static_cast<int>(j);
    L.s = spec.levels[j];
    L.eps = perturbation_size(base, spec, L.s);
    L.ratio = kNaN;
    if (L.eps <= noise_floor) {
      L.skipped = true;
      L.noise = true;
      L.note = "perturbation below 100 x solver tolerance";
      rep.levels.push_back(L);
      prev_delta = kNaN;
      continue;
    }
    try {
      const Problem pert = build_perturbed(base, spec, L.s);
      const GlobalResult sol = solve_global(pert, T, cfg);
      L.delta = sup_metric(sol.trajectory, ref.trajectory, dx);
      const Terms t = decomposition(base, pert, ref.trajectory, cfg.scheme);
      L.delta0 = t.delta0;
      L.delta1 = t.delta1;
      L.delta3 = t.delta3;
      L.delta4 = t.delta4;
      L.delta_sum = t.sum;
      L.beta = sol.audit.beta;
      const double c = 1 + std::exp(L.beta * T);
      L.bound = t.sum * (1 + T * c * std::exp(c * T));
      const double ck = c * sol.audit.kappa_global;
      L.bound_kappa = t.sum * (1 + T * ck * std::exp(ck * T));
      if (prev_delta > 0) L.ratio = L.delta / prev_delta;
      prev_delta = L.delta;
      smallest = static_cast<int>(j);
    } catch (const AuditFailure& e) {
      L.skipped = true;
      L.note = std::string("audit failed: ") + e.what();
      prev_delta = kNaN;
    }
    rep.levels.push_back(L);
  }

  for (const DependenceLevel& L : rep.levels) {
    if (L.skipped || std::isnan(L.ratio)) continue;
    if (L.ratio > 1.05) rep.monotone = false;
    if (rep.crossover < 0 && (L.ratio < 0.4 || L.ratio > 0.6)) rep.crossover = L.j;
  }

  if (symmetric_check && smallest >= 0) {
    const DependenceLevel& L = rep.levels[static_cast<std::size_t>(smallest)];
    try {
      const GlobalResult sol = solve_global(build_perturbed(base, spec, -L.s), T, cfg);
      const double dm = sup_metric(sol.trajectory, ref.trajectory, dx);
      if (L.delta > 0) rep.symmetric_ratio = dm / L.delta;
    } catch (const AuditFailure&) {
    }
  }
  return rep;
}

std::vector<OperatorProbeRow> operator_convergence_probe(const Problem& base,
                                                         const PerturbationSpec& spec,
                                                         const std::vector<double>& levels,
                                                         const Field<double>& probe, double t,
                                                         double dt, int steps,
                                                         const StepScheme& scheme) {
  if (steps < 1 || !(dt > 0)) throw InvalidArgument("operator_convergence_probe: bad step");
  const Grid<double>& grid = base.grid;
  const FuelHistory fuel = effective_fuel(base);
  auto apply_L = [&](const Problem& p, const FuelHistory& f) {
    const Coefficients c = coefficient_fields(p.params, f.at(t, grid));
    Field<double> out(probe.rows(), probe.cols());
    Profile<double> tmp(probe.cols());
    for (Index i = 0; i < probe.rows(); ++i) {
      assemble_operator(c.alpha.row(i).transpose(), c.beta.row(i).transpose(), grid.dx,
                        scheme.advection)
          .multiply(probe.row(i), tmp);
      out.row(i) = tmp.transpose();
    }
    return out;
  };
  const Field<double> L0 = apply_L(base, fuel);
  const Field<double> U0 =
      propagate(base.params, fuel, grid, t, t + steps * dt, steps, probe, scheme);

  std::vector<OperatorProbeRow> rows;
  for (double s : levels) {
    const Problem p = build_perturbed(base, spec, s);
    const FuelHistory fs = effective_fuel(p);
    OperatorProbeRow r;
    r.s = s;
    r.operator_diff = l2_norm(apply_L(p, fs) - L0, grid.dx);
    r.propagator_diff = l2_norm(
        propagate(p.params, fs, grid, t, t + steps * dt, steps, probe, scheme) - U0, grid.dx);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace porocomb
