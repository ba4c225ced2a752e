#include "porocomb/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace porocomb {

void SolverConfig::validate() const {
  if (!(picard_tol > 0)) throw InvalidArgument("SolverConfig: picard_tol must be positive");
  if (picard_max_iters < 1) throw InvalidArgument("SolverConfig: picard_max_iters must be >= 1");
  if (time_steps_per_window < 2)
    throw InvalidArgument("SolverConfig: time_steps_per_window must be >= 2");
  if (!(dt >= 0)) throw InvalidArgument("SolverConfig: dt must be >= 0");
  if (!(scheme.theta >= 0.5 && scheme.theta <= 1.0))
    throw InvalidArgument("SolverConfig: theta must lie in [0.5, 1]");
  if (!(adaptive_window >= 0)) throw InvalidArgument("SolverConfig: adaptive_window must be >= 0");
  if (max_halvings < 0) throw InvalidArgument("SolverConfig: max_halvings must be >= 0");
  if (!(blowup_ceiling > 0)) throw InvalidArgument("SolverConfig: blowup_ceiling must be positive");
  if (!(coupled_outer_tol > 0))
    throw InvalidArgument("SolverConfig: coupled_outer_tol must be positive");
  if (coupled_outer_max < 1) throw InvalidArgument("SolverConfig: coupled_outer_max must be >= 1");
  if (beta_probes < 1) throw InvalidArgument("SolverConfig: beta_probes must be >= 1");
}

// ---------------------------------------------------------------------------

WindowContext::WindowContext(const LayerParams& params, const FuelHistory& fuel,
                             const Grid<double>& grid, std::vector<double> times,
                             const Field<double>& phi, const StepScheme& scheme)
    : params_(&params), dx_(grid.dx), times_(std::move(times)) {
  if (times_.size() < 2) throw InvalidArgument("WindowContext: need at least two time nodes");
  if (phi.rows() != params.layers() || phi.cols() != grid.m)
    throw InvalidArgument("WindowContext: initial state shape mismatch");
  const std::size_t N = times_.size() - 1;
  steps_.reserve(N);
  fuel_.reserve(N + 1);
  Field<double> h = phi;
  homogeneous_.push_back(times_[0], h);
  fuel_.push_back(fuel.at(times_[0], grid));
  for (std::size_t k = 0; k < N; ++k) {
    if (!(times_[k + 1] > times_[k]))
      throw InvalidArgument("WindowContext: time nodes must be strictly increasing");
    steps_.push_back(build_propagator(params, fuel, grid, times_[k], times_[k + 1], scheme));
    steps_.back().apply_in_place(h);
    homogeneous_.push_back(times_[k + 1], h);
    fuel_.push_back(fuel.at(times_[k + 1], grid));
  }
}

Trajectory<double> WindowContext::apply(const Trajectory<double>& u) const {
  if (u.times != times_) throw InvalidArgument("picard_map: trajectory nodes differ from window");
  Trajectory<double> out;
  out.times.reserve(times_.size());
  out.states.reserve(times_.size());
  DuhamelAccumulator acc(u.states[0]);
  out.push_back(times_[0], homogeneous_.states[0]);
  Field<double> f_prev = source_f(*params_, fuel_[0], u.states[0]);
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    Field<double> f_next = source_f(*params_, fuel_[k + 1], u.states[k + 1]);
    acc.advance(steps_[k], f_prev, f_next);
    out.push_back(times_[k + 1], homogeneous_.states[k + 1] + acc.value());
    f_prev = std::move(f_next);
  }
  return out;
}

Trajectory<double> picard_map(const Trajectory<double>& traj, const Field<double>& phi,
                              const LayerParams& params, const FuelHistory& fuel,
                              const Grid<double>& grid, const StepScheme& scheme) {
  const WindowContext ctx(params, fuel, grid, traj.times, phi, scheme);
  return ctx.apply(traj);
}

Trajectory<double> seed_trajectory(const WindowContext& ctx, SeedKind kind) {
  if (kind == SeedKind::homogeneous) return ctx.homogeneous();
  Trajectory<double> s;
  for (double t : ctx.times()) s.push_back(t, ctx.homogeneous().states[0]);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

double finite_sup_norm(const Trajectory<double>& u, double dx) {
  for (const auto& s : u.states)
    if (!s.allFinite()) return std::numeric_limits<double>::infinity();
  return u.sup_norm(dx);
}

}  // namespace

LocalResult solve_local(const WindowContext& ctx, const SolverConfig& cfg, double radius,
                        std::vector<std::string>* warnings) {
  const double dx = ctx.dx();
  const bool adaptive = cfg.window_mode == WindowMode::adaptive;
  LocalResult r;
  Trajectory<double> cur = seed_trajectory(ctx, cfg.seed);
  bool warned = false;
  for (int it = 1; it <= cfg.picard_max_iters; ++it) {
    Trajectory<double> next = ctx.apply(cur);
    const double norm = finite_sup_norm(next, dx);
    if (!(norm <= cfg.blowup_ceiling))
      throw DivergenceError("Picard iterate left the admissible range on window [" +
                            std::to_string(ctx.times().front()) + ", " +
                            std::to_string(ctx.times().back()) + "]");
    r.max_iterate_norm = std::max(r.max_iterate_norm, norm);
    if (radius > 0 && norm > radius * (1 + 1e-12)) {
      const std::string msg = "iterate norm " + std::to_string(norm) +
                              " exceeds ball radius " + std::to_string(radius) + " on window [" +
                              std::to_string(ctx.times().front()) + ", " +
                              std::to_string(ctx.times().back()) + "]";
      if (!adaptive) throw BallViolation(msg);
      if (warnings && !warned) warnings->push_back(msg);
      warned = true;
    }
    const double gap = sup_metric(next, cur, dx);
    const double scale = 1 + norm;
    if (!r.gaps.empty() && r.gaps.back() > 1e-13 * scale)
      r.max_gap_ratio = std::max(r.max_gap_ratio, gap / r.gaps.back());
    r.gaps.push_back(gap);
    cur = std::move(next);
    if (gap <= cfg.picard_tol * scale) {
      r.iterations = it;
      r.trajectory = std::move(cur);
      return r;
    }
    const std::size_t g = r.gaps.size();
    if (adaptive && g >= 4 && r.gaps[g - 1] > r.gaps[g - 2] && r.gaps[g - 2] > r.gaps[g - 3] &&
        r.gaps[g - 3] > r.gaps[g - 4])
      throw DivergenceError("Picard gaps grew over three consecutive iterations");
  }
  throw DivergenceError("Picard iteration did not converge within " +
                        std::to_string(cfg.picard_max_iters) + " iterations (last gap " +
                        std::to_string(r.gaps.back()) + ")");
}

// ---------------------------------------------------------------------------

double audit_step(const SolverConfig& cfg, double T) {
  if (cfg.dt > 0) return T / std::ceil(T / cfg.dt - 1e-9);
  return std::min(T, 1.0) / cfg.time_steps_per_window;
}

GlobalResult solve_global(const Problem& problem, double T, const SolverConfig& cfg) {
  cfg.validate();
  if (!(T > 0)) throw InvalidArgument("solve_global: T must be positive");
  const Grid<double>& grid = problem.grid;
  const LayerParams& p = problem.params;
  const double dx = grid.dx;
  if (problem.phi.rows() != p.layers() || problem.phi.cols() != grid.m)
    throw InvalidArgument("solve_global: initial data shape mismatch");

  GlobalResult r;
  r.audit = audit(problem, T, audit_step(cfg, T), cfg.scheme, cfg.beta_probes);
  if (!r.audit.passed()) {
    const auto v = r.audit.violations();
    throw AuditFailure("hypothesis audit failed: " + v.front().hypothesis + ": " +
                       v.front().message);
  }
  const double beta = r.audit.beta;
  const double k3 = r.audit.k3;
  const double mu0 = r.audit.mu0;
  const FuelHistory fuel = effective_fuel(problem);

  const bool uniform = cfg.dt > 0;
  const long N_global = uniform ? static_cast<long>(std::ceil(T / cfg.dt - 1e-9)) : 0;
  const double h = uniform ? T / static_cast<double>(N_global) : 0;
  auto global_time = [&](long k) { return k == N_global ? T : static_cast<double>(k) * h; };

  if (boundary_leakage(problem.phi, kGuardBandNodes) > kGuardBandTolerance)
    r.warnings.push_back("initial data is not negligible in the boundary guard band");

  Field<double> u = problem.phi;
  r.trajectory.push_back(0.0, u);
  double t0 = 0;
  long k0 = 0;
  while (uniform ? k0 < N_global : t0 < T) {
    const double rho = l2_norm(u, dx);
    double eps = 0;
    double radius = 0;
    if (cfg.window_mode == WindowMode::theoretical &&
        cfg.window_rule == WindowRule::contraction) {
      const double rho_eff = std::max(rho, std::numeric_limits<double>::min());
      radius = 2 * rho_eff * std::exp(beta * T);
      const double kap = lipschitz_kappa(p, k3, radius, dx);
      eps = contraction_step(kap, beta, kap * radius + mu0, rho_eff, radius, T);
    } else {
      radius = 2 * rho * std::exp(beta * (t0 + 1));
      const double kap = lipschitz_kappa(p, k3, radius, dx);
      eps = continuation_epsilon(t0, rho, kap, mu0, beta);
      if (cfg.window_mode == WindowMode::adaptive)
        eps = cfg.adaptive_window > 0 ? cfg.adaptive_window : T - t0;
    }

    WindowRecord rec;
    rec.t_start = t0;
    rec.epsilon = eps;
    LocalResult local;
    for (int halvings = 0;; ++halvings) {
      std::vector<double> times;
      bool floored = false;
      if (uniform) {
        const double ratio = std::floor(eps / h + 1e-9);
        floored = ratio < 1;
        long n = floored ? 1 : static_cast<long>(std::min<double>(ratio, N_global - k0));
        n = std::min(n, N_global - k0);
        for (long k = 0; k <= n; ++k) times.push_back(global_time(k0 + k));
      } else {
        double len = eps;
        if (!(len > 0)) {
          len = 1e-3 * T;
          floored = true;
        }
        len = std::min(len, T - t0);
        if (T - (t0 + len) <= 1e-12 * T) len = T - t0;
        const int n = cfg.time_steps_per_window;
        for (int k = 0; k < n; ++k) times.push_back(t0 + len * k / n);
        times.push_back(len == T - t0 ? T : t0 + len);
      }
      rec.floored = floored;
      rec.steps = static_cast<int>(times.size()) - 1;
      rec.radius = floored ? 0 : radius;
      try {
        const WindowContext ctx(p, fuel, grid, std::move(times), u, cfg.scheme);
        local = solve_local(ctx, cfg, rec.radius, &r.warnings);
        rec.halvings = halvings;
        break;
      } catch (const DivergenceError&) {
        if (cfg.window_mode != WindowMode::adaptive || halvings >= cfg.max_halvings ||
            rec.steps <= 1)
          throw;
        eps = uniform ? 0.5 * rec.steps * h : 0.5 * std::min(eps, T - t0);
      }
    }

    rec.iterations = local.iterations;
    rec.max_gap_ratio = local.max_gap_ratio;
    const Trajectory<double>& w = local.trajectory;
    for (std::size_t k = 1; k < w.size(); ++k) {
      const double nrm = w.states[k].allFinite() ? l2_norm(w.states[k], dx)
                                                 : std::numeric_limits<double>::infinity();
      if (!(nrm <= cfg.blowup_ceiling))
        throw BlowUpError("solution norm exceeded the blow-up ceiling at t = " +
                              std::to_string(w.times[k]),
                          w.times[k]);
      r.trajectory.push_back(w.times[k], w.states[k]);
    }
    u = w.states.back();
    t0 = w.times.back();
    k0 += rec.steps;
    rec.t_end = t0;
    r.windows.push_back(rec);
  }

  if (boundary_leakage(u, kGuardBandNodes) > kGuardBandTolerance)
    r.warnings.push_back("terminal state is not negligible in the boundary guard band");

  const double growth = std::exp(beta * T);
  r.sup_norm = r.trajectory.sup_norm(dx);
  r.apriori_bound = growth * (l2_norm(problem.phi, dx) + mu0 * T) *
                    std::exp(r.audit.kappa_global * growth * T);
  r.apriori_ok = r.sup_norm <= r.apriori_bound * (1 + 1e-12);
  if (!r.apriori_ok && cfg.check_apriori)
    throw Error("a-priori growth bound violated: sup norm " + std::to_string(r.sup_norm) +
                " > " + std::to_string(r.apriori_bound));
  return r;
}

// ---------------------------------------------------------------------------

Trajectory<double> integrate_fuel(const Field<double>& y0, const Trajectory<double>& u,
                                  const LayerParams& params) {
  if (u.empty()) throw InvalidArgument("integrate_fuel: empty trajectory");
  if (y0.rows() != u.states[0].rows() || y0.cols() != u.states[0].cols())
    throw InvalidArgument("integrate_fuel: fuel shape mismatch");
  const double E = params.E;
  auto g = [E](double v) { return arrhenius_g(v, E); };
  Trajectory<double> y;
  Field<double> cur = y0;
  y.push_back(u.times[0], cur);
  Field<double> g_prev = u.states[0].unaryExpr(g);
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double dt = u.times[k + 1] - u.times[k];
    Field<double> g_next = u.states[k + 1].unaryExpr(g);
    cur *= (-0.5 * dt * params.A * (g_prev + g_next)).exp();
    y.push_back(u.times[k + 1], cur);
    g_prev = std::move(g_next);
  }
  return y;
}

CoupledResult solve_coupled(const Problem& problem, double T, const SolverConfig& cfg) {
  if (problem.fuel_mode != FuelMode::coupled)
    throw InvalidArgument("solve_coupled: problem is not in coupled fuel mode");
  if (!(cfg.dt > 0)) throw InvalidArgument("solve_coupled: requires a uniform time step dt > 0");
  const Field<double> y0 = problem.fuel.at(0.0, problem.grid);
  Problem frozen = problem;
  frozen.fuel_mode = FuelMode::prescribed;
  {
    Trajectory<double> initial;
    initial.push_back(0.0, y0);
    frozen.fuel = FuelHistory::tabulated(std::move(initial));
  }

  CoupledResult r;
  Trajectory<double> previous;
  for (int outer = 1; outer <= cfg.coupled_outer_max; ++outer) {
    GlobalResult g = solve_global(frozen, T, cfg);
    Trajectory<double> y = integrate_fuel(y0, g.trajectory, problem.params);
    double y_change = 0;
    for (std::size_t k = 0; k < y.size(); ++k)
      y_change = std::max(
          y_change, (y.states[k] - frozen.fuel.at(y.times[k], problem.grid)).abs().maxCoeff());
    bool done = y_change == 0;
    if (!previous.empty()) {
      const double change = sup_metric(g.trajectory, previous, problem.grid.dx);
      r.outer_changes.push_back(change);
      done = done || change <= cfg.coupled_outer_tol * (1 + g.sup_norm);
    }
    previous = g.trajectory;
    r.temperature = std::move(g);
    r.outer_iterations = outer;
    if (done) {
      r.fuel = std::move(y);
      return r;
    }
    frozen.fuel = FuelHistory::tabulated(std::move(y));
  }
  throw DivergenceError("coupled fuel iteration did not converge within " +
                        std::to_string(cfg.coupled_outer_max) + " outer iterations");
}

}  // namespace porocomb
