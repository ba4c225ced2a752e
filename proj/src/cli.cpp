#include "porocomb/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "porocomb/config.hpp"
#include "porocomb/dependence.hpp"
#include "porocomb/hypothesis.hpp"
#include "porocomb/io.hpp"
#include "porocomb/mild_solver.hpp"
#include "porocomb/oracle.hpp"

namespace porocomb {

namespace {

namespace fs = std::filesystem;

struct Context {
  std::string command_line;
  std::string subcommand;
  std::string config_path;
  fs::path out;
  ProblemConfig cfg;
  Problem problem;
};

std::string path_in(const Context& ctx, const std::string& name) {
  return (ctx.out / name).string();
}

void write_manifest(const Context& ctx, const std::string& status) {
  const SolverConfig& s = ctx.cfg.run.solver;
  std::ostringstream o;
  o << "version: " << version() << "\n";
  o << "command: " << ctx.command_line << "\n";
  o << "subcommand: " << ctx.subcommand << "\n";
  o << "config_file: " << ctx.config_path << "\n";
  o << "status: " << status << "\n";
  o << "tolerances:\n";
  o << "  picard_tol: " << format_number(s.picard_tol) << "\n";
  o << "  coupled_outer_tol: " << format_number(s.coupled_outer_tol) << "\n";
  o << "  guard_band_nodes: " << kGuardBandNodes << "\n";
  o << "  guard_band_tolerance: " << format_number(kGuardBandTolerance) << "\n";
  o << "  step_norm: log-norm bound, Lanczos fallback to 1e-8 relative residual\n";
  o << "config:\n";
  std::istringstream echo(echo_config(ctx.cfg));
  std::string line;
  while (std::getline(echo, line)) o << "  " << line << "\n";
  write_text(path_in(ctx, "manifest.txt"), o.str());
}

struct Simulation {
  GlobalResult global;
  Trajectory<double> fuel;
  int outer_iterations = 0;
};

Simulation simulate(const Context& ctx) {
  Simulation sim;
  const double T = ctx.cfg.run.T;
  if (ctx.problem.fuel_mode == FuelMode::coupled) {
    CoupledResult c = solve_coupled(ctx.problem, T, ctx.cfg.run.solver);
    sim.global = std::move(c.temperature);
    sim.fuel = std::move(c.fuel);
    sim.outer_iterations = c.outer_iterations;
  } else {
    sim.global = solve_global(ctx.problem, T, ctx.cfg.run.solver);
    for (std::size_t k = 0; k < sim.global.trajectory.size(); ++k) {
      const double t = sim.global.trajectory.times[k];
      sim.fuel.push_back(t, ctx.problem.fuel.at(t, ctx.problem.grid));
    }
  }
  return sim;
}

std::string run_summary(const Simulation& sim) {
  const GlobalResult& g = sim.global;
  std::ostringstream o;
  o << "run:\n";
  o << "  nodes: " << g.trajectory.size() << "\n";
  o << "  windows: " << g.windows.size() << "\n";
  o << "  sup_norm: " << format_number(g.sup_norm) << "\n";
  o << "  apriori_bound: " << format_number(g.apriori_bound) << "\n";
  o << "  apriori_ok: " << (g.apriori_ok ? "true" : "false") << "\n";
  if (sim.outer_iterations > 0) o << "  coupled_outer_iterations: " << sim.outer_iterations << "\n";
  o << "windows:\n";
  for (const WindowRecord& w : g.windows) {
    o << "  - t_start: " << format_number(w.t_start) << ", t_end: " << format_number(w.t_end)
      << ", steps: " << w.steps << ", iterations: " << w.iterations
      << ", max_gap_ratio: " << format_number(w.max_gap_ratio)
      << ", radius: " << format_number(w.radius) << ", floored: " << (w.floored ? "true" : "false")
      << ", halvings: " << w.halvings << "\n";
  }
  o << "warnings:\n";
  for (const auto& w : g.warnings) o << "  - " << w << "\n";
  return o.str();
}

int cmd_simulate(const Context& ctx) {
  const Simulation sim = simulate(ctx);
  const auto select = snapshot_indices(sim.global.trajectory.size(), ctx.cfg.run.snapshots);
  write_trajectory(sim.global.trajectory, ctx.problem.grid, path_in(ctx, "trajectory"), &sim.fuel,
                   &select);
  write_text(path_in(ctx, "hypotheses.txt"), to_text(sim.global.audit));
  write_text(path_in(ctx, "summary.txt"), run_summary(sim));
  std::cout << "simulate: " << sim.global.windows.size() << " windows, sup norm "
            << format_number(sim.global.sup_norm) << ", a-priori bound "
            << format_number(sim.global.apriori_bound) << "\n";
  for (const auto& w : sim.global.warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_check(const Context& ctx) {
  const double T = ctx.cfg.run.T;
  const HypothesisReport r = audit(ctx.problem, T, audit_step(ctx.cfg.run.solver, T),
                                   ctx.cfg.run.solver.scheme, ctx.cfg.run.solver.beta_probes);
  write_text(path_in(ctx, "hypotheses.txt"), to_text(r));
  std::cout << "check-hypotheses: " << (r.passed() ? "pass" : "FAIL") << "\n"
            << "  kappa = " << format_number(r.kappa) << "\n"
            << "  mu = " << format_number(r.mu) << "\n"
            << "  beta = " << format_number(r.beta) << "\n"
            << "  T_prime = " << format_number(r.T_prime) << "\n";
  for (const auto& v : r.violations())
    std::cout << "  " << v.hypothesis << " layer " << v.layer + 1 << " node " << v.node << ": "
              << v.message << "\n";
  return r.passed() ? kExitOk : kExitAudit;
}

int cmd_oracle(const Context& ctx) {
  const ExperimentConfig& e = ctx.cfg.experiment;
  const double T = ctx.cfg.run.T;
  std::vector<double> steps, gaps, rel;
  for (int k = e.oracle_levels - 1; k >= 0; --k) steps.push_back(std::ldexp(e.oracle_h, k));
  for (double h : steps) {
    SolverConfig s = ctx.cfg.run.solver;
    s.dt = h;
    const GlobalResult mild = solve_global(ctx.problem, T, s);
    OracleConfig oc;
    oc.integrator = e.oracle_integrator;
    oc.dt = h;
    oc.advection = s.scheme.advection;
    const Trajectory<double> ref = mol_solve(ctx.problem, T, oc);
    const Comparison c = compare(ref, mild.trajectory, ctx.problem.grid.dx);
    gaps.push_back(c.sup_metric);
    rel.push_back(c.relative);
  }
  const std::vector<double> orders = observed_orders(gaps);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < steps.size(); ++k)
    rows.push_back({std::to_string(k), format_number(steps[k]), format_number(gaps[k]),
                    format_number(rel[k]), k == 0 ? "" : format_number(orders[k - 1])});
  write_csv(path_in(ctx, "oracle_compare.csv"),
            {"level", "dt", "sup_metric", "relative", "observed_order"}, rows);
  std::cout << "oracle-compare: finest relative sup-metric " << format_number(rel.back())
            << ", observed order " << format_number(orders.back()) << "\n";
  return kExitOk;
}

int cmd_dependence(const Context& ctx, bool symmetric) {
  const PerturbationSpec spec = perturbation_spec(ctx.cfg);
  if (spec.items.empty())
    throw ConfigError("dependence-study needs perturb.<target> keys in [experiment]");
  const DependenceReport rep =
      dependence_study(ctx.problem, spec, ctx.cfg.run.T, ctx.cfg.run.solver, symmetric);
  std::vector<std::vector<std::string>> rows;
  for (const DependenceLevel& L : rep.levels)
    rows.push_back({std::to_string(L.j), format_number(L.s), format_number(L.eps),
                    format_number(L.delta), format_number(L.ratio), format_number(L.bound),
                    format_number(L.bound_kappa), format_number(L.delta0),
                    format_number(L.delta1), format_number(L.delta3), format_number(L.delta4),
                    L.skipped ? "true" : "false", L.note});
  write_csv(path_in(ctx, "dependence.csv"),
            {"level", "s", "eps", "delta", "ratio", "bound", "bound_kappa", "delta0", "delta1",
             "delta3", "delta4", "skipped", "note"},
            rows);
  std::cout << "dependence-study: " << rep.levels.size() << " levels, crossover "
            << rep.crossover << ", monotone " << (rep.monotone ? "yes" : "no")
            << ", symmetric ratio " << format_number(rep.symmetric_ratio) << "\n";
  return kExitOk;
}

int cmd_front(const Context& ctx, double threshold_override, bool has_override) {
  const Simulation sim = simulate(ctx);
  const Problem& p = ctx.problem;
  double thr = 0;
  if (has_override) {
    thr = threshold_override;
  } else if (ctx.cfg.experiment.front_threshold) {
    thr = *ctx.cfg.experiment.front_threshold;
  } else {
    thr = p.params.u_e + 0.5 * (p.phi.maxCoeff() - p.params.u_e);
  }
  const Index n = p.layers();
  std::vector<std::string> header{"time"};
  for (Index i = 0; i < n; ++i) header.push_back("front_" + std::to_string(i + 1));
  std::vector<std::vector<std::string>> rows;
  const Trajectory<double>& u = sim.global.trajectory;
  for (std::size_t k = 0; k < u.size(); ++k) {
    std::vector<std::string> row{format_number(u.times[k])};
    for (Index i = 0; i < n; ++i)
      row.push_back(format_number(front_position(u.states[k].row(i), p.grid, thr)));
    rows.push_back(std::move(row));
  }
  write_csv(path_in(ctx, "fronts.csv"), header, rows);
  std::cout << "front-track: threshold " << format_number(thr) << ", " << u.size()
            << " time nodes\n";
  return kExitOk;
}

}  // namespace

int cli(int argc, const char* const* argv) {
  CLI::App app{"Layered porous-medium combustion: mild-solution solver and experiments",
               "porocomb"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  Context ctx;
  std::string out_dir;
  double threshold = 0;
  bool no_symmetric = false;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", ctx.config_path, "Configuration file")->required();
    sub->add_option("-o,--output", out_dir, "Output directory");
    return sub;
  };
  CLI::App* sim = add("simulate", "Solve on [0, T] and write trajectory snapshots");
  CLI::App* check = add("check-hypotheses", "Audit the hypotheses and report the constants");
  CLI::App* oracle = add("oracle-compare", "Refinement ladder against the method-of-lines oracle");
  CLI::App* dep = add("dependence-study", "Continuous-dependence ladder over perturbation levels");
  dep->add_flag("--no-symmetric", no_symmetric, "Skip the +/- symmetry solve");
  CLI::App* front = add("front-track", "Per-layer front position versus time");
  CLI::Option* thr_opt = front->add_option("--threshold", threshold, "Front threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kExitOk;
    std::cerr << app.help();
    return kExitUsage;
  }

  for (int k = 0; k < argc; ++k) ctx.command_line += (k ? " " : "") + std::string(argv[k]);
  ctx.subcommand = app.get_subcommands().front()->get_name();
  if (!out_dir.empty()) {
    ctx.out = out_dir;
  } else if (const char* env = std::getenv("POROCOMB_OUTPUT_DIR"); env && *env) {
    ctx.out = env;
  } else {
    ctx.out = "porocomb_out";
  }

  auto failed = [&](int code, const std::string& kind, const std::exception& e) {
    std::cerr << "porocomb: " << kind << ": " << e.what() << "\n";
    if (code != kExitUsage && code != kExitIo) {
      try {
        write_manifest(ctx, kind + ": " + e.what());
      } catch (const std::exception&) {
      }
    }
    return code;
  };

  try {
    ctx.cfg = load_config(ctx.config_path);
    ctx.problem = build_problem(ctx.cfg);
    write_manifest(ctx, "running");
    int code = kExitOk;
    if (*sim) code = cmd_simulate(ctx);
    if (*check) code = cmd_check(ctx);
    if (*oracle) code = cmd_oracle(ctx);
    if (*dep) code = cmd_dependence(ctx, !no_symmetric);
    if (*front) code = cmd_front(ctx, threshold, thr_opt->count() > 0);
    write_manifest(ctx, code == kExitOk ? "ok" : "exit " + std::to_string(code));
    return code;
  } catch (const ConfigError& e) {
    return failed(kExitUsage, "configuration error", e);
  } catch (const InvalidArgument& e) {
    return failed(kExitUsage, "invalid argument", e);
  } catch (const AuditFailure& e) {
    return failed(kExitAudit, "audit failure", e);
  } catch (const BlowUpError& e) {
    return failed(kExitSolver, "blow-up", e);
  } catch (const IoError& e) {
    return failed(kExitIo, "I/O error", e);
  } catch (const Error& e) {
    return failed(kExitSolver, "solver failure", e);
  }
}

}  // namespace porocomb
