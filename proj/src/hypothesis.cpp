#include "porocomb/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace porocomb {

namespace {

constexpr std::size_t kMaxViolationsPerCheck = 20;

void add_violation(std::vector<Violation>& out, const char* hyp, Index layer, Index node,
                   std::string msg) {
  if (out.size() < kMaxViolationsPerCheck) out.push_back({hyp, layer, node, std::move(msg)});
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DifferenceBounds {
  double first = 0, second = 0;
};

template <typename Row>
DifferenceBounds differences(const Row& v, double dx) {
  DifferenceBounds b;
  const Index m = v.size();
  for (Index j = 1; j + 1 < m; ++j) {
    b.first = std::max(b.first, std::abs(v(j + 1) - v(j - 1)) / (2 * dx));
    b.second = std::max(b.second, std::abs(v(j + 1) - 2 * v(j) + v(j - 1)) / (dx * dx));
  }
  return b;
}

}  // namespace

std::vector<double> probe_times(double T, int count) {
  if (count < 1) throw InvalidArgument("probe_times: count must be >= 1");
  std::vector<double> ts;
  if (count == 1) return {0.0};
  for (int k = 0; k < count; ++k) ts.push_back(T * k / (count - 1));
  return ts;
}

// ---------------------------------------------------------------------------

H1Result check_H1(const LayerParams& p, const Grid<double>& grid) {
  p.validate_shapes();
  H1Result r;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const Index n = p.layers();
  const Index m = p.nodes();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      for (auto [f, name] : {std::pair{&p.a, "a"}, std::pair{&p.lambda, "lambda"}}) {
        const double v = (*f)(i, j);
        if (!std::isfinite(v)) {
          add_violation(r.violations, "H1", i, j, std::string(name) + " is not finite");
          continue;
        }
        if (!(v > 0))
          add_violation(r.violations, "H1", i, j,
                        std::string(name) + " = " + num(v) +
                            " is not positive; must lie in [k1, k2] with k1 > 0");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      for (auto [f, name] : {std::pair{&p.b, "b"}, std::pair{&p.c, "c"}}) {
        const double v = (*f)(i, j);
        if (!std::isfinite(v)) {
          add_violation(r.violations, "H1", i, j, std::string(name) + " is not finite");
          continue;
        }
        if (v < 0)
          add_violation(r.violations, "H1", i, j,
                        std::string(name) + " = " + num(v) + " is negative; must lie in [0, k2]");
        hi = std::max(hi, v);
      }
    }
    for (const Field<double>* f : {&p.a, &p.b, &p.c, &p.lambda}) {
      const DifferenceBounds d = differences(f->row(i), grid.dx);
      r.max_first_difference = std::max(r.max_first_difference, d.first);
      r.max_second_difference = std::max(r.max_second_difference, d.second);
    }
  }
  if (!std::isfinite(r.max_first_difference) || !std::isfinite(r.max_second_difference))
    add_violation(r.violations, "H1", -1, -1, "derivatives up to order 2 are not bounded");
  r.k1 = lo;
  r.k2 = hi > lo ? hi : lo * (1 + 1e-12);
  r.pass = r.violations.empty();
  return r;
}

// ---------------------------------------------------------------------------

H2Result check_H2(const FuelHistory& fuel, FuelMode mode, const Grid<double>& grid, double T,
                  int probe_count) {
  H2Result r;
  auto check_value = [&](double v, Index i, Index j, double t) {
    if (!std::isfinite(v)) {
      add_violation(r.violations, "H2", i, j, "y is not finite at t = " + num(t));
      return;
    }
    if (v < 0) add_violation(r.violations, "H2", i, j, "y = " + num(v) + " < 0 at t = " + num(t));
    if (v > 1)
      add_violation(r.violations, "H2", i, j, "y = " + num(v) + " > 1 at t = " + num(t));
    r.k3 = std::max(r.k3, v);
  };

  if (mode == FuelMode::coupled || fuel.is_tabulated()) {
    std::vector<std::pair<double, Field<double>>> states;
    if (mode == FuelMode::coupled && !fuel.is_tabulated()) {
      states.emplace_back(0.0, fuel.at(0.0, grid));
    } else {
      for (std::size_t k = 0; k < fuel.table().size(); ++k)
        states.emplace_back(fuel.table().times[k], fuel.at(fuel.table().times[k], grid));
    }
    for (const auto& [t, y] : states)
      for (Index i = 0; i < y.rows(); ++i)
        for (Index j = 0; j < y.cols(); ++j) check_value(y(i, j), i, j, t);
    r.pass = r.violations.empty();
    return r;
  }

  const auto& fams = fuel.families();
  const Field<double>& off = fuel.offset();
  const bool has_offset = off.size() > 0;
  for (double t : probe_times(T, probe_count)) {
    for (Index i = 0; i < static_cast<Index>(fams.size()); ++i) {
      const FuelFamily& F = fams[static_cast<std::size_t>(i)];
      for (Index j = 0; j < grid.m; ++j) {
        const double x = grid.node(j);
        double v = F.value(x, t);
        double yx = F.d_x(x, t);
        double yxx = F.d_xx(x, t);
        if (has_offset) {
          v += off(i, j);
          if (j > 0 && j + 1 < grid.m) {
            yx += (off(i, j + 1) - off(i, j - 1)) / (2 * grid.dx);
            yxx += (off(i, j + 1) - 2 * off(i, j) + off(i, j - 1)) / (grid.dx * grid.dx);
          }
        }
        check_value(v, i, j, t);
        const double yt = F.d_t(x, t);
        const double ytx = F.d_tx(x, t);
        for (double d : {yx, yxx, yt, ytx})
          if (!std::isfinite(d))
            add_violation(r.violations, "H2", i, j, "derivative of y is not finite");
        r.max_y_x = std::max(r.max_y_x, std::abs(yx));
        r.max_y_xx = std::max(r.max_y_xx, std::abs(yxx));
        r.max_y_t = std::max(r.max_y_t, std::abs(yt));
        r.max_y_tx = std::max(r.max_y_tx, std::abs(ytx));
      }
    }
  }
  r.pass = r.violations.empty();
  return r;
}

// ---------------------------------------------------------------------------

H3Result check_H3(const LayerParams& p, const Grid<double>& grid) {
  p.validate_shapes();
  H3Result r;
  auto scan = [&](const Field<double>& f, const char* name, double& sup) {
    for (Index i = 0; i < f.rows(); ++i)
      for (Index j = 0; j < f.cols(); ++j) {
        const double v = f(i, j);
        if (!std::isfinite(v)) {
          add_violation(r.violations, "H3", i, j, std::string(name) + " is not bounded");
          continue;
        }
        if (v < 0)
          add_violation(r.violations, "H3", i, j, std::string(name) + " = " + num(v) + " < 0");
        sup = std::max(sup, std::abs(v));
      }
  };
  scan(p.d, "d", r.sup_d);
  scan(p.q, "q", r.sup_q);
  scan(p.K, "K", r.sup_K);
  double sup_A = 0;
  scan(p.A, "A", sup_A);

  auto loss = [&](const Profile<double>& qh, const char* name, double& l2, double& leak) {
    if (!qh.allFinite()) {
      add_violation(r.violations, "H3", -1, -1, std::string(name) + " is not finite");
      return;
    }
    for (Index j = 0; j < qh.size(); ++j)
      if (qh(j) < 0) {
        add_violation(r.violations, "H3", -1, j, std::string(name) + " < 0");
        break;
      }
    l2 = std::sqrt(grid.dx * qh.square().sum());
    Field<double> row = qh.transpose();
    leak = boundary_leakage(row, kGuardBandNodes);
    if (leak > kGuardBandTolerance)
      add_violation(r.violations, "H3", -1, -1,
                    std::string(name) +
                        " does not decay at the truncation boundary (relative edge value " +
                        num(leak) + "); not square-integrable on the real line");
  };
  loss(p.qhat1, "qhat1", r.qhat1_l2, r.qhat1_leakage);
  loss(p.qhat2, "qhat2", r.qhat2_l2, r.qhat2_leakage);
  r.pass = r.violations.empty();
  return r;
}

// ---------------------------------------------------------------------------

std::vector<double> lipschitz_kappa_layers(const LayerParams& p, double fuel_bound, double rho,
                                           double dx) {
  p.validate_shapes();
  const Index n = p.layers();
  const Index m = p.nodes();
  if (n < 2) throw InvalidArgument("lipschitz_kappa: at least two layers are required");
  if (!(rho >= 0)) throw InvalidArgument("lipschitz_kappa: rho must be nonnegative");
  if (!(fuel_bound >= 0)) throw InvalidArgument("lipschitz_kappa: fuel bound must be >= 0");
  const double k3 = fuel_bound;
  const double gp = arrhenius_g_prime_sup(p.E);
  // |g(v)v - g(w)w| <= L |v - w|; node values in the ball satisfy |v_j| <= rho / sqrt(dx).
  const double L_gtheta = std::min(arrhenius_g_theta_lipschitz(),
                                   rho / std::sqrt(dx) * gp + kArrheniusSup);

  std::vector<double> kappa(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    double sup_diag = 0, sup_up = 0, sup_dn = 0;
    for (Index j = 0; j < m; ++j) {
      const double a = p.a(i, j);
      const double b = p.b(i, j);
      if (!(a > 0) || b < 0)
        throw AuditFailure("lipschitz_kappa: (H1) violated (need a > 0, b >= 0)");
      const double den_max = a + b * k3;
      const double drift = std::abs(p.c_x(i, j)) / a;
      const double heat_release = std::abs(p.K(i, j)) * b * k3 / den_max;
      const double burn = std::abs(p.d(i, j)) * k3 / den_max;
      const double e_up = (i + 1 < n) ? std::abs(p.q(i, j)) / a : 0.0;
      const double e_dn = (i > 0) ? std::abs(p.q(i - 1, j)) / a : 0.0;
      double loss = 0;
      if (i == 0) loss += std::abs(p.qhat1(j)) / a;
      if (i == n - 1) loss += std::abs(p.qhat2(j)) / a;
      const double diag = drift + heat_release * L_gtheta + burn * gp + e_up + e_dn + loss;
      sup_diag = std::max(sup_diag, diag);
      sup_up = std::max(sup_up, e_up);
      sup_dn = std::max(sup_dn, e_dn);
    }
    kappa[static_cast<std::size_t>(i)] = sup_diag + sup_up + sup_dn;
  }
  return kappa;
}

double lipschitz_kappa(const LayerParams& p, double fuel_bound, double rho, double dx) {
  const auto k = lipschitz_kappa_layers(p, fuel_bound, rho, dx);
  return *std::max_element(k.begin(), k.end());
}

double source_at_zero_bound(const LayerParams& p, double dx) {
  p.validate_shapes();
  const Index n = p.layers();
  if (n < 2) throw InvalidArgument("source_at_zero_bound: at least two layers are required");
  const double ue = std::abs(p.u_e);
  if (ue == 0) return 0;
  const Profile<double> first = p.qhat1.abs() / p.a.row(0).transpose();
  const Profile<double> last = p.qhat2.abs() / p.a.row(n - 1).transpose();
  return ue * std::max(std::sqrt(dx * first.square().sum()), std::sqrt(dx * last.square().sum()));
}

double bound_mu(const LayerParams& p, double fuel_bound, double rho, double dx) {
  return lipschitz_kappa(p, fuel_bound, rho, dx) * rho + source_at_zero_bound(p, dx);
}

// ---------------------------------------------------------------------------

double lanczos_step_norm(const Propagator& P, Index layer, int max_iterations, double tolerance,
                         int* iterations) {
  if (P.is_identity()) {
    if (iterations) *iterations = 0;
    return 1.0;
  }
  // Lanczos with full reorthogonalization on the symmetric operator P^T P. The
  // top of its spectrum is tightly clustered for small steps, which stalls plain
  // power iteration well short of the largest singular value.
  const Index m = P.layer(layer).implicit_part.size();
  const Index cap = std::min<Index>(m, max_iterations);
  std::mt19937 rng(20240611u + static_cast<unsigned>(layer));
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXd Q(m, cap + 1);
  Eigen::VectorXd v(m);
  for (Index j = 0; j < m; ++j) v(j) = 1.0 + 0.01 * U(rng);
  Q.col(0) = v.normalized();
  std::vector<double> alpha, beta;
  double theta = 0;
  for (Index k = 0; k < cap; ++k) {
    const Profile<double> q = Q.col(k).array();
    Eigen::VectorXd w = P.apply_transpose(layer, P.apply_layer(layer, q)).matrix();
    alpha.push_back(Q.col(k).dot(w));
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
    const double b = w.norm();
    const Index size = k + 1;
    const bool last = size == cap;
    if (size % 4 == 0 || last || b == 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
      Eigen::VectorXd sub = size > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), size - 1))
                                     : Eigen::VectorXd();
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = es.eigenvalues()(size - 1);
      const double residual = b * std::abs(es.eigenvectors()(size - 1, size - 1));
      // Krylov space exhausted means the Ritz values are exact.
      if (residual <= tolerance * std::abs(theta) || b == 0 || size == m) {
        if (iterations) *iterations = static_cast<int>(size);
        return std::sqrt(std::max(theta, 0.0));
      }
    }
    if (last) break;
    beta.push_back(b);
    Q.col(k + 1) = w / b;
  }
  throw Error("growth_beta: Lanczos iteration did not converge within " +
              std::to_string(cap) + " steps");
}

double step_log_norm(const Propagator& P, Index layer) {
  if (P.is_identity() || !(P.theta() > 0)) throw InvalidArgument("step_log_norm: needs theta > 0");
  const Tridiagonal<double>& A = P.layer(layer).implicit_part;
  const Index m = A.size();
  const double scale = P.theta() * P.dt();
  // Symmetric part of -L_h, recovered from I + theta dt L_h.
  Eigen::VectorXd diag(m), off(std::max<Index>(m - 1, 0));
  for (Index j = 0; j < m; ++j) diag(j) = -(A.diag(j) - 1.0) / scale;
  for (Index j = 0; j + 1 < m; ++j) off(j) = -0.5 * (A.super(j) + A.sub(j + 1)) / scale;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m - 1);
}

double step_norm(const Propagator& P, Index layer, int max_iterations, double tolerance,
                 int* iterations) {
  if (P.is_identity()) {
    if (iterations) *iterations = 0;
    return 1.0;
  }
  if (P.theta() > 0) {
    // With <-L x, x> <= omega |x|^2 and M = theta dt L, the step is
    // (1+r)/2 C + (1-r)/2 I with r = (1-theta)/theta and C the Cayley transform
    // (I+M)^{-1}(I-M), whose norm is at most (1+theta dt omega)/(1-theta dt omega).
    const double w = std::max(0.0, P.theta() * P.dt() * step_log_norm(P, layer));
    if (w < 0.5) {
      const double r = (1.0 - P.theta()) / P.theta();
      if (iterations) *iterations = 0;
      return 0.5 * (1.0 + r) * (1.0 + w) / (1.0 - w) + 0.5 * std::abs(1.0 - r);
    }
  }
  return lanczos_step_norm(P, layer, max_iterations, tolerance, iterations);
}

BetaEstimate growth_beta(const LayerParams& p, const FuelHistory& fuel, const Grid<double>& grid,
                         const std::vector<double>& probes, double dt, const StepScheme& scheme,
                         int max_iterations, double tolerance) {
  if (!(dt > 0)) throw InvalidArgument("growth_beta: dt must be positive");
  BetaEstimate est;
  double worst = -std::numeric_limits<double>::infinity();
  // Time-independent coefficients give the same step at every probe.
  const bool frozen = fuel.time_invariant() || (p.b == 0).all();
  for (double t : probes) {
    const Propagator P = build_propagator(p, fuel, grid, t, t + dt, scheme);
    for (Index i = 0; i < P.layers(); ++i) {
      int its = 0;
      const double s = step_norm(P, i, max_iterations, tolerance, &its);
      est.max_step_norm = std::max(est.max_step_norm, s);
      est.max_iterations = std::max(est.max_iterations, its);
      if (s > 0) worst = std::max(worst, std::log(s) / dt);
    }
    if (frozen) break;
  }
  est.beta = std::max(0.0, worst);
  return est;
}

double contraction_step(double kappa, double beta, double mu, double rho, double R, double T) {
  if (!(T > 0)) throw InvalidArgument("contraction_step: T must be positive");
  if (kappa < 0 || mu < 0 || beta < 0)
    throw InvalidArgument("contraction_step: kappa, mu, beta must be nonnegative");
  const double growth = std::exp(beta * T);
  if (!(R > rho * growth)) throw InvalidArgument("contraction_step: need R > rho e^{beta T}");
  double w = T;
  if (kappa > 0) w = std::min(w, 1.0 / (kappa * growth));
  if (mu > 0) w = std::min(w, (R / growth - rho) / mu);
  return 0.9 * w;
}

double continuation_epsilon(double t0, double phi_norm, double kappa, double mu, double beta) {
  if (phi_norm < 0) throw InvalidArgument("continuation_epsilon: negative norm");
  const double R = 2 * phi_norm * std::exp(beta * (t0 + 1));
  const double den = kappa * R + mu;
  if (den == 0) return 1.0;
  return std::min(1.0, phi_norm / den);
}

// ---------------------------------------------------------------------------

std::vector<Violation> HypothesisReport::violations() const {
  std::vector<Violation> v = h1.violations;
  v.insert(v.end(), h2.violations.begin(), h2.violations.end());
  v.insert(v.end(), h3.violations.begin(), h3.violations.end());
  return v;
}

HypothesisReport audit(const Problem& problem, double T, double step_dt, const StepScheme& scheme,
                       int probe_count) {
  if (!(T > 0)) throw InvalidArgument("audit: T must be positive");
  HypothesisReport r;
  r.T = T;
  r.step_dt = step_dt;
  r.probe_count = probe_count;
  r.h1 = check_H1(problem.params, problem.grid);
  r.h2 = check_H2(problem.fuel, problem.fuel_mode, problem.grid, T, probe_count);
  r.h3 = check_H3(problem.params, problem.grid);
  r.k1 = r.h1.k1;
  r.k2 = r.h1.k2;
  r.k3 = r.h2.k3;
  r.notes.push_back(
      "kappa takes node-wise sup-norms of each rate in the source with y anywhere in [0, k3]");
  r.notes.push_back("beta is estimated from " + std::to_string(probe_count) +
                    " probe steps; growth between probe times is not resolved");
  if (!r.h1.pass || !r.h2.pass) {
    r.notes.push_back("constants not computed: (H1)/(H2) failed");
    return r;
  }
  const double dx = problem.grid.dx;
  const Index n = problem.layers();
  if (problem.phi.rows() != n || problem.phi.cols() != problem.grid.m)
    throw InvalidArgument("audit: initial data shape mismatch");
  r.rho = std::max(l2_norm(problem.phi, dx), std::numeric_limits<double>::min());
  const BetaEstimate be = growth_beta(problem.params, effective_fuel(problem), problem.grid,
                                      probe_times(T, probe_count), step_dt, scheme);
  r.beta = be.beta;
  r.R = 2 * r.rho * std::exp(r.beta * T);
  r.kappa = lipschitz_kappa(problem.params, r.k3, r.R, dx);
  r.kappa_global =
      lipschitz_kappa(problem.params, r.k3, std::numeric_limits<double>::infinity(), dx);
  r.mu0 = source_at_zero_bound(problem.params, dx);
  r.mu = r.kappa * r.R + r.mu0;
  r.T_prime = contraction_step(r.kappa, r.beta, r.mu, r.rho, r.R, T);
  return r;
}

std::string to_text(const HypothesisReport& r) {
  std::ostringstream o;
  auto kv = [&](const char* k, const std::string& v) { o << "  " << k << ": " << v << "\n"; };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  o << "summary:\n";
  kv("pass", b(r.passed()));
  kv("T", num(r.T));
  kv("step_dt", num(r.step_dt));
  kv("probe_count", std::to_string(r.probe_count));
  o << "H1:\n";
  kv("pass", b(r.h1.pass));
  kv("k1", num(r.h1.k1));
  kv("k2", num(r.h1.k2));
  kv("max_first_difference", num(r.h1.max_first_difference));
  kv("max_second_difference", num(r.h1.max_second_difference));
  o << "H2:\n";
  kv("pass", b(r.h2.pass));
  kv("k3", num(r.h2.k3));
  kv("max_y_x", num(r.h2.max_y_x));
  kv("max_y_xx", num(r.h2.max_y_xx));
  kv("max_y_t", num(r.h2.max_y_t));
  kv("max_y_tx", num(r.h2.max_y_tx));
  o << "H3:\n";
  kv("pass", b(r.h3.pass));
  kv("sup_d", num(r.h3.sup_d));
  kv("sup_q", num(r.h3.sup_q));
  kv("sup_K", num(r.h3.sup_K));
  kv("qhat1_l2", num(r.h3.qhat1_l2));
  kv("qhat2_l2", num(r.h3.qhat2_l2));
  kv("qhat1_edge_ratio", num(r.h3.qhat1_leakage));
  kv("qhat2_edge_ratio", num(r.h3.qhat2_leakage));
  o << "constants:\n";
  kv("kappa", num(r.kappa));
  kv("kappa_global", num(r.kappa_global));
  kv("mu", num(r.mu));
  kv("mu0", num(r.mu0));
  kv("beta", num(r.beta));
  kv("rho", num(r.rho));
  kv("R", num(r.R));
  kv("T_prime", num(r.T_prime));
  o << "violations:\n";
  for (const auto& v : r.violations()) {
    o << "  - " << v.hypothesis << " layer=" << (v.layer < 0 ? 0 : v.layer + 1)
      << " node=" << v.node << ": " << v.message << "\n";
  }
  o << "notes:\n";
  for (const auto& n : r.notes) o << "  - " << n << "\n";
  return o.str();
}

}  // namespace porocomb
