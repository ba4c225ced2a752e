#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "porocomb/hypothesis.hpp"
#include "support.hpp"

namespace porocomb {
namespace {

using testing::Constants;
using testing::constant_fuel;
using testing::constant_params;

bool mentions(const std::vector<Violation>& vs, const std::string& text) {
  for (const auto& v : vs)
    if (v.message.find(text) != std::string::npos) return true;
  return false;
}

// Every source term active, coefficients varying in x.
struct ReactiveCase {
  Grid<double> grid = make_grid(-10.0, 10.0, 201);
  LayerParams p;
  double k3 = 0.9;
  ReactiveCase() {
    p = constant_params(3, grid, Constants{}, 0.2, 1.0);
    for (Index j = 0; j < grid.m; ++j) {
      const double x = grid.node(j);
      const double bump = std::exp(-x * x / 9);
      p.a.col(j) << 1 + 0.2 * std::tanh(x), 1.1, 0.9 + 0.1 * bump;
      p.b.col(j) << 0.5, 0.3, 0.8;
      p.c.col(j) << 0.4 + 0.2 * std::tanh(x / 2), 0.3, 0.1;
      p.c_x.col(j) << 0.1 / std::pow(std::cosh(x / 2), 2), 0, 0;
      p.d.col(j) << 1, 0.5, 2 * bump;
      p.K.col(j) << 0.2, 0.1, 0.3;
      p.lambda.col(j) << 1 + 0.3 * bump, 0.8, 1.2;
      p.q.col(j) << 0.3, 0.1 + 0.2 * bump;
      p.qhat1(j) = 0.2 * std::exp(-x * x / 4);
      p.qhat2(j) = 0.1 * std::exp(-(x - 1) * (x - 1) / 3);
    }
  }
};

Field<double> random_in_ball(std::mt19937& rng, Index n, const Grid<double>& g, double rho) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Field<double> v = testing::random_field(n, g.m, rng);
  const double shape = U(rng);
  if (shape < 0.3) {
    // one tall spike per layer
    v.setZero();
    for (Index i = 0; i < n; ++i) v(i, static_cast<Index>(U(rng) * (g.m - 1))) = U(rng) - 0.3;
  } else if (shape < 0.6) {
    v = v.abs();
  }
  const double norm = l2_norm(v, g.dx);
  if (norm == 0) return v;
  return v * (rho * U(rng) / norm);
}

Field<double> random_fuel(std::mt19937& rng, Index n, Index m, double k3) {
  std::uniform_real_distribution<double> U(0.0, k3);
  Field<double> y(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) y(i, j) = U(rng);
  return y;
}

TEST(CheckH1, ConstantsPass) {
  const auto g = make_grid(0.0, 1.0, 11);
  const auto r = check_H1(constant_params(2, g, Constants{}), g);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.k1, 1.0);
  EXPECT_GE(r.k2, 1.0);
  EXPECT_LT(r.k1, r.k2);
}

TEST(CheckH1, ZeroCrossingReportsNode) {
  const auto g = make_grid(-1.0, 1.0, 11);
  auto p = constant_params(2, g, Constants{});
  for (Index j = 0; j < g.m; ++j) p.a(1, j) = g.node(j) + 0.5;  // nonpositive at nodes 0..2
  const auto r = check_H1(p, g);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front().layer, 1);
  EXPECT_EQ(r.violations.front().node, 0);
  EXPECT_EQ(r.violations.size(), 3u);
}

TEST(CheckH1, AdvectionAtUpperBoundPasses) {
  const auto g = make_grid(0.0, 1.0, 11);
  Constants k;
  k.a = 1;
  k.lambda = 2;
  k.c = 2;
  const auto r = check_H1(constant_params(2, g, k), g);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.k2, 2.0);
}

TEST(CheckH1, ReportsDifferenceBounds) {
  ReactiveCase rc;
  const auto r = check_H1(rc.p, rc.grid);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.max_first_difference, 0.0);
  EXPECT_GT(r.max_second_difference, 0.0);
}

TEST(CheckH2, ConstantFuel) {
  const auto g = make_grid(0.0, 1.0, 11);
  const auto r = check_H2(constant_fuel(2, 0.5), FuelMode::prescribed, g, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.k3, 0.5);
  EXPECT_EQ(r.max_y_x, 0.0);
  EXPECT_EQ(r.max_y_xx, 0.0);
  EXPECT_EQ(r.max_y_t, 0.0);
  EXPECT_EQ(r.max_y_tx, 0.0);
}

TEST(CheckH2, LogisticFront) {
  const auto g = make_grid(-5.0, 5.0, 51);
  const auto fuel = FuelHistory::prescribed(
      {FuelFamily::logistic_front(0, 1, 1), FuelFamily::constant(0.2)});
  const auto r = check_H2(fuel, FuelMode::prescribed, g, 2.0);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.k3, 1.0);
  EXPECT_GT(r.k3, 0.9);
  EXPECT_NEAR(r.max_y_x, 0.25, 1e-3);
}

TEST(CheckH2, FamilyAboveOneFails) {
  const auto g = make_grid(-5.0, 5.0, 51);
  const auto fuel = FuelHistory::prescribed(
      {FuelFamily::gaussian_decay(0, 1, 0.1, 1.5), FuelFamily::constant(0.2)});
  const auto r = check_H2(fuel, FuelMode::prescribed, g, 1.0);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(mentions(r.violations, "> 1"));
}

TEST(CheckH3, CompactBumpPasses) {
  ReactiveCase rc;
  const auto r = check_H3(rc.p, rc.grid);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.qhat1_l2, 0.0);
}

TEST(CheckH3, ConstantLossIsNotSquareIntegrable) {
  const auto g = make_grid(-10.0, 10.0, 101);
  Constants k;
  k.qhat = 0.3;
  const auto r = check_H3(constant_params(2, g, k), g);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(mentions(r.violations, "not square-integrable"));
}

TEST(CheckH3, NoCouplingPasses) {
  const auto g = make_grid(-10.0, 10.0, 101);
  EXPECT_TRUE(check_H3(constant_params(2, g, Constants{}), g).pass);
}

TEST(CheckH3, NegativeSourceFails) {
  const auto g = make_grid(-10.0, 10.0, 101);
  Constants k;
  k.d = -1;
  EXPECT_FALSE(check_H3(constant_params(2, g, k), g).pass);
}

TEST(Kappa, ZeroWithoutSources) {
  const auto g = make_grid(-10.0, 10.0, 101);
  Constants k;
  k.b = 0.5;
  k.c = 0.7;
  EXPECT_EQ(lipschitz_kappa(constant_params(3, g, k), 1.0, 2.0, g.dx), 0.0);
}

TEST(Kappa, LinearInCoupling) {
  const auto g = make_grid(-10.0, 10.0, 101);
  Constants k;
  k.q = 0.3;
  const double k1 = lipschitz_kappa(constant_params(3, g, k), 1.0, 2.0, g.dx);
  k.q = 0.6;
  const double k2 = lipschitz_kappa(constant_params(3, g, k), 1.0, 2.0, g.dx);
  EXPECT_GT(k1, 0.0);
  EXPECT_DOUBLE_EQ(k2, 2 * k1);
}

TEST(Kappa, BoundsEmpiricalLipschitzRatio) {
  ReactiveCase rc;
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int violations = 0;
  double worst = 0;
  for (double rho : {0.5, 3.0}) {
    const double kappa = lipschitz_kappa(rc.p, rc.k3, rho, rc.grid.dx);
    for (int k = 0; k < 1000; ++k) {
      const Field<double> y = random_fuel(rng, 3, rc.grid.m, rc.k3);
      const Field<double> v = random_in_ball(rng, 3, rc.grid, rho);
      Field<double> w = random_in_ball(rng, 3, rc.grid, rho);
      if (k % 2) {
        // nearby pair, kept in the ball
        w = v + 1e-3 * testing::random_field(3, rc.grid.m, rng);
        if (l2_norm(w, rc.grid.dx) > rho) continue;
      }
      const double dvw = l2_norm((v - w).eval(), rc.grid.dx);
      if (dvw == 0) continue;
      const double ratio =
          l2_norm((source_f(rc.p, y, v) - source_f(rc.p, y, w)).eval(), rc.grid.dx) / dvw;
      worst = std::max(worst, ratio / kappa);
      if (ratio > kappa) ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
  EXPECT_GT(worst, 0.0);
}

TEST(Mu, ZeroWithoutSources) {
  const auto g = make_grid(-10.0, 10.0, 101);
  Constants k;
  k.b = 0.5;
  EXPECT_EQ(bound_mu(constant_params(2, g, k, 0.4), 1.0, 2.0, g.dx), 0.0);
}

TEST(Mu, MonotoneInRadius) {
  ReactiveCase rc;
  EXPECT_GE(bound_mu(rc.p, rc.k3, 2.0, rc.grid.dx), bound_mu(rc.p, rc.k3, 1.0, rc.grid.dx));
}

TEST(Mu, BoundsSourceNorm) {
  ReactiveCase rc;
  const double rho = 2.0;
  const double mu = bound_mu(rc.p, rc.k3, rho, rc.grid.dx);
  std::mt19937 rng(99);
  int violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const Field<double> y = random_fuel(rng, 3, rc.grid.m, rc.k3);
    const Field<double> w = random_in_ball(rng, 3, rc.grid, rho);
    if (l2_norm(source_f(rc.p, y, w), rc.grid.dx) > mu) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Mu, SourceAtZeroIsAmbientLoss) {
  ReactiveCase rc;
  const double bound = source_at_zero_bound(rc.p, rc.grid.dx);
  const Field<double> f0 = source_f(rc.p, Field<double>::Zero(3, rc.grid.m),
                                    Field<double>::Zero(3, rc.grid.m));
  EXPECT_NEAR(l2_norm(f0, rc.grid.dx), bound, 1e-14);
}

double dense_step_norm(const Propagator& P, Index layer) {
  const Index m = P.layer(layer).implicit_part.size();
  Eigen::MatrixXd M(m, m);
  for (Index j = 0; j < m; ++j) {
    Profile<double> e = Profile<double>::Zero(m);
    e(j) = 1;
    M.col(j) = P.apply_layer(layer, e).matrix();
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

TEST(StepNorm, BoundIsSharpAgainstDenseSvd) {
  ReactiveCase rc;
  const auto fuel = FuelHistory::prescribed({FuelFamily::logistic_front(-4, 0.5, 1.5),
                                             FuelFamily::constant(0.6),
                                             FuelFamily::constant(0.9)});
  for (double dt : {1e-3, 1e-2}) {
    const auto P = build_propagator(rc.p, fuel, rc.grid, 0.5, 0.5 + dt, StepScheme{});
    for (Index i = 0; i < 3; ++i) {
      const double exact = dense_step_norm(P, i);
      const double bound = step_norm(P, i, 2000, 1e-8);
      EXPECT_GE(bound, exact * (1 - 1e-12));
      EXPECT_NEAR(std::log(bound) / dt, std::log(exact) / dt, 1e-3);
      int steps = 0;
      const double lanczos = lanczos_step_norm(P, i, 2000, 1e-8, &steps);
      EXPECT_NEAR(lanczos, exact, 1e-9);
      EXPECT_GT(steps, 0);
    }
  }
}

TEST(StepNorm, LanczosReportsNonConvergence) {
  ReactiveCase rc;
  const auto P = build_propagator(rc.p, constant_fuel(3, 0.5), rc.grid, 0.0, 1e-3, StepScheme{});
  EXPECT_THROW(lanczos_step_norm(P, 0, 5, 1e-8), Error);
}

TEST(GrowthBeta, PureDiffusionIsContractive) {
  const auto g = make_grid(-5.0, 5.0, 101);
  Constants k;
  k.lambda = 1.3;
  const auto p = constant_params(2, g, k);
  const auto est = growth_beta(p, constant_fuel(2, 0), g, probe_times(1.0, 5), 0.01, StepScheme{});
  EXPECT_LE(est.beta, 1e-12);
  EXPECT_LE(est.max_step_norm, 1 + 1e-10);
}

TEST(GrowthBeta, VaryingDriftStableUnderStepHalving) {
  ReactiveCase rc;
  const auto fuel = constant_fuel(3, 0.5);
  const auto probes = probe_times(1.0, 9);
  const double b1 = growth_beta(rc.p, fuel, rc.grid, probes, 0.02, StepScheme{}).beta;
  const double b2 = growth_beta(rc.p, fuel, rc.grid, probes, 0.01, StepScheme{}).beta;
  EXPECT_GT(b1, 0.0);
  EXPECT_NEAR(b2, b1, 0.2 * b1);
  EXPECT_THROW(growth_beta(rc.p, fuel, rc.grid, probes, 0.0, StepScheme{}), InvalidArgument);
}

TEST(ContractionStep, Examples) {
  EXPECT_DOUBLE_EQ(contraction_step(0, 0.3, 0, 1, 10, 2.0), 0.9 * 2.0);
  EXPECT_DOUBLE_EQ(contraction_step(1, 0, 1e-6, 1, 1e6, 10), 0.9);
  EXPECT_THROW(contraction_step(1, 0.5, 1, 1, 1.2, 1.0), InvalidArgument);
  EXPECT_THROW(contraction_step(-1, 0, 1, 1, 3, 1.0), InvalidArgument);
}

TEST(ContractionStep, SatisfiesStrictInequalities) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(0.01, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const double kappa = U(rng), beta = U(rng), mu = U(rng), rho = U(rng), T = U(rng);
    const double R = rho * std::exp(beta * T) * (1 + U(rng));
    const double tp = contraction_step(kappa, beta, mu, rho, R, T);
    EXPECT_GT(tp, 0.0);
    EXPECT_LT(tp, T);
    EXPECT_LE(tp * kappa * std::exp(beta * T), 0.9 * (1 + 1e-15));
    EXPECT_LT(tp, (R / std::exp(beta * T) - rho) / mu);
  }
}

TEST(ContinuationEpsilon, Examples) {
  EXPECT_EQ(continuation_epsilon(3.0, 2.0, 0, 0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(continuation_epsilon(7.5, 1.3, 1.0, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(continuation_epsilon(0.0, 1.3, 1.0, 0, 1.0), 1 / (2 * std::exp(1.0)));
  EXPECT_EQ(continuation_epsilon(0.0, 0.0, 0, 0, 0), 1.0);
  double prev = 2;
  for (double t0 = 0; t0 < 5; t0 += 0.25) {
    const double e = continuation_epsilon(t0, 1.0, 0.8, 0.3, 0.4);
    EXPECT_LE(e, prev);
    prev = e;
  }
}

Problem problem_from(const ReactiveCase& rc, const FuelHistory& fuel) {
  Problem pr;
  pr.grid = rc.grid;
  pr.params = rc.p;
  pr.fuel = fuel;
  pr.phi = testing::gaussian(3, rc.grid, 0.0, 1.0);
  return pr;
}

TEST(Audit, SourceFreeConstantsVanish) {
  const auto g = make_grid(-10.0, 10.0, 101);
  Constants k;
  k.c = 0.5;
  Problem pr;
  pr.grid = g;
  pr.params = constant_params(2, g, k);
  pr.fuel = constant_fuel(2, 0);
  pr.phi = testing::gaussian(2, g, 0.0, 0.5);
  const auto r = audit(pr, 1.0, 0.01, StepScheme{});
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.kappa, 0.0);
  EXPECT_EQ(r.kappa_global, 0.0);
  EXPECT_EQ(r.mu, 0.0);
  EXPECT_EQ(r.mu0, 0.0);
}

TEST(Audit, ReactiveConstantsAreConsistent) {
  ReactiveCase rc;
  const auto pr = problem_from(rc, constant_fuel(3, 0.9));
  const auto r = audit(pr, 1.0, 0.01, StepScheme{});
  ASSERT_TRUE(r.passed());
  EXPECT_GT(r.kappa, 0.0);
  EXPECT_GE(r.kappa_global, r.kappa);
  EXPECT_GT(r.R, r.rho * std::exp(r.beta * r.T));
  EXPECT_GT(r.T_prime, 0.0);
  EXPECT_DOUBLE_EQ(r.k3, 0.9);
  const std::string text = to_text(r);
  for (const char* key : {"H1:", "H2:", "H3:", "kappa:", "mu:", "beta:", "T_prime:"})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}

TEST(Audit, FailingHypothesisSkipsConstants) {
  ReactiveCase rc;
  rc.p.lambda(1, 7) = -0.1;
  const auto r = audit(problem_from(rc, constant_fuel(3, 0.5)), 1.0, 0.01, StepScheme{});
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.violations().empty());
  EXPECT_EQ(r.violations().front().hypothesis, "H1");
}

}  // namespace
}  // namespace porocomb
