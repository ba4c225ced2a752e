#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "porocomb/model.hpp"
#include "support.hpp"

namespace porocomb {
namespace {

using testing::Constants;
using testing::constant_params;

// Dense scan over theta in (0, 100E].
double scan_max(double E, double (*fn)(double, double)) {
  double best = 0;
  const int n = 2000000;
  for (int k = 1; k <= n; ++k) best = std::max(best, fn(100.0 * E * k / n, E));
  return best;
}

TEST(Arrhenius, Values) {
  EXPECT_EQ(arrhenius_g(-5.0, 1.0), 0.0);
  EXPECT_EQ(arrhenius_g(0.0, 1.0), 0.0);
  EXPECT_NEAR(arrhenius_g(2.0, 2.0), 0.36787944117144233, 1e-15);
  EXPECT_GE(arrhenius_g(1e6 * 3.0, 3.0), 0.999999);
  EXPECT_LT(arrhenius_g(1e12, 1.0), 1.0);
  EXPECT_GT(arrhenius_g(1e6, 1.0), 1 - 1e-5);
}

TEST(Arrhenius, DerivativeFiniteAtSubnormalTemperatures) {
  for (double theta : {5e-324, 1e-310, 1e-160, 1e-3}) {
    EXPECT_TRUE(std::isfinite(arrhenius_g_prime(theta, 1.0)));
    EXPECT_EQ(arrhenius_g_prime(theta, 1.0), 0.0);
  }
}

TEST(Arrhenius, NondecreasingAndBounded) {
  double prev = 0;
  for (int k = -1000; k <= 100000; ++k) {
    const double th = 0.001 * k;
    const double g = arrhenius_g(th, 0.8);
    EXPECT_GE(g, prev);
    EXPECT_LT(g, 1.0);
    prev = g;
  }
  EXPECT_LT(arrhenius_g(1e-8, 0.8), 1e-300);
}

TEST(Arrhenius, DerivativeSupMatchesDenseScan) {
  for (double E : {0.5, 1.0, 3.0}) {
    const double sup = arrhenius_g_prime_sup(E);
    EXPECT_NEAR(arrhenius_g_prime(E / 2, E), sup, 1e-15);
    EXPECT_NEAR(scan_max(E, arrhenius_g_prime), sup, 1e-6);
  }
  EXPECT_NEAR(arrhenius_g_prime_sup(1.0), 0.541341, 1e-6);
  EXPECT_EQ(arrhenius_g_prime(-1.0, 1.0), 0.0);
  EXPECT_EQ(arrhenius_g_prime(0.0, 1.0), 0.0);
}

TEST(Arrhenius, DerivativeMatchesFiniteDifference) {
  for (double th : {0.1, 0.5, 1.3, 7.0}) {
    const double h = 1e-6;
    const double fd = (arrhenius_g(th + h, 1.2) - arrhenius_g(th - h, 1.2)) / (2 * h);
    EXPECT_NEAR(arrhenius_g_prime(th, 1.2), fd, 1e-8);
  }
}

TEST(Arrhenius, ThetaTimesGLipschitzBound) {
  for (double E : {0.3, 1.0, 4.0}) {
    double sup = 0;
    for (int k = 1; k <= 1000000; ++k) {
      const double th = 100.0 * E * k / 1000000;
      sup = std::max(sup, std::abs(arrhenius_g_prime(th, E) * th + arrhenius_g(th, E)));
    }
    // (1 + r) e^{-r} with r = E / theta decreases in r, so the sharp value is 1 as theta grows
    EXPECT_LE(sup, 1.0);
    EXPECT_NEAR(sup, 1.0, 1e-4);
    EXPECT_LE(sup, arrhenius_g_theta_lipschitz());
  }
}

TEST(Coefficients, NoFuelCoupling) {
  const auto g = make_grid(0.0, 1.0, 5);
  Constants k;
  k.a = 2;
  k.lambda = 3;
  k.c = 0.5;
  const auto p = constant_params(2, g, k);
  const Field<double> y = Field<double>::Constant(2, 5, 0.7);
  const auto co = coefficient_fields(p, y);
  EXPECT_TRUE((co.alpha == 1.5).all());
  EXPECT_TRUE((co.beta == 0.25).all());
}

TEST(Coefficients, Arithmetic) {
  const auto g = make_grid(0.0, 1.0, 5);
  Constants k;
  k.a = 1;
  k.b = 1;
  k.lambda = 2;
  k.c = 3;
  const auto p = constant_params(2, g, k);
  const auto co = coefficient_fields(p, Field<double>::Ones(2, 5));
  EXPECT_TRUE((co.alpha == 1.0).all());
  EXPECT_TRUE((co.beta == 1.5).all());
}

TEST(Coefficients, AlphaDecreasesWithFuelAndStaysParabolic) {
  const auto g = make_grid(0.0, 1.0, 5);
  Constants k;
  k.a = 1.5;
  k.b = 2;
  k.lambda = 0.5;
  const auto p = constant_params(2, g, k);
  const auto lo = coefficient_fields(p, Field<double>::Constant(2, 5, 0.2));
  const auto hi = coefficient_fields(p, Field<double>::Constant(2, 5, 0.9));
  EXPECT_TRUE((hi.alpha < lo.alpha).all());
  // k1 = 0.5, k2 = 2, k3 = 0.9
  EXPECT_TRUE((hi.alpha >= 0.5 / (2 * (1 + 0.9))).all());
}

TEST(Coefficients, RejectsNonpositiveDenominator) {
  const auto g = make_grid(0.0, 1.0, 5);
  Constants k;
  k.a = 0;
  const auto p = constant_params(2, g, k);
  EXPECT_THROW(coefficient_fields(p, Field<double>::Zero(2, 5)), InvalidArgument);
}

TEST(Source, VanishesWithoutFuelCouplingOrLoss) {
  const auto g = make_grid(0.0, 1.0, 9);
  Constants k;
  k.d = 1;
  k.K = 1;
  k.b = 1;
  const auto p = constant_params(3, g, k);
  std::mt19937 rng(3);
  const Field<double> u = testing::random_field(3, 9, rng, 5);
  EXPECT_TRUE((source_f(p, Field<double>::Zero(3, 9), u) == 0.0).all());
}

TEST(Source, AmbientEquilibrium) {
  const auto g = make_grid(0.0, 1.0, 9);
  Constants k;
  k.q = 0.7;
  k.qhat = 0.4;
  k.d = 2;
  const auto p = constant_params(3, g, k, 0.3);
  const Field<double> u = Field<double>::Constant(3, 9, 0.3);
  EXPECT_TRUE((source_f(p, Field<double>::Zero(3, 9), u).abs() < 1e-15).all());
}

TEST(Source, TwoLayerHandEvaluation) {
  for (double E : {1.0, 0.7}) {
    const auto g = make_grid(0.0, 1.0, 3);
    Constants k;
    k.d = 1;
    k.q = 1;
    const auto p = constant_params(2, g, k, 0, E);
    Field<double> u = Field<double>::Zero(2, 3);
    u(0, 1) = 2 * E;
    const Field<double> f = source_f(p, Field<double>::Ones(2, 3), u);
    // Independent scalar evaluation: layer 1 burns at g(2E) and loses 2E to layer 2.
    const double f1 = std::exp(-E / (2 * E)) + (0 - 2 * E);
    const double f2 = 1.0 * 0.0 + (2 * E - 0);
    EXPECT_NEAR(f(0, 1), f1, 1e-15);
    EXPECT_NEAR(f(1, 1), f2, 1e-15);
    EXPECT_NEAR(f(0, 1), std::exp(-0.5) - 2 * E, 1e-15);
    EXPECT_EQ(f(1, 1), 2 * E);
  }
}

TEST(Source, InteriorLayerCouplesBothSidesAndEndsLoseHeat) {
  const auto g = make_grid(0.0, 1.0, 3);
  Constants k;
  k.a = 2;
  k.q = 0.5;
  k.qhat = 0.25;
  const auto p = constant_params(3, g, k, 1.0);
  Field<double> u(3, 3);
  u.col(0) << 1, 2, 4;
  u.col(1) << 1, 2, 4;
  u.col(2) << 1, 2, 4;
  const Field<double> f = source_f(p, Field<double>::Zero(3, 3), u);
  EXPECT_DOUBLE_EQ(f(0, 0), (0.5 * (2 - 1) - 0.25 * (1 - 1)) / 2);
  EXPECT_DOUBLE_EQ(f(1, 0), (0.5 * (4 - 2) - 0.5 * (2 - 1)) / 2);
  EXPECT_DOUBLE_EQ(f(2, 0), (-0.5 * (4 - 2) - 0.25 * (4 - 1)) / 2);
}

TEST(Source, AdvectiveCorrectionUsesStoredDerivative) {
  const auto g = make_grid(0.0, 1.0, 3);
  auto p = constant_params(2, g, Constants{});
  p.c_x.setConstant(0.3);
  const Field<double> u = Field<double>::Constant(2, 3, 2.0);
  EXPECT_TRUE((source_f(p, Field<double>::Zero(2, 3), u) == -0.6).all());
}

TEST(Source, RejectsSingleLayer) {
  const auto g = make_grid(0.0, 1.0, 3);
  auto p = constant_params(2, g, Constants{});
  LayerParams one = p;
  for (Field<double>* f : {&one.a, &one.b, &one.c, &one.c_x, &one.d, &one.lambda, &one.K, &one.A})
    *f = f->topRows(1).eval();
  one.q.resize(0, 3);
  EXPECT_THROW(source_f(one, Field<double>::Zero(1, 3), Field<double>::Zero(1, 3)),
               InvalidArgument);
}

TEST(Fuel, PrescribedFamilies) {
  const auto g = make_grid(-1.0, 1.0, 3);
  const auto ones = fuel_prescribed({FuelFamily::constant(1)}, g, 3.7);
  EXPECT_TRUE((ones == 1.0).all());
  const auto front = fuel_prescribed({FuelFamily::logistic_front(0, 1, 1)}, g, 0.0);
  EXPECT_DOUBLE_EQ(front(0, 1), 0.5);
  const auto moved = fuel_prescribed({FuelFamily::logistic_front(0, 1, 1)}, g, 1.0);
  EXPECT_DOUBLE_EQ(moved(0, 2), 0.5);
  const double r = 0.8, t = 1.5;
  const auto decay = fuel_prescribed({FuelFamily::gaussian_decay(0, 0.5, r, 0.9)}, g, t);
  EXPECT_NEAR(decay(0, 1), 0.9 * std::exp(-r * t), 1e-15);
  EXPECT_THROW(fuel_prescribed({FuelFamily::constant(1.5)}, g, 0.0), Error);
}

TEST(Fuel, FamilyDerivativesMatchFiniteDifferences) {
  const FuelFamily fams[] = {FuelFamily::logistic_front(0.3, 0.7, 1.2),
                             FuelFamily::gaussian_decay(-0.4, 0.9, 0.6, 0.8)};
  for (const auto& f : fams) {
    const double x = 0.37, t = 0.55, h = 1e-5;
    EXPECT_NEAR(f.d_x(x, t), (f.value(x + h, t) - f.value(x - h, t)) / (2 * h), 1e-8);
    EXPECT_NEAR(f.d_t(x, t), (f.value(x, t + h) - f.value(x, t - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(f.d_xx(x, t), (f.d_x(x + h, t) - f.d_x(x - h, t)) / (2 * h), 1e-7);
    EXPECT_NEAR(f.d_tx(x, t), (f.d_x(x, t + h) - f.d_x(x, t - h)) / (2 * h), 1e-7);
  }
}

TEST(Fuel, ParseRoundTrip) {
  const auto f = parse_fuel_family("logistic_front(-4, 0.5, 1.5)");
  EXPECT_EQ(f.kind, FuelFamily::Kind::logistic_front);
  EXPECT_EQ(parse_fuel_family(f.to_string()).to_string(), f.to_string());
  EXPECT_THROW(parse_fuel_family("sawtooth(1)"), Error);
}

TEST(Fuel, StepConsumesMonotonically) {
  const auto g = make_grid(0.0, 1.0, 4);
  Constants k;
  k.A = 2;
  const auto p = constant_params(2, g, k, 0, 1.0);
  const Field<double> y = Field<double>::Constant(2, 4, 0.8);
  EXPECT_TRUE((fuel_step(y, Field<double>::Constant(2, 4, -1.0), p, 0.3) == y).all());
  EXPECT_TRUE((fuel_step(Field<double>::Zero(2, 4), Field<double>::Constant(2, 4, 3.0), p, 0.3) ==
               0.0)
                  .all());
  // A g(u) dt = ln 2 at u = E = 1: g = e^{-1}.
  const double dt = std::log(2.0) / (2 * std::exp(-1.0));
  const Field<double> half = fuel_step(y, Field<double>::Ones(2, 4), p, dt);
  EXPECT_NEAR(half(0, 0), 0.4, 1e-15);
  std::mt19937 rng(5);
  const Field<double> u = testing::random_field(2, 4, rng, 4);
  const Field<double> next = fuel_step(y, u, p, 0.1);
  EXPECT_TRUE((next <= y).all());
  EXPECT_TRUE((next >= 0).all());
}

RawPhysicalParams two_layer_raw() {
  RawPhysicalParams raw;
  raw.layers.resize(2);
  raw.Q = {FunctionSpec::constant(0.5)};
  return raw;
}

TEST(Nondimensionalize, MeanHeatCapacity) {
  auto raw = two_layer_raw();
  raw.layers[0].rho_r = 1;
  raw.layers[1].rho_r = 3;
  EXPECT_DOUBLE_EQ(mean_rock_heat_capacity(raw), 2.0);
  const auto g = make_grid(0.0, 1.0, 5);
  const auto p = nondimensionalize(raw, g);
  // b_i = eta0 c_c / mean; a single-layer-1 normalization would divide by 1.
  EXPECT_DOUBLE_EQ(p.b(0, 0), 0.5);
}

TEST(Nondimensionalize, IdenticalLayersAndEtaScaling) {
  auto raw = two_layer_raw();
  raw.layers[1].eta0 = FunctionSpec::constant(0.5);
  const auto g = make_grid(0.0, 1.0, 5);
  const auto p = nondimensionalize(raw, g);
  EXPECT_TRUE((p.a.row(0) == p.a.row(1)).all());
  EXPECT_DOUBLE_EQ(p.b(1, 2), 0.5 * p.b(0, 2));
}

TEST(Nondimensionalize, ConductivityWithoutCoke) {
  RawLayer l;
  l.l = 0;
  l.lambda_r = 2;
  l.lambda_c = 100;
  l.lambda_g = 0.5;
  EXPECT_DOUBLE_EQ(layer_conductivity(l, 0.25), 0.75 * 2 + 0.25 * 0.5);
}

TEST(Nondimensionalize, ActivationEnergyAndAmbient) {
  auto raw = two_layer_raw();
  raw.E_act = 6;
  raw.R_gas = 2;
  raw.T_ref = 1.5;
  raw.T_e = 0.3;
  const auto p = nondimensionalize(raw, make_grid(0.0, 1.0, 5));
  EXPECT_DOUBLE_EQ(p.E, 2.0);
  EXPECT_DOUBLE_EQ(p.u_e, 0.2);
}

TEST(Nondimensionalize, AdvectionDerivativeByCenteredDifferences) {
  auto raw = two_layer_raw();
  raw.layers[0].v = 2;
  const auto g = make_grid(0.0, 1.0, 5);
  const auto p = nondimensionalize(raw, g);
  EXPECT_TRUE((p.c.row(0) == 2.0).all());
  EXPECT_TRUE((p.c_x == 0.0).all());
}

TEST(Nondimensionalize, RejectsBadInputs) {
  const auto g = make_grid(0.0, 1.0, 5);
  auto raw = two_layer_raw();
  raw.x_ref = 0;
  EXPECT_THROW(nondimensionalize(raw, g), InvalidArgument);
  raw = two_layer_raw();
  raw.layers[0].porosity = FunctionSpec::constant(1.0);
  EXPECT_THROW(nondimensionalize(raw, g), InvalidArgument);
  raw = two_layer_raw();
  raw.layers[1].l = 1.5;
  EXPECT_THROW(nondimensionalize(raw, g), InvalidArgument);
}

TEST(FunctionSpec, ParseEvaluateAndBounds) {
  const auto b = parse_function_spec("bump(1, -0.5, 2, 0.5)");
  EXPECT_DOUBLE_EQ(b(2.0), 0.5);
  EXPECT_DOUBLE_EQ(b.lower_bound(), 0.5);
  EXPECT_DOUBLE_EQ(b.upper_bound(), 1.0);
  const auto t = parse_function_spec("tanh_step(1, 3, 0, 2)");
  EXPECT_DOUBLE_EQ(t(0.0), 2.0);
  EXPECT_NEAR(t.derivative(0.0), 0.5, 1e-15);
  EXPECT_EQ(parse_function_spec(t.to_string()).to_string(), t.to_string());
  EXPECT_THROW(parse_function_spec("bump(1, 2)"), ConfigError);
  EXPECT_THROW(parse_function_spec("constant(x)"), ConfigError);
}

TEST(FunctionSpec, CenteredDerivativeExactOnQuadratics) {
  const auto g = make_grid(0.0, 1.0, 11);
  const Profile<double> x = g.nodes();
  const Profile<double> d = centered_derivative((x * x).eval(), g.dx);
  for (Index j = 1; j + 1 < g.m; ++j) EXPECT_NEAR(d(j), 2 * x(j), 1e-13);
}

}  // namespace
}  // namespace porocomb
