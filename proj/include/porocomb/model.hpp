#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "porocomb/function_spec.hpp"
#include "porocomb/grid.hpp"

namespace porocomb {

// ---------------------------------------------------------------------------
// Arrhenius kinetics

/// g(theta) = exp(-E/theta) for theta > 0, 0 otherwise.
inline double arrhenius_g(double theta, double E) {
  return theta > 0 ? std::exp(-E / theta) : 0.0;
}

/// g'(theta) = (E/theta^2) exp(-E/theta) for theta > 0, 0 otherwise.
inline double arrhenius_g_prime(double theta, double E) {
  if (!(theta > 0)) return 0.0;
  const double r = E / theta;
  // exp(-r) underflows long before r^2 overflows
  if (r > 1000) return 0.0;
  return r * r / E * std::exp(-r);
}

/// sup |g| over the real line (not attained).
inline constexpr double kArrheniusSup = 1.0;

/// sup |g'| = 4 e^{-2} / E, attained at theta = E/2.
inline double arrhenius_g_prime_sup(double E) { return 4.0 * std::exp(-2.0) / E; }

/// Lipschitz bound 1 + e^{-1} for theta -> g(theta) theta; the sharp constant is 1.
inline double arrhenius_g_theta_lipschitz() { return 1.0 + std::exp(-1.0); }

// ---------------------------------------------------------------------------
// Model parameters

/// Dimensionless coefficients sampled on the grid. Per-layer fields are n x m;
/// inter-layer couplings q are (n-1) x m; q_i couples layer i with i+1.
struct LayerParams {
  Field<double> a, b, c, c_x, d, lambda, K, A;
  Field<double> q;
  Profile<double> qhat1, qhat2;
  double u_e = 0.0;
  double E = 1.0;

  Index layers() const { return a.rows(); }
  Index nodes() const { return a.cols(); }

  /// Shape check; throws InvalidArgument on mismatch.
  void validate_shapes() const;
};

// ---------------------------------------------------------------------------
// Fuel

/// Smooth closed-form fuel profile y(x, t) with analytic derivatives.
///   constant(c)
///   logistic_front(center, speed, width)       1 / (1 + exp(-(x - center - speed t)/width))
///   gaussian_decay(center, width, rate[, amp]) amp exp(-((x-center)/width)^2) exp(-rate t)
struct FuelFamily {
  enum class Kind { constant, logistic_front, gaussian_decay };
  Kind kind = Kind::constant;
  double p0 = 1, p1 = 0, p2 = 1, p3 = 1;

  static FuelFamily constant(double c) { return {Kind::constant, c, 0, 1, 1}; }
  static FuelFamily logistic_front(double center, double speed, double width) {
    return {Kind::logistic_front, center, speed, width, 1};
  }
  static FuelFamily gaussian_decay(double center, double width, double rate, double amp = 1) {
    return {Kind::gaussian_decay, center, width, rate, amp};
  }

  double value(double x, double t) const;
  double d_x(double x, double t) const;
  double d_xx(double x, double t) const;
  double d_t(double x, double t) const;
  double d_tx(double x, double t) const;

  /// Closed-form bounds of y over x in R, t in [0, T].
  double lower_bound(double T) const;
  double upper_bound(double T) const;

  std::string to_string() const;
};

FuelFamily parse_fuel_family(const std::string& text);

enum class FuelMode { prescribed, coupled };

/// Time-dependent fuel concentration y(x, t), either from per-layer closed-form
/// families or tabulated on time nodes (linear in t between nodes). An optional
/// time-independent additive offset supports perturbation studies.
class FuelHistory {
 public:
  FuelHistory() = default;
  static FuelHistory prescribed(std::vector<FuelFamily> families);
  static FuelHistory tabulated(Trajectory<double> table);

  bool is_tabulated() const { return tabulated_; }
  const std::vector<FuelFamily>& families() const { return families_; }
  const Trajectory<double>& table() const { return table_; }

  Field<double> at(double t, const Grid<double>& grid) const;

  /// True when y does not change with t.
  bool time_invariant() const;

  void set_offset(Field<double> offset) { offset_ = std::move(offset); }
  const Field<double>& offset() const { return offset_; }

 private:
  bool tabulated_ = false;
  std::vector<FuelFamily> families_;
  Trajectory<double> table_;
  Field<double> offset_;
};

/// Prescribed fuel sampled at time t; throws if any value leaves [0, 1].
Field<double> fuel_prescribed(const std::vector<FuelFamily>& families, const Grid<double>& grid,
                              double t);

/// Exact exponential step of y_t = -A y g(u) with u frozen: y * exp(-A g(u) dt).
Field<double> fuel_step(const Field<double>& y, const Field<double>& u, const LayerParams& p,
                        double dt);

// ---------------------------------------------------------------------------
// Coefficients and source

struct Coefficients {
  Field<double> alpha;  // lambda / (a + b y)
  Field<double> beta;   // c / (a + b y)
};

Coefficients coefficient_fields(const LayerParams& p, const Field<double>& y);

/// Reaction/coupling/loss source f(x, t, u), one row per layer. Requires n >= 2.
Field<double> source_f(const LayerParams& p, const Field<double>& y, const Field<double>& u);

// ---------------------------------------------------------------------------
// Nondimensionalization

struct RawLayer {
  FunctionSpec porosity = FunctionSpec::constant(0.3);
  FunctionSpec eta0 = FunctionSpec::constant(1.0);  // initial fuel concentration
  double rho_r = 1, c_r = 1;                         // rock density, heat capacity
  double c_g = 1, c_c = 1;                           // gas, coke heat capacity
  double rho_g = 1;                                  // dimensionless gas density (frozen)
  double Q_h = 1, A_c = 1;                           // heat of reaction, Arrhenius constant
  double lambda_r = 1, lambda_c = 1, lambda_g = 1;   // conductivities
  double l = 0;                                      // coke share of the solid conductivity
  double K_s = 0;                                    // Darcy flow resistance
  double v = 0;                                      // Darcy velocity
  double Yp_alpha = 1;                               // frozen (Y p)^alpha factor
};

struct RawPhysicalParams {
  std::vector<RawLayer> layers;
  std::vector<FunctionSpec> Q;  // n-1 inter-layer heat transfer coefficients
  FunctionSpec Qhat1 = FunctionSpec::constant(0);
  FunctionSpec Qhat2 = FunctionSpec::constant(0);
  double x_ref = 1, t_ref = 1, T_ref = 1, p_ref = 1, rho_g_ref = 1;
  double alpha = 1;   // reaction order
  double E_act = 1;   // activation energy
  double R_gas = 1;
  double T_e = 0;     // ambient temperature
};

/// (1/n) sum_i rho_r_i c_r_i
double mean_rock_heat_capacity(const RawPhysicalParams& raw);

/// (1 - porosity)((1 - l) lambda_r + l lambda_c) + porosity lambda_g
double layer_conductivity(const RawLayer& layer, double porosity);

LayerParams nondimensionalize(const RawPhysicalParams& raw, const Grid<double>& grid);

}  // namespace porocomb
