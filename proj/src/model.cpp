#include "porocomb/model.hpp"

#include <algorithm>
#include <cstdio>

namespace porocomb {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_shape(const Field<double>& f, Index rows, Index cols, const char* name) {
  if (f.rows() != rows || f.cols() != cols)
    throw InvalidArgument(std::string("LayerParams: field '") + name + "' has wrong shape");
}

}  // namespace

void LayerParams::validate_shapes() const {
  const Index n = layers();
  const Index m = nodes();
  if (n < 1 || m < 3) throw InvalidArgument("LayerParams: empty parameter set");
  check_shape(b, n, m, "b");
  check_shape(c, n, m, "c");
  check_shape(c_x, n, m, "c_x");
  check_shape(d, n, m, "d");
  check_shape(lambda, n, m, "lambda");
  check_shape(K, n, m, "K");
  check_shape(A, n, m, "A");
  check_shape(q, n - 1, m, "q");
  if (qhat1.size() != m || qhat2.size() != m)
    throw InvalidArgument("LayerParams: qhat profiles have wrong length");
  if (!(E > 0)) throw InvalidArgument("LayerParams: activation energy E must be positive");
}

// ---------------------------------------------------------------------------
// Fuel families

double FuelFamily::value(double x, double t) const {
  switch (kind) {
    case Kind::constant:
      return p0;
    case Kind::logistic_front:
      return 1.0 / (1.0 + std::exp(-(x - p0 - p1 * t) / p2));
    case Kind::gaussian_decay: {
      const double z = (x - p0) / p1;
      return p3 * std::exp(-z * z - p2 * t);
    }
  }
  return 0;
}

double FuelFamily::d_x(double x, double t) const {
  switch (kind) {
    case Kind::constant:
      return 0;
    case Kind::logistic_front: {
      const double s = value(x, t);
      return s * (1 - s) / p2;
    }
    case Kind::gaussian_decay: {
      const double z = (x - p0) / p1;
      return value(x, t) * (-2.0 * z / p1);
    }
  }
  return 0;
}

double FuelFamily::d_xx(double x, double t) const {
  switch (kind) {
    case Kind::constant:
      return 0;
    case Kind::logistic_front: {
      const double s = value(x, t);
      return s * (1 - s) * (1 - 2 * s) / (p2 * p2);
    }
    case Kind::gaussian_decay: {
      const double z = (x - p0) / p1;
      return value(x, t) * (4 * z * z - 2) / (p1 * p1);
    }
  }
  return 0;
}

double FuelFamily::d_t(double x, double t) const {
  switch (kind) {
    case Kind::constant:
      return 0;
    case Kind::logistic_front:
      return -p1 * d_x(x, t);
    case Kind::gaussian_decay:
      return -p2 * value(x, t);
  }
  return 0;
}

double FuelFamily::d_tx(double x, double t) const {
  switch (kind) {
    case Kind::constant:
      return 0;
    case Kind::logistic_front:
      return -p1 * d_xx(x, t);
    case Kind::gaussian_decay:
      return -p2 * d_x(x, t);
  }
  return 0;
}

double FuelFamily::lower_bound(double T) const {
  switch (kind) {
    case Kind::constant:
      return p0;
    case Kind::logistic_front:
      return 0;
    case Kind::gaussian_decay: {
      const double peak = p3 * std::max(1.0, std::exp(-p2 * T));
      return std::min(0.0, peak);
    }
  }
  return 0;
}

double FuelFamily::upper_bound(double T) const {
  switch (kind) {
    case Kind::constant:
      return p0;
    case Kind::logistic_front:
      return 1;
    case Kind::gaussian_decay: {
      const double peak = p3 * std::max(1.0, std::exp(-p2 * T));
      return std::max(0.0, peak);
    }
  }
  return 0;
}

std::string FuelFamily::to_string() const {
  switch (kind) {
    case Kind::constant:
      return "constant(" + fmt(p0) + ")";
    case Kind::logistic_front:
      return "logistic_front(" + fmt(p0) + ", " + fmt(p1) + ", " + fmt(p2) + ")";
    case Kind::gaussian_decay:
      return "gaussian_decay(" + fmt(p0) + ", " + fmt(p1) + ", " + fmt(p2) + ", " + fmt(p3) + ")";
  }
  return {};
}

FuelFamily parse_fuel_family(const std::string& text) {
  const CallExpr c = parse_call(text);
  if (c.name == "constant") {
    if (c.args.size() != 1) throw ConfigError("constant expects 1 argument: '" + text + "'");
    return FuelFamily::constant(c.args[0]);
  }
  if (c.name == "logistic_front") {
    if (c.args.size() != 3)
      throw ConfigError("logistic_front expects 3 arguments: '" + text + "'");
    if (!(c.args[2] > 0)) throw ConfigError("logistic_front width must be positive");
    return FuelFamily::logistic_front(c.args[0], c.args[1], c.args[2]);
  }
  if (c.name == "gaussian_decay") {
    if (c.args.size() != 3 && c.args.size() != 4)
      throw ConfigError("gaussian_decay expects 3 or 4 arguments: '" + text + "'");
    if (!(c.args[1] > 0)) throw ConfigError("gaussian_decay width must be positive");
    return FuelFamily::gaussian_decay(c.args[0], c.args[1], c.args[2],
                                      c.args.size() == 4 ? c.args[3] : 1.0);
  }
  throw ConfigError("unknown fuel family '" + c.name + "'");
}

// ---------------------------------------------------------------------------
// FuelHistory

FuelHistory FuelHistory::prescribed(std::vector<FuelFamily> families) {
  FuelHistory h;
  h.families_ = std::move(families);
  return h;
}

FuelHistory FuelHistory::tabulated(Trajectory<double> table) {
  if (table.empty()) throw InvalidArgument("FuelHistory: empty fuel table");
  FuelHistory h;
  h.tabulated_ = true;
  h.table_ = std::move(table);
  return h;
}

bool FuelHistory::time_invariant() const {
  if (tabulated_) return table_.size() <= 1;
  for (const FuelFamily& f : families_) {
    if (f.kind == FuelFamily::Kind::logistic_front && f.p1 != 0) return false;
    if (f.kind == FuelFamily::Kind::gaussian_decay && f.p2 != 0) return false;
  }
  return true;
}

Field<double> FuelHistory::at(double t, const Grid<double>& grid) const {
  Field<double> y;
  if (tabulated_) {
    const auto& ts = table_.times;
    if (t <= ts.front()) {
      y = table_.states.front();
    } else if (t >= ts.back()) {
      y = table_.states.back();
    } else {
      const auto it = std::upper_bound(ts.begin(), ts.end(), t);
      const std::size_t k = static_cast<std::size_t>(it - ts.begin());
      const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
      y = (1 - w) * table_.states[k - 1] + w * table_.states[k];
    }
  } else {
    const Index n = static_cast<Index>(families_.size());
    y.resize(n, grid.m);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < grid.m; ++j) y(i, j) = families_[i].value(grid.node(j), t);
  }
  if (offset_.size() > 0) {
    if (offset_.rows() != y.rows() || offset_.cols() != y.cols())
      throw InvalidArgument("FuelHistory: offset shape mismatch");
    y += offset_;
  }
  return y;
}

Field<double> fuel_prescribed(const std::vector<FuelFamily>& families, const Grid<double>& grid,
                              double t) {
  Field<double> y = FuelHistory::prescribed(families).at(t, grid);
  if ((y < 0.0).any() || (y > 1.0).any())
    throw InvalidArgument("fuel_prescribed: family produces values outside [0, 1]");
  return y;
}

Field<double> fuel_step(const Field<double>& y, const Field<double>& u, const LayerParams& p,
                        double dt) {
  if (!(dt > 0)) throw InvalidArgument("fuel_step: dt must be positive");
  if (y.rows() != u.rows() || y.cols() != u.cols() || y.rows() != p.layers())
    throw InvalidArgument("fuel_step: shape mismatch");
  Field<double> out(y.rows(), y.cols());
  for (Index i = 0; i < y.rows(); ++i)
    for (Index j = 0; j < y.cols(); ++j)
      out(i, j) = y(i, j) * std::exp(-p.A(i, j) * arrhenius_g(u(i, j), p.E) * dt);
  return out;
}

// ---------------------------------------------------------------------------
// Coefficients and source

Coefficients coefficient_fields(const LayerParams& p, const Field<double>& y) {
  if (y.rows() != p.layers() || y.cols() != p.nodes())
    throw InvalidArgument("coefficient_fields: fuel shape mismatch");
  const Field<double> den = p.a + p.b * y;
  if ((den <= 0.0).any())
    throw InvalidArgument("coefficient_fields: a + b y <= 0 (violates (H1))");
  return {p.lambda / den, p.c / den};
}

Field<double> source_f(const LayerParams& p, const Field<double>& y, const Field<double>& u) {
  const Index n = p.layers();
  const Index m = p.nodes();
  if (n < 2) throw InvalidArgument("source_f: at least two layers are required");
  if (y.rows() != n || y.cols() != m || u.rows() != n || u.cols() != m)
    throw InvalidArgument("source_f: shape mismatch");
  Field<double> f(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      const double den = p.a(i, j) + p.b(i, j) * y(i, j);
      if (!(den > 0)) throw InvalidArgument("source_f: a + b y <= 0 (violates (H1))");
      const double ui = u(i, j);
      double num = -p.c_x(i, j) * ui +
                   (p.K(i, j) * p.b(i, j) * ui + p.d(i, j)) * y(i, j) * arrhenius_g(ui, p.E);
      if (i + 1 < n) num += p.q(i, j) * (u(i + 1, j) - ui);
      if (i > 0) num -= p.q(i - 1, j) * (ui - u(i - 1, j));
      if (i == 0) num -= p.qhat1(j) * (ui - p.u_e);
      if (i == n - 1) num -= p.qhat2(j) * (ui - p.u_e);
      f(i, j) = num / den;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Nondimensionalization

double mean_rock_heat_capacity(const RawPhysicalParams& raw) {
  if (raw.layers.empty()) throw InvalidArgument("nondimensionalize: no layers");
  double s = 0;
  for (const auto& l : raw.layers) s += l.rho_r * l.c_r;
  return s / static_cast<double>(raw.layers.size());
}

double layer_conductivity(const RawLayer& layer, double porosity) {
  return (1 - porosity) * ((1 - layer.l) * layer.lambda_r + layer.l * layer.lambda_c) +
         porosity * layer.lambda_g;
}

LayerParams nondimensionalize(const RawPhysicalParams& raw, const Grid<double>& grid) {
  const Index n = static_cast<Index>(raw.layers.size());
  if (n < 1) throw InvalidArgument("nondimensionalize: no layers");
  for (double s : {raw.x_ref, raw.t_ref, raw.T_ref, raw.p_ref, raw.rho_g_ref, raw.R_gas})
    if (!(s > 0)) throw InvalidArgument("nondimensionalize: reference scales must be positive");
  if (!(raw.E_act > 0)) throw InvalidArgument("nondimensionalize: activation energy must be positive");
  if (static_cast<Index>(raw.Q.size()) != n - 1)
    throw InvalidArgument("nondimensionalize: need n-1 inter-layer coefficients Q");

  const double rc = mean_rock_heat_capacity(raw);
  if (!(rc > 0)) throw InvalidArgument("nondimensionalize: mean rho_r c_r must be positive");
  const Index m = grid.m;
  const double x2 = raw.x_ref * raw.x_ref;
  const double pa = std::pow(raw.p_ref, raw.alpha);

  LayerParams p;
  for (Field<double>* f : {&p.a, &p.b, &p.c, &p.c_x, &p.d, &p.lambda, &p.K, &p.A})
    f->resize(n, m);
  p.q.resize(n - 1, m);

  for (Index i = 0; i < n; ++i) {
    const RawLayer& L = raw.layers[static_cast<std::size_t>(i)];
    if (L.l < 0 || L.l > 1) throw InvalidArgument("nondimensionalize: l must lie in [0, 1]");
    const Profile<double> por = L.porosity.sample(grid);
    if ((por <= 0.0).any() || (por >= 1.0).any())
      throw InvalidArgument("nondimensionalize: porosity must lie in (0, 1)");
    const Profile<double> eta0 = L.eta0.sample(grid);
    const double c_hat = raw.rho_g_ref * L.rho_g * L.c_g / rc;
    const double v_tilde = raw.t_ref * L.v / raw.x_ref;
    const double A_hat = raw.t_ref * L.A_c * pa;
    for (Index j = 0; j < m; ++j) {
      const double phi = por(j);
      p.a(i, j) = (phi * raw.rho_g_ref * L.rho_g * L.c_g + (1 - phi) * L.rho_r * L.c_r) / rc;
      p.b(i, j) = eta0(j) * L.c_c / rc;
      p.c(i, j) = c_hat * v_tilde;
      p.lambda(i, j) = raw.t_ref * layer_conductivity(L, phi) / (x2 * rc);
      const double d_hat = A_hat * eta0(j) * L.Q_h / (raw.T_ref * rc);
      p.d(i, j) = L.Yp_alpha * d_hat;
      p.A(i, j) = L.Yp_alpha * A_hat;
      p.K(i, j) = raw.t_ref * raw.p_ref * L.K_s / x2;
    }
    p.c_x.row(i) = centered_derivative(p.c.row(i).transpose(), grid.dx).transpose();
  }
  for (Index i = 0; i + 1 < n; ++i)
    p.q.row(i) = (raw.t_ref * raw.Q[static_cast<std::size_t>(i)].sample(grid) / rc).transpose();
  p.qhat1 = raw.t_ref * raw.Qhat1.sample(grid) / rc;
  p.qhat2 = raw.t_ref * raw.Qhat2.sample(grid) / rc;
  p.E = raw.E_act / (raw.R_gas * raw.T_ref);
  p.u_e = raw.T_e / raw.T_ref;
  return p;
}

}  // namespace porocomb
