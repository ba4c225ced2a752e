#include "porocomb/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace porocomb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError("expected a number, got '" + v + "'");
  return d;
}

long to_long(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long d = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError("expected an integer, got '" + v + "'");
  return d;
}

bool to_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

template <typename E>
E to_enum(const std::string& v, std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [name, e] : options) {
    if (v == name) return e;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError("expected one of {" + names + "}, got '" + v + "'");
}

template <typename E>
const char* enum_name(E v, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, e] : options)
    if (e == v) return name;
  return "?";
}

const std::initializer_list<std::pair<const char*, AdvectionScheme>> kAdvection = {
    {"automatic", AdvectionScheme::automatic}, {"upwind", AdvectionScheme::upwind}};
const std::initializer_list<std::pair<const char*, WindowMode>> kWindowMode = {
    {"theoretical", WindowMode::theoretical}, {"adaptive", WindowMode::adaptive}};
const std::initializer_list<std::pair<const char*, WindowRule>> kWindowRule = {
    {"continuation", WindowRule::continuation}, {"contraction", WindowRule::contraction}};
const std::initializer_list<std::pair<const char*, SeedKind>> kSeed = {
    {"homogeneous", SeedKind::homogeneous}, {"constant", SeedKind::constant}};
const std::initializer_list<std::pair<const char*, FuelMode>> kFuelMode = {
    {"prescribed", FuelMode::prescribed}, {"coupled", FuelMode::coupled}};
const std::initializer_list<std::pair<const char*, OracleIntegrator>> kIntegrator = {
    {"implicit_trapezoid", OracleIntegrator::implicit_trapezoid},
    {"explicit_rk4", OracleIntegrator::explicit_rk4}};

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
};

/// Consumes keys of one section; whatever is left over at finish() is unknown.
class Reader {
 public:
  explicit Reader(Section& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.entries.count(key) > 0; }

  void get(const std::string& key, const std::function<void(const std::string&)>& apply) {
    auto it = s_.entries.find(key);
    if (it == s_.entries.end()) return;
    it->second.used = true;
    try {
      apply(it->second.value);
    } catch (const ConfigError& e) {
      throw ConfigError(where(it->second.line, key) + e.what());
    } catch (const InvalidArgument& e) {
      throw ConfigError(where(it->second.line, key) + e.what());
    }
  }

  void num(const std::string& key, double& out) {
    get(key, [&](const std::string& v) { out = to_double(v); });
  }
  void integer(const std::string& key, int& out) {
    get(key, [&](const std::string& v) { out = static_cast<int>(to_long(v)); });
  }
  void function(const std::string& key, FunctionSpec& out) {
    get(key, [&](const std::string& v) { out = parse_function_spec(v); });
  }

  void reject(const std::string& key, const std::string& why) {
    auto it = s_.entries.find(key);
    if (it != s_.entries.end()) throw ConfigError(where(it->second.line, key) + why);
  }

  void finish() const {
    for (const auto& k : s_.order) {
      const Entry& e = s_.entries.at(k);
      if (!e.used)
        throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + k + "' in [" +
                          s_.name + "]");
    }
  }

  std::vector<std::string> keys() const { return s_.order; }
  int line_of(const std::string& key) const { return s_.entries.at(key).line; }

  std::string where(int line, const std::string& key) const {
    return "line " + std::to_string(line) + ": [" + s_.name + "] " + key + ": ";
  }

 private:
  Section& s_;
};

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> sections;
  Section* cur = nullptr;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(line) + ": malformed section header '" + s +
                          "'");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) throw ConfigError("line " + std::to_string(line) + ": empty section name");
      auto [it, fresh] = sections.try_emplace(name);
      if (!fresh)
        throw ConfigError("line " + std::to_string(line) + ": duplicate section [" + name +
                          "] (first at line " + std::to_string(it->second.line) + ")");
      it->second.name = name;
      it->second.line = line;
      cur = &it->second;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + s +
                        "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(line) + ": missing value for '" + key + "'");
    if (!cur)
      throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                        "' appears before any [section]");
    auto [it, fresh] = cur->entries.try_emplace(key, Entry{value, line, false});
    if (!fresh)
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "' in [" +
                        cur->name + "] (first defined at line " +
                        std::to_string(it->second.line) + ", again at line " +
                        std::to_string(line) + ")");
    cur->order.push_back(key);
  }
  return sections;
}

/// "layer.3" -> 3 when the prefix matches; 0 otherwise.
int indexed(const std::string& name, const std::string& prefix) {
  if (name.rfind(prefix, 0) != 0) return 0;
  try {
    const long k = to_long(name.substr(prefix.size()));
    return k > 0 ? static_cast<int>(k) : -1;
  } catch (const ConfigError&) {
    return -1;
  }
}

void require_positive(const FunctionSpec& f, const std::string& what) {
  if (!(f.lower_bound() > 0))
    throw ConfigError(what + ": (H1) positivity violated (infimum " + fmt(f.lower_bound()) +
                      " <= 0)");
}

void require_nonnegative(const FunctionSpec& f, const std::string& what, const char* hyp) {
  if (f.lower_bound() < 0)
    throw ConfigError(what + ": " + hyp + " requires a nonnegative function (infimum " +
                      fmt(f.lower_bound()) + ")");
}

}  // namespace

ProblemConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections = tokenize(text);
  ProblemConfig cfg;
  const bool physical = sections.count("physical") > 0;

  if (auto it = sections.find("model"); it != sections.end()) {
    Reader r(it->second);
    r.integer("layers", cfg.layers);
    if (physical) {
      r.reject("u_e", "set by [physical] (T_e / T_ref)");
      r.reject("E", "set by [physical] (E_act / (R_gas T_ref))");
    }
    r.num("u_e", cfg.u_e);
    r.num("E", cfg.E);
    r.finish();
    if (cfg.layers < 2)
      throw ConfigError("line " + std::to_string(it->second.line) +
                        ": [model] layers must be >= 2");
    if (!(cfg.E > 0)) throw ConfigError("[model] E must be positive");
  }
  const int n = cfg.layers;
  cfg.layer.assign(static_cast<std::size_t>(n), LayerSpec{});
  cfg.q.assign(static_cast<std::size_t>(n - 1), FunctionSpec::constant(0));
  if (physical) {
    cfg.physical = RawPhysicalParams{};
    cfg.physical->layers.assign(static_cast<std::size_t>(n), RawLayer{});
    cfg.physical->Q.assign(static_cast<std::size_t>(n - 1), FunctionSpec::constant(0));
  }

  for (auto& [name, sec] : sections) {
    Reader r(sec);
    if (name == "model") continue;
    if (name == "grid") {
      r.num("x_min", cfg.x_min);
      r.num("x_max", cfg.x_max);
      int m = static_cast<int>(cfg.m);
      r.integer("m", m);
      cfg.m = m;
    } else if (int k = indexed(name, "layer."); k != 0) {
      if (k < 0 || k > n)
        throw ConfigError("line " + std::to_string(sec.line) + ": section [" + name +
                          "] is outside layers 1.." + std::to_string(n));
      LayerSpec& L = cfg.layer[static_cast<std::size_t>(k - 1)];
      if (physical)
        for (const char* key : {"a", "b", "c", "lambda", "d", "K", "A"})
          r.reject(key, "coefficients come from [physical] when it is present");
      r.function("a", L.a);
      r.function("b", L.b);
      r.function("c", L.c);
      r.function("lambda", L.lambda);
      r.function("d", L.d);
      r.function("K", L.K);
      r.function("A", L.A);
      r.function("phi", L.phi);
      r.get("fuel", [&](const std::string& v) { L.fuel = parse_fuel_family(v); });
    } else if (name == "coupling") {
      if (physical) {
        for (const auto& key : r.keys())
          r.reject(key, "couplings come from [physical] when it is present");
      }
      for (int i = 1; i < n; ++i)
        r.function("q" + std::to_string(i), cfg.q[static_cast<std::size_t>(i - 1)]);
      r.function("qhat1", cfg.qhat1);
      r.function("qhat2", cfg.qhat2);
    } else if (name == "fuel") {
      r.get("mode", [&](const std::string& v) { cfg.fuel_mode = to_enum(v, kFuelMode); });
    } else if (name == "run") {
      SolverConfig& s = cfg.run.solver;
      r.num("T", cfg.run.T);
      r.num("theta", s.scheme.theta);
      r.get("advection", [&](const std::string& v) { s.scheme.advection = to_enum(v, kAdvection); });
      r.num("dt", s.dt);
      r.num("picard_tol", s.picard_tol);
      r.integer("picard_max_iters", s.picard_max_iters);
      r.integer("time_steps_per_window", s.time_steps_per_window);
      r.get("window_mode", [&](const std::string& v) { s.window_mode = to_enum(v, kWindowMode); });
      r.get("window_rule", [&](const std::string& v) { s.window_rule = to_enum(v, kWindowRule); });
      r.num("adaptive_window", s.adaptive_window);
      r.integer("max_halvings", s.max_halvings);
      r.get("seed", [&](const std::string& v) { s.seed = to_enum(v, kSeed); });
      r.num("blowup_ceiling", s.blowup_ceiling);
      r.num("coupled_outer_tol", s.coupled_outer_tol);
      r.integer("coupled_outer_max", s.coupled_outer_max);
      r.integer("beta_probes", s.beta_probes);
      r.get("check_apriori", [&](const std::string& v) { s.check_apriori = to_bool(v); });
      r.integer("snapshots", cfg.run.snapshots);
    } else if (name == "experiment") {
      ExperimentConfig& e = cfg.experiment;
      r.get("oracle_integrator",
            [&](const std::string& v) { e.oracle_integrator = to_enum(v, kIntegrator); });
      r.num("oracle_h", e.oracle_h);
      r.integer("oracle_levels", e.oracle_levels);
      r.integer("dependence_levels", e.dependence_levels);
      r.get("front_threshold", [&](const std::string& v) { e.front_threshold = to_double(v); });
      for (const auto& key : r.keys()) {
        if (key.rfind("perturb.", 0) != 0) continue;
        r.get(key, [&](const std::string& v) {
          const std::string rest = key.substr(8);
          const auto dot = rest.find('.');
          Perturbation pt;
          pt.target = parse_perturb_target(rest.substr(0, dot));
          const bool per_layer =
              pt.target != PerturbTarget::qhat1 && pt.target != PerturbTarget::qhat2;
          if (per_layer) {
            if (dot == std::string::npos)
              throw ConfigError("per-layer target needs a layer suffix, e.g. perturb." +
                                rest + ".1");
            const long k = to_long(rest.substr(dot + 1));
            const long limit = pt.target == PerturbTarget::q ? n - 1 : n;
            if (k < 1 || k > limit) throw ConfigError("layer index out of range");
            pt.layer = static_cast<Index>(k - 1);
          } else if (dot != std::string::npos) {
            throw ConfigError("target takes no layer suffix");
          }
          pt.direction = parse_function_spec(v);
          e.perturbations.push_back(pt);
        });
      }
    } else if (name == "physical") {
      RawPhysicalParams& p = *cfg.physical;
      r.num("x_ref", p.x_ref);
      r.num("t_ref", p.t_ref);
      r.num("T_ref", p.T_ref);
      r.num("p_ref", p.p_ref);
      r.num("rho_g_ref", p.rho_g_ref);
      r.num("alpha", p.alpha);
      r.num("E_act", p.E_act);
      r.num("R_gas", p.R_gas);
      r.num("T_e", p.T_e);
      for (int i = 1; i < n; ++i)
        r.function("Q" + std::to_string(i), p.Q[static_cast<std::size_t>(i - 1)]);
      r.function("Qhat1", p.Qhat1);
      r.function("Qhat2", p.Qhat2);
    } else if (int k = indexed(name, "physical.layer."); k != 0) {
      if (!physical)
        throw ConfigError("line " + std::to_string(sec.line) + ": [" + name +
                          "] requires a [physical] section");
      if (k < 0 || k > n)
        throw ConfigError("line " + std::to_string(sec.line) + ": section [" + name +
                          "] is outside layers 1.." + std::to_string(n));
      RawLayer& L = cfg.physical->layers[static_cast<std::size_t>(k - 1)];
      r.function("porosity", L.porosity);
      r.function("eta0", L.eta0);
      r.num("rho_r", L.rho_r);
      r.num("c_r", L.c_r);
      r.num("c_g", L.c_g);
      r.num("c_c", L.c_c);
      r.num("rho_g", L.rho_g);
      r.num("Q_h", L.Q_h);
      r.num("A_c", L.A_c);
      r.num("lambda_r", L.lambda_r);
      r.num("lambda_c", L.lambda_c);
      r.num("lambda_g", L.lambda_g);
      r.num("l", L.l);
      r.num("K_s", L.K_s);
      r.num("v", L.v);
      r.num("Yp_alpha", L.Yp_alpha);
    } else {
      throw ConfigError("line " + std::to_string(sec.line) + ": unknown section [" + name + "]");
    }
    r.finish();
  }

  // Semantic checks.
  if (!(cfg.x_min < cfg.x_max)) throw ConfigError("[grid] x_min must be < x_max");
  if (cfg.m < 3) throw ConfigError("[grid] m must be >= 3");
  if (!physical) {
    for (int i = 0; i < n; ++i) {
      const LayerSpec& L = cfg.layer[static_cast<std::size_t>(i)];
      const std::string tag = "[layer." + std::to_string(i + 1) + "] ";
      require_positive(L.a, tag + "a");
      require_positive(L.lambda, tag + "lambda");
      require_nonnegative(L.b, tag + "b", "(H1)");
      require_nonnegative(L.c, tag + "c", "(H1)");
      require_nonnegative(L.d, tag + "d", "(H3)");
      require_nonnegative(L.K, tag + "K", "(H3)");
      require_nonnegative(L.A, tag + "A", "(H3)");
    }
    for (int i = 1; i < n; ++i)
      require_nonnegative(cfg.q[static_cast<std::size_t>(i - 1)],
                          "[coupling] q" + std::to_string(i), "(H3)");
    require_nonnegative(cfg.qhat1, "[coupling] qhat1", "(H3)");
    require_nonnegative(cfg.qhat2, "[coupling] qhat2", "(H3)");
  }
  if (!(cfg.run.T > 0)) throw ConfigError("[run] T must be positive");
  if (cfg.run.snapshots < 0) throw ConfigError("[run] snapshots must be >= 0");
  try {
    cfg.run.solver.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[run] ") + e.what());
  }
  if (!(cfg.experiment.oracle_h > 0)) throw ConfigError("[experiment] oracle_h must be positive");
  if (cfg.experiment.oracle_levels < 2)
    throw ConfigError("[experiment] oracle_levels must be >= 2");
  if (cfg.experiment.dependence_levels < 1)
    throw ConfigError("[experiment] dependence_levels must be >= 1");
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Problem build_problem(const ProblemConfig& cfg) {
  Problem p;
  p.grid = make_grid(cfg.x_min, cfg.x_max, cfg.m);
  const Index n = cfg.layers;
  const Index m = cfg.m;
  if (cfg.physical) {
    p.params = nondimensionalize(*cfg.physical, p.grid);
  } else {
    LayerParams& P = p.params;
    for (Field<double>* f : {&P.a, &P.b, &P.c, &P.c_x, &P.d, &P.lambda, &P.K, &P.A})
      f->resize(n, m);
    for (Index i = 0; i < n; ++i) {
      const LayerSpec& L = cfg.layer[static_cast<std::size_t>(i)];
      P.a.row(i) = L.a.sample(p.grid).transpose();
      P.b.row(i) = L.b.sample(p.grid).transpose();
      const Profile<double> c = L.c.sample(p.grid);
      P.c.row(i) = c.transpose();
      P.c_x.row(i) = centered_derivative(c, p.grid.dx).transpose();
      P.d.row(i) = L.d.sample(p.grid).transpose();
      P.lambda.row(i) = L.lambda.sample(p.grid).transpose();
      P.K.row(i) = L.K.sample(p.grid).transpose();
      P.A.row(i) = L.A.sample(p.grid).transpose();
    }
    P.q.resize(n - 1, m);
    for (Index i = 0; i + 1 < n; ++i)
      P.q.row(i) = cfg.q[static_cast<std::size_t>(i)].sample(p.grid).transpose();
    P.qhat1 = cfg.qhat1.sample(p.grid);
    P.qhat2 = cfg.qhat2.sample(p.grid);
    P.u_e = cfg.u_e;
    P.E = cfg.E;
  }
  p.params.validate_shapes();
  p.phi.resize(n, m);
  std::vector<FuelFamily> families;
  for (Index i = 0; i < n; ++i) {
    p.phi.row(i) = cfg.layer[static_cast<std::size_t>(i)].phi.sample(p.grid).transpose();
    families.push_back(cfg.layer[static_cast<std::size_t>(i)].fuel);
  }
  p.fuel = FuelHistory::prescribed(std::move(families));
  p.fuel_mode = cfg.fuel_mode;
  return p;
}

PerturbationSpec perturbation_spec(const ProblemConfig& cfg) {
  PerturbationSpec s;
  s.items = cfg.experiment.perturbations;
  s.levels = PerturbationSpec::default_levels(cfg.experiment.dependence_levels);
  return s;
}

std::string echo_config(const ProblemConfig& cfg) {
  std::ostringstream o;
  auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  const int n = cfg.layers;
  o << "[grid]\n";
  kv("x_min", fmt(cfg.x_min));
  kv("x_max", fmt(cfg.x_max));
  kv("m", std::to_string(cfg.m));
  o << "\n[model]\n";
  kv("layers", std::to_string(n));
  if (!cfg.physical) {
    kv("u_e", fmt(cfg.u_e));
    kv("E", fmt(cfg.E));
  }
  for (int i = 0; i < n; ++i) {
    const LayerSpec& L = cfg.layer[static_cast<std::size_t>(i)];
    o << "\n[layer." << i + 1 << "]\n";
    if (!cfg.physical) {
      kv("a", L.a.to_string());
      kv("b", L.b.to_string());
      kv("c", L.c.to_string());
      kv("lambda", L.lambda.to_string());
      kv("d", L.d.to_string());
      kv("K", L.K.to_string());
      kv("A", L.A.to_string());
    }
    kv("phi", L.phi.to_string());
    kv("fuel", L.fuel.to_string());
  }
  if (!cfg.physical) {
    o << "\n[coupling]\n";
    for (int i = 1; i < n; ++i) kv("q" + std::to_string(i), cfg.q[static_cast<std::size_t>(i - 1)].to_string());
    kv("qhat1", cfg.qhat1.to_string());
    kv("qhat2", cfg.qhat2.to_string());
  }
  o << "\n[fuel]\n";
  kv("mode", enum_name(cfg.fuel_mode, kFuelMode));

  const SolverConfig& s = cfg.run.solver;
  o << "\n[run]\n";
  kv("T", fmt(cfg.run.T));
  kv("theta", fmt(s.scheme.theta));
  kv("advection", enum_name(s.scheme.advection, kAdvection));
  kv("dt", fmt(s.dt));
  kv("picard_tol", fmt(s.picard_tol));
  kv("picard_max_iters", std::to_string(s.picard_max_iters));
  kv("time_steps_per_window", std::to_string(s.time_steps_per_window));
  kv("window_mode", enum_name(s.window_mode, kWindowMode));
  kv("window_rule", enum_name(s.window_rule, kWindowRule));
  kv("adaptive_window", fmt(s.adaptive_window));
  kv("max_halvings", std::to_string(s.max_halvings));
  kv("seed", enum_name(s.seed, kSeed));
  kv("blowup_ceiling", fmt(s.blowup_ceiling));
  kv("coupled_outer_tol", fmt(s.coupled_outer_tol));
  kv("coupled_outer_max", std::to_string(s.coupled_outer_max));
  kv("beta_probes", std::to_string(s.beta_probes));
  kv("check_apriori", s.check_apriori ? "true" : "false");
  kv("snapshots", std::to_string(cfg.run.snapshots));

  const ExperimentConfig& e = cfg.experiment;
  o << "\n[experiment]\n";
  kv("oracle_integrator", enum_name(e.oracle_integrator, kIntegrator));
  kv("oracle_h", fmt(e.oracle_h));
  kv("oracle_levels", std::to_string(e.oracle_levels));
  kv("dependence_levels", std::to_string(e.dependence_levels));
  if (e.front_threshold) kv("front_threshold", fmt(*e.front_threshold));
  for (const Perturbation& p : e.perturbations) {
    std::string key = "perturb." + to_string(p.target);
    if (p.target != PerturbTarget::qhat1 && p.target != PerturbTarget::qhat2)
      key += "." + std::to_string(p.layer + 1);
    kv(key, p.direction.to_string());
  }

  if (cfg.physical) {
    const RawPhysicalParams& p = *cfg.physical;
    o << "\n[physical]\n";
    kv("x_ref", fmt(p.x_ref));
    kv("t_ref", fmt(p.t_ref));
    kv("T_ref", fmt(p.T_ref));
    kv("p_ref", fmt(p.p_ref));
    kv("rho_g_ref", fmt(p.rho_g_ref));
    kv("alpha", fmt(p.alpha));
    kv("E_act", fmt(p.E_act));
    kv("R_gas", fmt(p.R_gas));
    kv("T_e", fmt(p.T_e));
    for (int i = 1; i < n; ++i) kv("Q" + std::to_string(i), p.Q[static_cast<std::size_t>(i - 1)].to_string());
    kv("Qhat1", p.Qhat1.to_string());
    kv("Qhat2", p.Qhat2.to_string());
    for (int i = 0; i < n; ++i) {
      const RawLayer& L = p.layers[static_cast<std::size_t>(i)];
      o << "\n[physical.layer." << i + 1 << "]\n";
      kv("porosity", L.porosity.to_string());
      kv("eta0", L.eta0.to_string());
      kv("rho_r", fmt(L.rho_r));
      kv("c_r", fmt(L.c_r));
      kv("c_g", fmt(L.c_g));
      kv("c_c", fmt(L.c_c));
      kv("rho_g", fmt(L.rho_g));
      kv("Q_h", fmt(L.Q_h));
      kv("A_c", fmt(L.A_c));
      kv("lambda_r", fmt(L.lambda_r));
      kv("lambda_c", fmt(L.lambda_c));
      kv("lambda_g", fmt(L.lambda_g));
      kv("l", fmt(L.l));
      kv("K_s", fmt(L.K_s));
      kv("v", fmt(L.v));
      kv("Yp_alpha", fmt(L.Yp_alpha));
    }
  }
  return o.str();
}

}  // namespace porocomb
