#pragma once

#include <optional>
#include <string>
#include <vector>

#include "porocomb/dependence.hpp"
#include "porocomb/function_spec.hpp"
#include "porocomb/mild_solver.hpp"
#include "porocomb/model.hpp"
#include "porocomb/oracle.hpp"
#include "porocomb/problem.hpp"

namespace porocomb {

struct LayerSpec {
  FunctionSpec a = FunctionSpec::constant(1);
  FunctionSpec b = FunctionSpec::constant(0);
  FunctionSpec c = FunctionSpec::constant(0);
  FunctionSpec lambda = FunctionSpec::constant(1);
  FunctionSpec d = FunctionSpec::constant(0);
  FunctionSpec K = FunctionSpec::constant(0);
  FunctionSpec A = FunctionSpec::constant(0);
  FunctionSpec phi = FunctionSpec::constant(0);
  FuelFamily fuel = FuelFamily::constant(0);
};

struct RunConfig {
  double T = 1;
  SolverConfig solver;
  int snapshots = 11;  // evenly spaced trajectory states written; 0 writes all
};

struct ExperimentConfig {
  OracleIntegrator oracle_integrator = OracleIntegrator::implicit_trapezoid;
  double oracle_h = 5e-4;  // finest step of the refinement ladder
  int oracle_levels = 3;   // steps h * 2^(levels-1), ..., 2h, h
  int dependence_levels = 9;
  std::vector<Perturbation> perturbations;
  std::optional<double> front_threshold;
};

struct ProblemConfig {
  double x_min = -10, x_max = 10;
  Index m = 201;
  int layers = 2;
  double u_e = 0, E = 1;
  std::vector<LayerSpec> layer;
  std::vector<FunctionSpec> q;  // n-1 interfaces
  FunctionSpec qhat1 = FunctionSpec::constant(0);
  FunctionSpec qhat2 = FunctionSpec::constant(0);
  FuelMode fuel_mode = FuelMode::prescribed;
  std::optional<RawPhysicalParams> physical;
  RunConfig run;
  ExperimentConfig experiment;
};

/// Parses the line-oriented format:
///   # comment
///   [section]
///   key = value
/// Throws ConfigError naming the line (and both lines for duplicates).
ProblemConfig parse_config(const std::string& text);

/// Reads and parses a file; IoError if it cannot be read.
ProblemConfig load_config(const std::string& path);

/// Samples every function on the grid and assembles the instance.
Problem build_problem(const ProblemConfig& cfg);

/// Canonical text of the configuration with every default filled in; parses back to itself.
std::string echo_config(const ProblemConfig& cfg);

PerturbationSpec perturbation_spec(const ProblemConfig& cfg);

}  // namespace porocomb
