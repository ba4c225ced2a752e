#pragma once

#include "porocomb/grid.hpp"
#include "porocomb/model.hpp"

namespace porocomb {

/// A complete instance: grid, coefficients, fuel, and initial temperatures.
/// In coupled mode `fuel` describes the initial concentration y0 = fuel.at(0).
struct Problem {
  Grid<double> grid;
  LayerParams params;
  FuelMode fuel_mode = FuelMode::prescribed;
  FuelHistory fuel;
  Field<double> phi;

  Index layers() const { return params.layers(); }
};


/// Fuel seen by the temperature equation before any coupled update: the
/// prescribed history itself, or y0 frozen in time for coupled mode.
inline FuelHistory effective_fuel(const Problem& problem) {
  if (problem.fuel_mode == FuelMode::prescribed) return problem.fuel;
  Trajectory<double> frozen;
  frozen.push_back(0.0, problem.fuel.at(0.0, problem.grid));
  return FuelHistory::tabulated(std::move(frozen));
}

}  // namespace porocomb
