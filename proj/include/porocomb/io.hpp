#pragma once

#include <string>
#include <utility>
#include <vector>

#include "porocomb/grid.hpp"

namespace porocomb {

std::string version();

/// Indices of `count` evenly spaced states including the first and last; all when count == 0.
std::vector<std::size_t> snapshot_indices(std::size_t size, int count);

/// One CSV per selected state, `<prefix>_NNNNN.csv` with columns x, u_1..u_n[, y_1..y_n],
/// plus `<prefix>_index.csv` with columns time, file, l2_1..l2_n. 17 significant digits.
/// `fuel`, when given, must share u's nodes.
void write_trajectory(const Trajectory<double>& u, const Grid<double>& grid,
                      const std::string& prefix, const Trajectory<double>* fuel = nullptr,
                      const std::vector<std::size_t>* select = nullptr);

struct TrajectoryFiles {
  std::vector<double> x;
  Trajectory<double> u;
  Trajectory<double> y;  // empty when no fuel columns were written
  std::vector<std::vector<double>> index_norms;
};

/// Reads back what write_trajectory produced, given the index file path.
TrajectoryFiles read_trajectory(const std::string& index_path);

/// Plain CSV writer; IoError on failure.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& text);

std::string format_number(double v);

/// Front position of one layer profile: the first node from the left where the
/// profile is at or above `threshold` and the next node is below it, refined by
/// linear interpolation. NaN when there is no such crossing.
double front_position(const Eigen::Ref<const Eigen::Array<double, 1, Eigen::Dynamic>>& profile,
                      const Grid<double>& grid, double threshold);

}  // namespace porocomb
