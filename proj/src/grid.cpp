#include "porocomb/grid.hpp"

namespace porocomb {

template struct Grid<double>;
template Grid<double> make_grid<double>(double, double, Index);
template struct Trajectory<double>;
template double sup_metric<double>(const Trajectory<double>&, const Trajectory<double>&, double);

}  // namespace porocomb
