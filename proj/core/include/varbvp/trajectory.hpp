#pragma once

#include "varbvp/lagrangian.hpp"

namespace varbvp {

/// Samples (t_i, q(t_i), v(t_i)) of an evolution on [0, h].
/// Positions and velocities hold one sample per column.
struct Trajectory {
  double h = 0.0;
  Vec times;
  Mat positions;
  Mat velocities;

  int size() const { return static_cast<int>(times.size()); }
  int dim() const { return static_cast<int>(positions.rows()); }
};

/// Throws InvalidConfig unless times increase strictly and all arrays agree
/// in length.
void validate(const Trajectory& traj);

}  // namespace varbvp
