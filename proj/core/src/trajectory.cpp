#include "varbvp/trajectory.hpp"

#include "varbvp/errors.hpp"

namespace varbvp {

void validate(const Trajectory& traj) {
  const auto k = traj.times.size();
  if (k < 1 || traj.positions.cols() != k || traj.velocities.cols() != k ||
      traj.positions.rows() != traj.velocities.rows() || traj.positions.rows() < 1) {
    throw InvalidConfig("trajectory arrays have inconsistent shapes");
  }
  for (Eigen::Index i = 1; i < k; ++i) {
    if (!(traj.times[i] > traj.times[i - 1])) {
      throw InvalidConfig("trajectory times must increase strictly");
    }
  }
}

}  // namespace varbvp
