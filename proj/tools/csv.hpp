#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <varbvp/flow.hpp>
#include <varbvp/lagrangian.hpp>
#include <varbvp/trajectory.hpp>

namespace varbvp::cli {

/// 17 significant digits: parses back to the same double.
std::string format_number(double x);

/// Columns t, q_0..q_{n-1}, v_0..v_{n-1}, E.
void write_trajectory_csv(std::ostream& out, const LagrangianModel& model,
                          const Trajectory& traj);

/// Columns step, t, q_0.., p_0.., E. Energy uses the recovered velocity.
void write_flow_csv(std::ostream& out, const LagrangianModel& model, const DiscreteFlow& flow);

/// Reads a file written by write_trajectory_csv (the E column is ignored).
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace varbvp::cli
