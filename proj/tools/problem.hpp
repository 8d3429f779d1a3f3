#pragma once

#include <optional>
#include <string>
#include <vector>

#include <varbvp/flow.hpp>
#include <varbvp/lagrangian.hpp>
#include <varbvp/solver.hpp>

namespace varbvp::cli {

/// Everything a subcommand may need, merged from a problem file and flags.
struct ProblemSpec {
  std::string model;
  std::optional<int> dim;
  Parameters parameters;
  std::vector<Vec> q1;  ///< one entry per point; genfun --grid accepts several
  std::vector<Vec> q2;
  std::optional<double> h;
  std::optional<Vec> q0;
  std::optional<Vec> v0;
  int steps = 1;
  SolverConfig solver;
};

/// Loads a YAML problem file:
///
///   model: harmonic
///   dim: 1
///   parameters: {omega: 1.0}
///   q1: [0.0]            # a point, or a list of points: [[0.0], [0.5]]
///   q2: [1.0]
///   h: 1.5707963
///   q0: [1.0]            # integrate only
///   v0: [0.0]
///   steps: 200
///   solver: {N: 64, tol: 1e-10, max_iter: 50, continuation_steps: 8,
///            max_bisections: 20, damping_factor: 0.5, max_backtracks: 30,
///            cond_threshold: 1e12, v_max: 1e6, fd_step: 1e-6}
///
/// Throws InvalidConfig on unreadable files, unknown keys or bad values.
ProblemSpec load_problem_file(const std::string& path);

/// "0.5" or "0,1" → vector.
Vec parse_vector(const std::string& text);

/// "0;0.5" or "0,1;0,2" → list of vectors.
std::vector<Vec> parse_vector_list(const std::string& text);

}  // namespace varbvp::cli
