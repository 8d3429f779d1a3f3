#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varbvp/lagrangian.hpp"
#include "varbvp/solver.hpp"

namespace varbvp {

struct PhasePoint {
  Vec q;
  Vec p;  ///< momentum ∂L/∂v
};

struct FlowOptions {
  double outer_tol = 1e-9;  ///< on |D1S(q_k, q_{k+1}) + p_k|∞
  int max_outer = 30;
  double fd_step = 1e-6;  ///< relative step of the outer FD Jacobian
};

struct StepDiagnostics {
  int outer_iterations = 0;
  double momentum_residual = 0.0;  ///< |D1S + p_k|∞ at the accepted point
  double bvp_residual = 0.0;
  double condition_estimate = 0.0;
};

struct StepResult {
  PhasePoint point;
  StepDiagnostics diagnostics;
  BvpSolution solution;  ///< the accepted boundary solve
};

/// Advances (q_k, p_k) by h: finds q_{k+1} with D1S(q_k, q_{k+1}) + p_k = 0
/// and returns (q_{k+1}, D2S(q_k, q_{k+1})). `warm`, when given, seeds the
/// boundary solves.
StepResult flow_step(const LagrangianModel& model, const PhasePoint& point, double h,
                     const SolverConfig& config, const FlowOptions& options = {},
                     const BvpSolution* warm = nullptr);

PhasePoint step(const LagrangianModel& model, const PhasePoint& point, double h,
                const SolverConfig& config);

struct FlowFailure {
  int step = 0;  ///< index of the step that failed (0-based)
  std::string kind;
  std::string message;
};

struct DiscreteFlow {
  double h = 0.0;
  std::vector<PhasePoint> points;  ///< points[0] is the initial state
  std::vector<StepDiagnostics> diagnostics;
  std::optional<FlowFailure> failure;  ///< set when the flow was truncated
};

/// p0 = ∂L/∂v(q0, v0), then `steps` applications of flow_step. Step failures
/// truncate the flow and are recorded rather than thrown.
DiscreteFlow integrate_ivp(const LagrangianModel& model, const Vec& q0, const Vec& v0,
                           double h, int steps, const SolverConfig& config,
                           const FlowOptions& options = {});

}  // namespace varbvp
