#pragma once

#include <utility>

#include "varbvp/grid.hpp"
#include "varbvp/lagrangian.hpp"
#include "varbvp/trajectory.hpp"

namespace varbvp {

/// Parameters of the regularized problem: left endpoint q1, scaled
/// displacement z = (q2 − q1)/h and duration h ≥ 0.
struct RegularizedProblem {
  Vec q1;
  Vec z;
  double h = 0.0;
};

struct SolverConfig {
  int N = 64;                   ///< grid subintervals
  double tol = 1e-10;           ///< residual ∞-norm target
  int max_iter = 50;            ///< Newton iterations per solve
  int continuation_steps = 8;   ///< initial partition of [0, h]
  int max_bisections = 20;      ///< depth of increment halving
  double damping_factor = 0.5;  ///< backtracking contraction
  int max_backtracks = 30;
  double cond_threshold = 1e12;
  double v_max = 1e6;     ///< divergence bound on |V_i|∞
  double fd_step = 1e-6;  ///< only used for models without analytic Hessians

  /// Throws InvalidConfig on non-positive entries or tol ≥ 1.
  void validate() const;
};

struct BvpSolution {
  RegularizedProblem problem;
  Curve V;      ///< velocity nodes on [0, 1]
  Vec lambda;   ///< multiplier of ∫V = z
  Curve Q;      ///< positions q1 + h∫₀ᵘV
  double residual_norm = 0.0;
  int iterations = 0;  ///< Newton iterations of the final solve
  double condition_estimate = 0.0;
  /// Discrete boundary momenta, λ − h·quad(∂L/∂q) and λ. These are the exact
  /// partials −∂S/∂q1 and ∂S/∂q2 of the discrete action.
  Vec momentum_start;
  Vec momentum_end;
};

/// Q_i = q1 + h·cumulative(V)_i.
Curve reconstruct_positions(const RegularizedProblem& problem, const Curve& V);

/// Weak gradient of the discrete objective quad(L(Q, V)):
/// ∂L/∂v(Q_i, V_i) + h·cumulative_adjoint(∂L/∂q(Q, V))_i.
Curve stationarity_gradient(const LagrangianModel& model,
                            const RegularizedProblem& problem, const Curve& V);

/// Stacked (G_0, ..., G_N, quad(V) − z) with G_i the gradient minus λ.
Vec residual(const LagrangianModel& model, const RegularizedProblem& problem,
             const Curve& V, const Vec& lambda);

/// Exact derivative of `residual` with respect to (V_0, ..., V_N, λ).
Mat jacobian(const LagrangianModel& model, const RegularizedProblem& problem,
             const Curve& V, const Vec& lambda, double fd_step = 1e-6);

/// Damped Newton on residual = 0 with Armijo backtracking on the ∞-norm.
///
/// Throws NewtonDiverged when max_iter is exceeded, the line search stalls or
/// a node leaves |V_i|∞ ≤ v_max, and NonRegularLagrangian when a Jacobian is
/// singular or its ∞-norm condition number exceeds cond_threshold. The
/// reported condition estimate belongs to the Jacobian at the returned point.
BvpSolution newton(const LagrangianModel& model, const RegularizedProblem& problem,
                   const Curve& guess_V, const Vec& guess_lambda,
                   const SolverConfig& config);

/// Continuation in h from the exact h = 0 solution V ≡ z, λ = ∂L/∂v(q1, z).
BvpSolution solve_regularized(const LagrangianModel& model, const Vec& q1, const Vec& z,
                              double h_target, const SolverConfig& config);

/// Re-solves `problem` starting from a nearby solution (shifted to the new
/// constraint value); falls back to continuation when Newton fails.
BvpSolution solve_from(const LagrangianModel& model, const RegularizedProblem& problem,
                       const BvpSolution& warm, const SolverConfig& config);

/// Physical samples t_i = h·u_i, q = Q_i, v = V_i. The two end samples carry
/// the velocities of the discrete boundary momenta.
Trajectory to_trajectory(const LagrangianModel& model, const BvpSolution& solution);

/// Evolution from q1 to q2 in time h > 0.
std::pair<BvpSolution, Trajectory> solve_bvp(const LagrangianModel& model, const Vec& q1,
                                             const Vec& q2, double h,
                                             const SolverConfig& config);

}  // namespace varbvp
