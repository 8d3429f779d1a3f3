#pragma once

#include "varbvp/lagrangian.hpp"
#include "varbvp/solver.hpp"
#include "varbvp/trajectory.hpp"

namespace varbvp {

/// Discrete objective on the unit interval: quad(u ↦ L(Q(u), V(u))).
double objective(const LagrangianModel& model, const RegularizedProblem& problem,
                 const Curve& V);

/// Physical action h·objective along a solution.
double action(const LagrangianModel& model, const BvpSolution& solution);

/// Type-1 generating function S(q1, q2) and its partials.
struct GeneratingValue {
  double S = 0.0;
  Vec D1S;  ///< ∂S/∂q1 = −p(0)
  Vec D2S;  ///< ∂S/∂q2 =  p(h)
};

GeneratingValue generating_function(const LagrangianModel& model, const Vec& q1,
                                    const Vec& q2, double h, const SolverConfig& config);

/// Same quantities read off an existing solution.
GeneratingValue generating_value(const LagrangianModel& model, const BvpSolution& solution);

/// max over interior samples of |Δ/Δt[∂L/∂v] − ∂L/∂q|∞ (central differences).
double el_residual(const LagrangianModel& model, const Trajectory& traj);

}  // namespace varbvp
