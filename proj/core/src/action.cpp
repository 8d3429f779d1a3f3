#include "varbvp/action.hpp"

#include <algorithm>
#include <vector>

#include "varbvp/errors.hpp"

namespace varbvp {

double objective(const LagrangianModel& model, const RegularizedProblem& problem,
                 const Curve& V) {
  const Curve Q = reconstruct_positions(problem, V);
  Mat density(1, V.size());
  for (int i = 0; i < V.size(); ++i) density(0, i) = eval(model, Q.node(i), V.node(i)).L;
  return quad(Curve(V.grid(), std::move(density)))[0];
}

double action(const LagrangianModel& model, const BvpSolution& solution) {
  return solution.problem.h * objective(model, solution.problem, solution.V);
}

GeneratingValue generating_value(const LagrangianModel& model, const BvpSolution& solution) {
  return {action(model, solution), -solution.momentum_start, solution.momentum_end};
}

GeneratingValue generating_function(const LagrangianModel& model, const Vec& q1,
                                    const Vec& q2, double h, const SolverConfig& config) {
  const auto [solution, traj] = solve_bvp(model, q1, q2, h, config);
  return generating_value(model, solution);
}

double el_residual(const LagrangianModel& model, const Trajectory& traj) {
  validate(traj);
  if (traj.size() < 3) throw InvalidConfig("el_residual needs at least 3 samples");
  std::vector<LagrangianJet> jets;
  jets.reserve(traj.size());
  for (int i = 0; i < traj.size(); ++i) {
    jets.push_back(eval(model, traj.positions.col(i), traj.velocities.col(i)));
  }
  double worst = 0.0;
  for (int i = 1; i + 1 < traj.size(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i - 1];
    const Vec defect = (jets[i + 1].dLdv - jets[i - 1].dLdv) / dt - jets[i].dLdq;
    worst = std::max(worst, defect.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace varbvp
