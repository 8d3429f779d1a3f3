#include "varbvp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <typeinfo>

#include <spdlog/spdlog.h>

#include "varbvp/errors.hpp"

namespace varbvp {

namespace {

std::string error_kind(const Error& e) {
  if (dynamic_cast<const NewtonDiverged*>(&e)) return "NewtonDiverged";
  if (dynamic_cast<const NonRegularLagrangian*>(&e)) return "NonRegularLagrangian";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const InvalidConfig*>(&e)) return "InvalidConfig";
  return "Error";
}

}  // namespace

StepResult flow_step(const LagrangianModel& model, const PhasePoint& point, double h,
                     const SolverConfig& config, const FlowOptions& options,
                     const BvpSolution* warm) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidConfig("step size must be positive");
  if (point.q.size() != model.dim() || point.p.size() != model.dim()) {
    throw InvalidConfig("phase point has the wrong dimension");
  }
  const int n = model.dim();
  const Vec& qk = point.q;

  // Inner solves must resolve D1S well below the outer tolerance.
  SolverConfig inner = config;
  inner.tol = std::min(config.tol, 0.1 * options.outer_tol);

  auto solve_to = [&](const Vec& q_next, const BvpSolution* seed) {
    const RegularizedProblem problem{qk, (q_next - qk) / h, h};
    if (seed) return solve_from(model, problem, *seed, inner);
    return solve_regularized(model, problem.q1, problem.z, h, inner);
  };
  // F(q') = D1S(q_k, q') + p_k = p_k − p_start
  auto mismatch = [&](const BvpSolution& s) -> Vec { return point.p - s.momentum_start; };

  const double ptol = 1e-13 * (1.0 + point.p.lpNorm<Eigen::Infinity>());
  Vec q_next = qk + h * legendre_inverse(model, qk, point.p, ptol);
  BvpSolution sol = solve_to(q_next, warm);
  Vec F = mismatch(sol);

  int outer = 0;
  while (F.lpNorm<Eigen::Infinity>() > options.outer_tol) {
    if (outer == options.max_outer) {
      throw NewtonDiverged("momentum matching did not converge (|F| = " +
                           std::to_string(F.lpNorm<Eigen::Infinity>()) + ")");
    }
    Mat dF(n, n);
    for (int b = 0; b < n; ++b) {
      const double delta = options.fd_step * (1.0 + std::abs(q_next[b]));
      Vec q_pert = q_next;
      q_pert[b] += delta;
      dF.col(b) = (mismatch(solve_to(q_pert, &sol)) - F) / delta;
    }
    Eigen::PartialPivLU<Mat> lu(dF);
    if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) {
      throw NonRegularLagrangian("momentum-matching Jacobian is singular");
    }
    q_next -= lu.solve(F);
    sol = solve_to(q_next, &sol);
    F = mismatch(sol);
    ++outer;
    spdlog::debug("flow step: outer={} |F|={:.3e}", outer, F.lpNorm<Eigen::Infinity>());
  }

  StepDiagnostics diag{outer, F.lpNorm<Eigen::Infinity>(), sol.residual_norm,
                       sol.condition_estimate};
  PhasePoint next{q_next, sol.momentum_end};
  return {std::move(next), diag, std::move(sol)};
}

PhasePoint step(const LagrangianModel& model, const PhasePoint& point, double h,
                const SolverConfig& config) {
  return flow_step(model, point, h, config).point;
}

DiscreteFlow integrate_ivp(const LagrangianModel& model, const Vec& q0, const Vec& v0,
                           double h, int steps, const SolverConfig& config,
                           const FlowOptions& options) {
  if (steps < 1) throw InvalidConfig("steps must be at least 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidConfig("step size must be positive");
  config.validate();

  DiscreteFlow flow;
  flow.h = h;
  flow.points.push_back({q0, eval(model, q0, v0).dLdv});
  std::optional<BvpSolution> previous;
  for (int k = 0; k < steps; ++k) {
    try {
      StepResult result = flow_step(model, flow.points.back(), h, config, options,
                                    previous ? &*previous : nullptr);
      flow.points.push_back(std::move(result.point));
      flow.diagnostics.push_back(result.diagnostics);
      previous = std::move(result.solution);
    } catch (const Error& e) {
      flow.failure = FlowFailure{k, error_kind(e), e.what()};
      spdlog::info("flow truncated at step {}: {}", k, e.what());
      break;
    }
  }
  return flow;
}

}  // namespace varbvp
