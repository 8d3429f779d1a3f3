#include "varbvp/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "varbvp/errors.hpp"

namespace varbvp {

namespace {

void check_problem(const LagrangianModel& model, const RegularizedProblem& problem) {
  const int n = model.dim();
  if (problem.q1.size() != n || problem.z.size() != n) {
    throw InvalidConfig("problem vectors must have length " + std::to_string(n));
  }
  if (!problem.q1.allFinite() || !problem.z.allFinite()) {
    throw InvalidConfig("problem vectors must be finite");
  }
  if (!(problem.h >= 0.0) || !std::isfinite(problem.h)) {
    throw InvalidConfig("h must be finite and non-negative");
  }
}

void check_curve(const LagrangianModel& model, const Curve& V, const Vec& lambda) {
  if (V.dim() != model.dim() || lambda.size() != model.dim()) {
    throw GridMismatch("velocity curve or multiplier has the wrong dimension");
  }
}

// ∂C_j/∂V_k for the trapezoid running sum C = cumulative(V).
double cumulative_weight(int j, int k, double du) {
  if (j == 0 || k > j) return 0.0;
  if (k == 0 || k == j) return 0.5 * du;
  return du;
}

struct NodeJets {
  Curve Q;
  Curve dLdq;
  Curve dLdv;
};

NodeJets evaluate_nodes(const LagrangianModel& model, const RegularizedProblem& problem,
                        const Curve& V) {
  Curve Q = reconstruct_positions(problem, V);
  const int n = model.dim();
  Mat dq(n, V.size()), dv(n, V.size());
  for (int i = 0; i < V.size(); ++i) {
    const LagrangianJet jet = eval(model, Q.node(i), V.node(i));
    dq.col(i) = jet.dLdq;
    dv.col(i) = jet.dLdv;
  }
  return {std::move(Q), Curve(V.grid(), std::move(dq)), Curve(V.grid(), std::move(dv))};
}

struct Factorization {
  Eigen::PartialPivLU<Mat> lu;
  double condition;
};

Factorization factor(const Mat& J, double cond_threshold) {
  if (!J.allFinite()) throw NewtonDiverged("Jacobian has non-finite entries");
  Eigen::PartialPivLU<Mat> lu(J);
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) {
    throw NonRegularLagrangian("KKT Jacobian is singular");
  }
  const double norm = J.cwiseAbs().rowwise().sum().maxCoeff();
  const double inv_norm = lu.inverse().cwiseAbs().rowwise().sum().maxCoeff();
  const double cond = norm * inv_norm;
  if (!(cond <= cond_threshold)) {
    throw NonRegularLagrangian("KKT Jacobian condition estimate " + std::to_string(cond) +
                               " exceeds threshold");
  }
  return {std::move(lu), cond};
}

Vec stack(const Curve& V, const Vec& lambda) {
  Vec x(V.dim() * V.size() + lambda.size());
  x << V.flattened(), lambda;
  return x;
}

}  // namespace

void SolverConfig::validate() const {
  if (N < 2) throw InvalidConfig("N must be at least 2");
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidConfig("tol must lie in (0, 1)");
  if (max_iter < 1 || continuation_steps < 1 || max_bisections < 1 || max_backtracks < 1) {
    throw InvalidConfig("iteration limits must be positive");
  }
  if (!(damping_factor > 0.0 && damping_factor < 1.0)) {
    throw InvalidConfig("damping_factor must lie in (0, 1)");
  }
  if (!(cond_threshold > 1.0) || !(v_max > 0.0) || !(fd_step > 0.0)) {
    throw InvalidConfig("cond_threshold, v_max and fd_step must be positive");
  }
}

Curve reconstruct_positions(const RegularizedProblem& problem, const Curve& V) {
  if (problem.q1.size() != V.dim()) throw GridMismatch("q1 and V differ in dimension");
  Mat q = (problem.h * cumulative(V).values()).colwise() + problem.q1;
  return {V.grid(), std::move(q)};
}

Curve stationarity_gradient(const LagrangianModel& model, const RegularizedProblem& problem,
                            const Curve& V) {
  check_problem(model, problem);
  check_curve(model, V, problem.z);
  const NodeJets jets = evaluate_nodes(model, problem, V);
  if (problem.h == 0.0) return jets.dLdv;
  Mat g = jets.dLdv.values() + problem.h * cumulative_adjoint(jets.dLdq).values();
  return {V.grid(), std::move(g)};
}

Vec residual(const LagrangianModel& model, const RegularizedProblem& problem,
             const Curve& V, const Vec& lambda) {
  check_curve(model, V, lambda);
  const Curve grad = stationarity_gradient(model, problem, V);
  const int n = model.dim();
  Vec r(n * V.size() + n);
  r.head(n * V.size()) = (grad.values().colwise() - lambda).reshaped();
  r.tail(n) = quad(V) - problem.z;
  return r;
}

Mat jacobian(const LagrangianModel& model, const RegularizedProblem& problem,
             const Curve& V, const Vec& lambda, double fd_step) {
  check_problem(model, problem);
  check_curve(model, V, lambda);
  const int n = model.dim();
  const int nodes = V.size();
  const int m = n * nodes + n;
  const double h = problem.h;
  const double du = V.grid().du();

  const Curve Q = reconstruct_positions(problem, V);
  std::vector<HessianBlocks> hess;
  hess.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    hess.push_back(second_derivatives(model, Q.node(i), V.node(i), fd_step));
    const auto& b = hess.back();
    if (!b.d2Ldv2.allFinite() || !b.d2Ldqdv.allFinite() || !b.d2Ldq2.allFinite()) {
      throw DomainError("non-finite second derivatives at node " + std::to_string(i));
    }
  }

  Mat J = Mat::Zero(m, m);
  Mat df(n, nodes);
  for (int k = 0; k < nodes; ++k) {
    // ∂p_j/∂V_k = d2Ldv2_j δ_jk + h κ_jk d2Ldqdv_j
    J.block(k * n, k * n, n, n) += hess[k].d2Ldv2;
    if (h == 0.0) continue;
    for (int j = k; j < nodes; ++j) {
      const double kappa = cumulative_weight(j, k, du);
      if (kappa != 0.0) J.block(j * n, k * n, n, n) += h * kappa * hess[j].d2Ldqdv;
    }
    // h·cumulative_adjoint(∂f/∂V_k), ∂f_i/∂V_k = d2Ldqdvᵀ_i δ_ik + h κ_ik d2Ldq2_i
    for (int b = 0; b < n; ++b) {
      df.setZero();
      df.col(k) += hess[k].d2Ldqdv.row(b).transpose();
      for (int i = k; i < nodes; ++i) {
        const double kappa = cumulative_weight(i, k, du);
        if (kappa != 0.0) df.col(i) += h * kappa * hess[i].d2Ldq2.col(b);
      }
      const Curve adj = cumulative_adjoint(Curve(V.grid(), df));
      J.col(k * n + b).head(n * nodes) += h * adj.values().reshaped();
    }
  }

  const Vec w = V.grid().weights();
  for (int k = 0; k < nodes; ++k) {
    J.block(k * n, n * nodes, n, n) = -Mat::Identity(n, n);
    J.block(n * nodes, k * n, n, n) = w[k] * Mat::Identity(n, n);
  }
  return J;
}

BvpSolution newton(const LagrangianModel& model, const RegularizedProblem& problem,
                   const Curve& guess_V, const Vec& guess_lambda,
                   const SolverConfig& config) {
  config.validate();
  check_problem(model, problem);
  check_curve(model, guess_V, guess_lambda);
  const Grid grid = guess_V.grid();
  const int n = model.dim();
  const int vsize = n * grid.size();

  auto too_fast = [&](const Vec& x) {
    return x.head(vsize).lpNorm<Eigen::Infinity>() > config.v_max;
  };
  auto curve_of = [&](const Vec& x) { return Curve::from_flat(grid, n, x.head(vsize)); };

  Vec x = stack(guess_V, guess_lambda);
  if (too_fast(x)) throw NewtonDiverged("initial guess exceeds v_max");
  Vec r = residual(model, problem, guess_V, guess_lambda);
  double rnorm = r.lpNorm<Eigen::Infinity>();

  int iterations = 0;
  while (rnorm > config.tol) {
    if (iterations == config.max_iter) {
      throw NewtonDiverged("Newton did not converge in " + std::to_string(config.max_iter) +
                           " iterations (residual " + std::to_string(rnorm) + ")");
    }
    const Factorization f =
        factor(jacobian(model, problem, curve_of(x), x.tail(n), config.fd_step),
               config.cond_threshold);
    const Vec dx = f.lu.solve(-r);

    double t = 1.0;
    bool accepted = false;
    Vec trial, trial_r;
    for (int b = 0; b <= config.max_backtracks && !accepted; ++b, t *= config.damping_factor) {
      trial = x + t * dx;
      if (!trial.allFinite()) continue;
      try {
        trial_r = residual(model, problem, curve_of(trial), trial.tail(n));
      } catch (const DomainError&) {
        continue;
      }
      accepted = trial_r.lpNorm<Eigen::Infinity>() <= (1.0 - 1e-4 * t) * rnorm;
    }
    if (!accepted) {
      throw NewtonDiverged("line search stalled at residual " + std::to_string(rnorm));
    }
    x = std::move(trial);
    r = std::move(trial_r);
    rnorm = r.lpNorm<Eigen::Infinity>();
    ++iterations;
    spdlog::debug("newton h={:.6g} it={} residual={:.3e} cond={:.3e}", problem.h, iterations,
                  rnorm, f.condition);
    if (too_fast(x)) throw NewtonDiverged("iterate left the bound |V| <= v_max");
  }

  Curve V = curve_of(x);
  Vec lambda = x.tail(n);
  const double condition =
      factor(jacobian(model, problem, V, lambda, config.fd_step), config.cond_threshold)
          .condition;
  const NodeJets jets = evaluate_nodes(model, problem, V);
  Vec p_start = lambda - problem.h * quad(jets.dLdq);
  return BvpSolution{problem, std::move(V), lambda,    jets.Q,  rnorm,
                     iterations, condition, std::move(p_start), lambda};
}

BvpSolution solve_regularized(const LagrangianModel& model, const Vec& q1, const Vec& z,
                              double h_target, const SolverConfig& config) {
  config.validate();
  check_problem(model, {q1, z, h_target});
  regularity_check(model, q1, z, config.cond_threshold);

  const Grid grid(config.N);
  BvpSolution sol = newton(model, {q1, z, 0.0}, Curve::constant(grid, z),
                           eval(model, q1, z).dLdv, config);
  if (h_target == 0.0) return sol;

  const double base = h_target / config.continuation_steps;
  double dh = base;
  double h = 0.0;
  int depth = 0;
  while (h < h_target) {
    const double h_next = (h_target - h <= dh * (1.0 + 1e-12)) ? h_target : h + dh;
    try {
      sol = newton(model, {q1, z, h_next}, sol.V, sol.lambda, config);
      h = h_next;
      if (depth > 0) {
        dh *= 2.0;
        --depth;
      }
    } catch (const NewtonDiverged& e) {
      if (++depth > config.max_bisections) {
        throw NewtonDiverged("continuation stalled at h=" + std::to_string(h) +
                             " after " + std::to_string(config.max_bisections) +
                             " bisections: " + e.what());
      }
      dh *= 0.5;
      spdlog::debug("continuation: bisecting to dh={:.3e} at h={:.6g}", dh, h);
    }
  }
  return sol;
}

BvpSolution solve_from(const LagrangianModel& model, const RegularizedProblem& problem,
                       const BvpSolution& warm, const SolverConfig& config) {
  check_problem(model, problem);
  if (warm.V.grid().intervals() == config.N && warm.V.dim() == model.dim()) {
    const Vec shift = problem.z - quad(warm.V);
    const Curve guess(warm.V.grid(), warm.V.values().colwise() + shift);
    try {
      return newton(model, problem, guess, warm.lambda, config);
    } catch (const NewtonDiverged&) {
      spdlog::debug("warm start failed; falling back to continuation");
    } catch (const DomainError&) {
      spdlog::debug("warm start left the domain; falling back to continuation");
    }
  }
  return solve_regularized(model, problem.q1, problem.z, problem.h, config);
}

Trajectory to_trajectory(const LagrangianModel& model, const BvpSolution& solution) {
  const Grid& grid = solution.V.grid();
  const int last = grid.intervals();
  const double half_step = 0.5 * solution.problem.h * grid.du();
  Trajectory traj;
  traj.h = solution.problem.h;
  traj.times = solution.problem.h * grid.nodes();
  traj.positions = solution.Q.values();
  traj.velocities = solution.V.values();

  // The discrete boundary momenta weigh ∂L/∂q at the raw end nodes, whose
  // velocities are only first-order accurate. Re-evaluate that half-cell term
  // at the recovered velocity until the pair (v, p) is self-consistent:
  //   p = p_discrete + sign·h·du/2·(∂L/∂q(q, V_raw) − ∂L/∂q(q, v)).
  auto boundary_velocity = [&](int i, const Vec& p_discrete, double sign) {
    const Vec q = solution.Q.node(i);
    const Vec raw_force = eval(model, q, solution.V.node(i)).dLdq;
    const double tol = 1e-13 * (1.0 + p_discrete.lpNorm<Eigen::Infinity>());
    Vec v = legendre_inverse(model, q, p_discrete, tol, Vec(solution.V.node(i)));
    for (int it = 0; it < 50; ++it) {
      const Vec p = p_discrete + sign * half_step * (raw_force - eval(model, q, v).dLdq);
      const Vec next = legendre_inverse(model, q, p, tol, v);
      const double change = (next - v).lpNorm<Eigen::Infinity>();
      v = next;
      if (change <= 1e-15 * (1.0 + v.lpNorm<Eigen::Infinity>())) break;
    }
    return v;
  };
  traj.velocities.col(0) = boundary_velocity(0, solution.momentum_start, 1.0);
  traj.velocities.col(last) = boundary_velocity(last, solution.momentum_end, -1.0);
  return traj;
}

std::pair<BvpSolution, Trajectory> solve_bvp(const LagrangianModel& model, const Vec& q1,
                                             const Vec& q2, double h,
                                             const SolverConfig& config) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidConfig("h must be positive and finite");
  if (q1.size() != model.dim() || q2.size() != model.dim()) {
    throw InvalidConfig("endpoints must have length " + std::to_string(model.dim()));
  }
  const Vec z = (q2 - q1) / h;
  if (!model.in_domain(q1, z) || !model.in_domain(q2, z)) {
    throw DomainError("endpoints outside the domain of model '" + model.name() + "'");
  }
  BvpSolution sol = solve_regularized(model, q1, z, h, config);
  Trajectory traj = to_trajectory(model, sol);
  return {std::move(sol), std::move(traj)};
}

}  // namespace varbvp
