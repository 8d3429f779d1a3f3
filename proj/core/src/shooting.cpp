#include "varbvp/shooting.hpp"

#include <cmath>
#include <string>

#include "varbvp/errors.hpp"

namespace varbvp {

Vec el_acceleration(const LagrangianModel& model, const Vec& q, const Vec& v) {
  const LagrangianJet jet = eval(model, q, v);
  const HessianBlocks h = second_derivatives(model, q, v);
  Eigen::PartialPivLU<Mat> lu(h.d2Ldv2);
  if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) {
    throw NonRegularLagrangian("d2L/dv2 is singular; no acceleration field");
  }
  return lu.solve(jet.dLdq - h.d2Ldqdv * v);
}

Trajectory rk4_flow(const LagrangianModel& model, const Vec& q0, const Vec& v0, double T,
                    int steps) {
  if (steps < 1) throw InvalidConfig("rk4_flow needs at least one step");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidConfig("rk4_flow needs T > 0");
  const double dt = T / steps;
  Trajectory traj;
  traj.h = T;
  traj.times.resize(steps + 1);
  traj.positions.resize(q0.size(), steps + 1);
  traj.velocities.resize(v0.size(), steps + 1);

  Vec q = q0, v = v0;
  traj.times[0] = 0.0;
  traj.positions.col(0) = q;
  traj.velocities.col(0) = v;
  for (int k = 0; k < steps; ++k) {
    const Vec a1 = el_acceleration(model, q, v);
    const Vec q2 = q + 0.5 * dt * v, v2 = v + 0.5 * dt * a1;
    const Vec a2 = el_acceleration(model, q2, v2);
    const Vec q3 = q + 0.5 * dt * v2, v3 = v + 0.5 * dt * a2;
    const Vec a3 = el_acceleration(model, q3, v3);
    const Vec q4 = q + dt * v3, v4 = v + dt * a3;
    const Vec a4 = el_acceleration(model, q4, v4);
    q += dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    traj.times[k + 1] = (k + 1 == steps) ? T : (k + 1) * dt;
    traj.positions.col(k + 1) = q;
    traj.velocities.col(k + 1) = v;
  }
  return traj;
}

Vec shoot_bvp(const LagrangianModel& model, const Vec& q1, const Vec& q2, double h,
              double tol, const ShootingOptions& options) {
  if (!(h > 0.0)) throw InvalidConfig("shoot_bvp needs h > 0");
  if (!(tol > 0.0)) throw InvalidConfig("shoot_bvp needs tol > 0");
  const int n = model.dim();
  auto endpoint = [&](const Vec& v0) -> Vec {
    const Trajectory t = rk4_flow(model, q1, v0, h, options.rk4_steps);
    return t.positions.col(t.size() - 1);
  };

  Vec v0 = (q2 - q1) / h;
  Vec miss = endpoint(v0) - q2;
  for (int it = 0; it < options.max_iter; ++it) {
    if (miss.lpNorm<Eigen::Infinity>() <= tol) return v0;
    Mat J(n, n);
    for (int b = 0; b < n; ++b) {
      const double delta = options.fd_step * (1.0 + std::abs(v0[b]));
      Vec vp = v0;
      vp[b] += delta;
      J.col(b) = (endpoint(vp) - q2 - miss) / delta;
    }
    Eigen::PartialPivLU<Mat> lu(J);
    if (!(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) {
      throw NewtonDiverged("shooting sensitivity is singular (conjugate point?)");
    }
    v0 -= lu.solve(miss);
    miss = endpoint(v0) - q2;
  }
  if (miss.lpNorm<Eigen::Infinity>() <= tol) return v0;
  throw NewtonDiverged("shooting did not converge (miss " +
                       std::to_string(miss.lpNorm<Eigen::Infinity>()) + ")");
}

}  // namespace varbvp
