#pragma once

#include "varbvp/lagrangian.hpp"
#include "varbvp/trajectory.hpp"

namespace varbvp {

// Classical ODE route to the same boundary problems, kept independent of the
// variational solver so the two can cross-check each other.

/// Solves d2Ldv2·a = ∂L/∂q − d2Ldqdv·v for the acceleration a.
Vec el_acceleration(const LagrangianModel& model, const Vec& q, const Vec& v);

/// Classical fourth-order Runge–Kutta on (q, v) over [0, T].
Trajectory rk4_flow(const LagrangianModel& model, const Vec& q0, const Vec& v0, double T,
                    int steps);

struct ShootingOptions {
  int rk4_steps = 1000;
  int max_iter = 50;
  double fd_step = 1e-7;
};

/// Newton on v0 so that the RK4 endpoint q(h; v0) hits q2 within `tol`.
Vec shoot_bvp(const LagrangianModel& model, const Vec& q1, const Vec& q2, double h,
              double tol = 1e-12, const ShootingOptions& options = {});

}  // namespace varbvp
