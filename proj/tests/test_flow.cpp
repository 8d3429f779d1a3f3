#include <gtest/gtest.h>

#include "test_support.hpp"

namespace varbvp {
namespace {

using testing::vec;

SolverConfig with_n(int N) {
  SolverConfig cfg;
  cfg.N = N;
  return cfg;
}

double phase_energy(const LagrangianModel& model, const PhasePoint& point) {
  return energy(model, point.q, legendre_inverse(model, point.q, point.p));
}

TEST(Step, FreeParticle) {
  const PhasePoint next = step(make_builtin("free"), {vec({0.0}), vec({1.0})}, 0.5, with_n(16));
  EXPECT_NEAR(next.q[0], 0.5, 1e-14);
  EXPECT_NEAR(next.p[0], 1.0, 1e-14);
}

TEST(Step, HarmonicRotation) {
  const PhasePoint next =
      step(make_builtin("harmonic", {{"omega", 1.0}}), {vec({1.0}), vec({0.0})}, 0.1, with_n(64));
  EXPECT_NEAR(next.q[0], std::cos(0.1), 1e-4);
  EXPECT_NEAR(next.p[0], -std::sin(0.1), 1e-4);
}

TEST(Step, PendulumEnergy) {
  const auto model = make_builtin("pendulum");
  const PhasePoint start{vec({0.5}), vec({0.0})};
  const PhasePoint next = step(model, start, 0.1, with_n(64));
  EXPECT_NEAR(phase_energy(model, next), phase_energy(model, start), 1e-6);
}

TEST(Step, DiagnosticsAndErrors) {
  const auto model = make_builtin("pendulum");
  const StepResult r = flow_step(model, {vec({0.5}), vec({0.3})}, 0.1, SolverConfig{});
  EXPECT_LE(r.diagnostics.momentum_residual, 1e-9);
  EXPECT_GE(r.diagnostics.outer_iterations, 1);
  EXPECT_LE(r.diagnostics.bvp_residual, 1e-10);
  EXPECT_GT(r.diagnostics.condition_estimate, 0.0);
  EXPECT_THROW(flow_step(model, {vec({0.5}), vec({0.3})}, 0.0, SolverConfig{}), InvalidConfig);
  EXPECT_THROW(flow_step(model, {vec({0.5, 1.0}), vec({0.3})}, 0.1, SolverConfig{}),
               InvalidConfig);
}

TEST(IntegrateIvp, FreeParticle) {
  const auto flow = integrate_ivp(make_builtin("free"), vec({0.0}), vec({1.0}), 0.1, 10,
                                  SolverConfig{});
  ASSERT_FALSE(flow.failure);
  ASSERT_EQ(flow.points.size(), 11u);
  EXPECT_NEAR(flow.points.back().q[0], 1.0, 1e-12);
  EXPECT_NEAR(flow.points.back().p[0], 1.0, 1e-12);
}

TEST(IntegrateIvp, HarmonicHundredSteps) {
  const auto flow = integrate_ivp(make_builtin("harmonic"), vec({0.0}), vec({1.0}), 0.1, 100,
                                  with_n(64));
  ASSERT_FALSE(flow.failure);
  EXPECT_NEAR(flow.points.back().q[0], std::sin(10.0), 5e-3);
  EXPECT_NEAR(flow.points.back().p[0], std::cos(10.0), 5e-3);
}

TEST(IntegrateIvp, PendulumEnergyDrift) {
  const auto model = make_builtin("pendulum");
  const auto flow = integrate_ivp(model, vec({1.0}), vec({0.0}), 0.1, 200, with_n(64));
  ASSERT_FALSE(flow.failure);
  const double e0 = phase_energy(model, flow.points.front());
  double drift = 0.0;
  for (const auto& point : flow.points) {
    drift = std::max(drift, std::abs(phase_energy(model, point) - e0));
  }
  EXPECT_LE(drift, 1e-4);
}

TEST(IntegrateIvp, FailureTruncatesFlow) {
  const auto flow =
      integrate_ivp(make_builtin("quartic"), vec({0.0}), vec({0.0}), 0.1, 5, SolverConfig{});
  ASSERT_TRUE(flow.failure);
  EXPECT_EQ(flow.failure->step, 0);
  EXPECT_EQ(flow.failure->kind, "NonRegularLagrangian");
  EXPECT_EQ(flow.points.size(), 1u);
  EXPECT_TRUE(flow.diagnostics.empty());
}

TEST(IntegrateIvp, RejectsBadArguments) {
  const auto model = make_builtin("free");
  EXPECT_THROW(integrate_ivp(model, vec({0.0}), vec({1.0}), 0.1, 0, SolverConfig{}),
               InvalidConfig);
  EXPECT_THROW(integrate_ivp(model, vec({0.0}), vec({1.0}), -0.1, 3, SolverConfig{}),
               InvalidConfig);
}

TEST(Properties, FreeParticleExactForAnyStep) {
  const auto model = make_builtin("free", {{"mass", 2.0}});
  for (double h : {0.05, 0.7, 3.0}) {
    for (int N : {2, 8, 64}) {
      const auto flow = integrate_ivp(model, vec({0.3}), vec({-1.5}), h, 5, with_n(N));
      ASSERT_FALSE(flow.failure);
      for (std::size_t k = 0; k < flow.points.size(); ++k) {
        EXPECT_NEAR(flow.points[k].q[0], 0.3 - 1.5 * h * static_cast<double>(k), 1e-12);
        EXPECT_NEAR(flow.points[k].p[0], -3.0, 1e-12);
      }
    }
  }
}

TEST(Properties, MomentumMatching) {
  const auto flow = integrate_ivp(make_builtin("double_well"), vec({-1.2}), vec({0.4}), 0.1, 30,
                                  SolverConfig{});
  ASSERT_FALSE(flow.failure);
  for (const auto& d : flow.diagnostics) EXPECT_LE(d.momentum_residual, 1e-9);
}

TEST(Properties, LinearMomentumConservation) {
  const auto flow = integrate_ivp(make_builtin("free", {}, 2), vec({0.0, 1.0}),
                                  vec({0.4, -0.8}), 0.1, 100, with_n(16));
  ASSERT_FALSE(flow.failure);
  for (const auto& point : flow.points) {
    EXPECT_LE((point.p - flow.points.front().p).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(Properties, HarmonicEndpointRefinement) {
  const auto model = make_builtin("harmonic");
  auto error_at = [&](int N) {
    const auto flow = integrate_ivp(model, vec({0.0}), vec({1.0}), 0.1, 100, with_n(N));
    return std::hypot(flow.points.back().q[0] - std::sin(10.0),
                      flow.points.back().p[0] - std::cos(10.0));
  };
  const double e16 = error_at(16);
  const double e32 = error_at(32);
  EXPECT_GE(e16 / e32, 3.0);
  EXPECT_LE(e16 / e32, 5.0);
}

}  // namespace
}  // namespace varbvp
