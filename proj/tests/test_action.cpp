#include <gtest/gtest.h>

#include "test_support.hpp"

namespace varbvp {
namespace {

using testing::kPi;
using testing::vec;

SolverConfig with_n(int N) {
  SolverConfig cfg;
  cfg.N = N;
  return cfg;
}

double closed_form_s(double q1, double q2, double h) {
  return ((q1 * q1 + q2 * q2) * std::cos(h) - 2 * q1 * q2) / (2 * std::sin(h));
}

Trajectory sample(double h, int nodes, double (*q)(double), double (*v)(double)) {
  Trajectory traj;
  traj.h = h;
  traj.times = Vec::LinSpaced(nodes, 0.0, h);
  traj.positions.resize(1, nodes);
  traj.velocities.resize(1, nodes);
  for (int i = 0; i < nodes; ++i) {
    traj.positions(0, i) = q(traj.times[i]);
    traj.velocities(0, i) = v(traj.times[i]);
  }
  return traj;
}

TEST(Action, FreeParticle) {
  const auto model = make_builtin("free");
  const auto [sol, traj] = solve_bvp(model, vec({0.0}), vec({1.0}), 1.0, with_n(32));
  EXPECT_NEAR(action(model, sol), 0.5, 1e-14);
  EXPECT_NEAR(objective(model, sol.problem, sol.V), 0.5, 1e-14);
}

TEST(Action, HarmonicQuarterPeriod) {
  const auto model = make_builtin("harmonic", {{"omega", 1.0}});
  const auto sol = solve_bvp(model, vec({0.0}), vec({1.0}), kPi / 2, with_n(256)).first;
  EXPECT_NEAR(action(model, sol), 0.0, 1e-3);
}

TEST(Action, HalfPlaneGeodesic) {
  const auto model = make_builtin("halfplane_metric");
  const auto [sol, traj] =
      solve_bvp(model, vec({0.0, 1.0}), vec({0.0, std::exp(1.0)}), 1.0, with_n(256));
  EXPECT_NEAR(action(model, sol), 0.5, 1e-3);
  EXPECT_LE(el_residual(model, traj), 1e-3);
}

TEST(GeneratingFunction, FreeParticle) {
  const auto g = generating_function(make_builtin("free"), vec({0.0}), vec({1.0}), 1.0,
                                     with_n(16));
  EXPECT_NEAR(g.S, 0.5, 1e-14);
  EXPECT_NEAR(g.D1S[0], -1.0, 1e-14);
  EXPECT_NEAR(g.D2S[0], 1.0, 1e-14);
}

TEST(GeneratingFunction, HarmonicQuarterPeriod) {
  const auto g = generating_function(make_builtin("harmonic"), vec({0.0}), vec({1.0}), kPi / 2,
                                     with_n(256));
  EXPECT_NEAR(g.S, 0.0, 1e-3);
  EXPECT_NEAR(g.D1S[0], -1.0, 1e-2);
  EXPECT_NEAR(g.D2S[0], 0.0, 1e-2);
}

TEST(GeneratingFunction, HarmonicShortStep) {
  const auto g = generating_function(make_builtin("harmonic"), vec({0.0}), vec({0.1}), 0.1,
                                     SolverConfig{});
  EXPECT_NEAR(g.S, 0.01 * std::cos(0.1) / (2 * std::sin(0.1)), 1e-5);
  EXPECT_NEAR(g.S, 0.0498337, 1e-5);
}

TEST(GeneratingFunction, MatchesClosedFormPartials) {
  const double q1 = 0.3, q2 = -0.4, h = 0.9;
  const auto g = generating_function(make_builtin("harmonic"), vec({q1}), vec({q2}), h,
                                     with_n(128));
  EXPECT_NEAR(g.S, closed_form_s(q1, q2, h), 1e-4);
  EXPECT_NEAR(g.D1S[0], (q1 * std::cos(h) - q2) / std::sin(h), 1e-4);
  EXPECT_NEAR(g.D2S[0], (q2 * std::cos(h) - q1) / std::sin(h), 1e-4);
}

TEST(ElResidual, FreeLine) {
  const auto [sol, traj] =
      solve_bvp(make_builtin("free", {}, 2), vec({0.0, 0.0}), vec({1.0, 2.0}), 1.0, with_n(20));
  EXPECT_LE(el_residual(make_builtin("free", {}, 2), traj), 1e-12);
}

TEST(ElResidual, ExactHarmonicSamples) {
  const Trajectory traj =
      sample(kPi / 2, 200, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); });
  EXPECT_LE(el_residual(make_builtin("harmonic"), traj), 1e-3);
}

TEST(ElResidual, PendulumAtRestOffEquilibrium) {
  const Trajectory traj =
      sample(1.0, 5, [](double) { return kPi / 2; }, [](double) { return 0.0; });
  EXPECT_NEAR(el_residual(make_builtin("pendulum"), traj), 1.0, 1e-12);
}

TEST(ElResidual, NeedsThreeSamples) {
  const Trajectory traj =
      sample(1.0, 2, [](double t) { return t; }, [](double) { return 1.0; });
  EXPECT_THROW(el_residual(make_builtin("free"), traj), InvalidConfig);
}

TEST(Properties, EnergyConstancyConvergesAtSecondOrder) {
  const auto model = make_builtin("harmonic");
  auto spread = [&](int N) {
    const auto traj = solve_bvp(model, vec({0.0}), vec({1.0}), 1.0, with_n(N)).second;
    Vec e(traj.size());
    for (int i = 0; i < traj.size(); ++i) {
      e[i] = energy(model, traj.positions.col(i), traj.velocities.col(i));
    }
    return (e.array() - e.mean()).abs().maxCoeff();
  };
  for (int N : {32, 64}) {
    const double ratio = spread(N) / spread(2 * N);
    EXPECT_GE(ratio, 3.0) << "N=" << N;
    EXPECT_LE(ratio, 5.0) << "N=" << N;
  }
}

TEST(Properties, GeneratingFunctionPartialsMatchFiniteDifferences) {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  for (const char* name : {"harmonic", "pendulum"}) {
    const auto model = make_builtin(name);
    for (auto [q1, q2, h] : {std::tuple{0.1, 0.6, 0.5}, std::tuple{-0.4, 0.3, 0.8}}) {
      const auto g = generating_function(model, vec({q1}), vec({q2}), h, cfg);
      constexpr double kStep = 1e-5;
      auto S = [&](double a, double b) {
        return generating_function(model, vec({a}), vec({b}), h, cfg).S;
      };
      EXPECT_NEAR((S(q1 + kStep, q2) - S(q1 - kStep, q2)) / (2 * kStep), g.D1S[0], 1e-4) << name;
      EXPECT_NEAR((S(q1, q2 + kStep) - S(q1, q2 - kStep)) / (2 * kStep), g.D2S[0], 1e-4) << name;
    }
  }
}

TEST(Properties, ElResidualConvergesAtSecondOrder) {
  struct Case {
    const char* name;
    Vec q1, q2;
    double h;
  };
  const std::vector<Case> cases{{"harmonic", vec({0.0}), vec({1.0}), 1.0},
                                {"pendulum", vec({0.2}), vec({1.0}), 0.8},
                                {"halfplane_metric", vec({0.0, 1.0}), vec({1.0, 1.5}), 1.0}};
  for (const auto& c : cases) {
    const auto model = make_builtin(c.name);
    auto residual_at = [&](int N) {
      return el_residual(model, solve_bvp(model, c.q1, c.q2, c.h, with_n(N)).second);
    };
    const double ratio = residual_at(32) / residual_at(64);
    EXPECT_GE(ratio, 3.0) << c.name;
    EXPECT_LE(ratio, 5.0) << c.name;
  }
}

TEST(GeneratingValue, AgreesWithSolution) {
  const auto model = make_builtin("pendulum");
  const auto sol = solve_bvp(model, vec({0.0}), vec({0.5}), 0.5, SolverConfig{}).first;
  const auto g = generating_value(model, sol);
  EXPECT_EQ(g.S, action(model, sol));
  EXPECT_EQ(g.D1S, -sol.momentum_start);
  EXPECT_EQ(g.D2S, sol.momentum_end);
}

}  // namespace
}  // namespace varbvp
