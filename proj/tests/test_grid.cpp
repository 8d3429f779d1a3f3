#include <gtest/gtest.h>

#include "test_support.hpp"

namespace varbvp {
namespace {

using testing::Sampler;
using testing::vec;

Curve scalar_curve(const Grid& grid, std::initializer_list<double> values) {
  return Curve(grid, vec(values).transpose());
}

Curve sampled(const Grid& grid, double (*f)(double)) {
  Mat m(1, grid.size());
  for (int i = 0; i < grid.size(); ++i) m(0, i) = f(grid.node(i));
  return Curve(grid, m);
}

Curve random_curve(Sampler& sampler, const Grid& grid, int n) {
  Mat m(n, grid.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = sampler.uniform(-3.0, 3.0);
  return Curve(grid, m);
}

TEST(MakeGrid, Nodes) {
  EXPECT_EQ(make_grid(2).nodes(), vec({0.0, 0.5, 1.0}));
  EXPECT_EQ(make_grid(4).nodes(), vec({0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_THROW(make_grid(1), InvalidConfig);
  EXPECT_THROW(make_grid(0), InvalidConfig);
}

TEST(MakeGrid, WeightsSumToOne) {
  const Grid grid(10);
  EXPECT_NEAR(grid.weights().sum(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(grid.weights()[0], 0.05);
  EXPECT_DOUBLE_EQ(grid.weights()[5], 0.1);
}

TEST(CurveType, ValidatesShape) {
  const Grid grid(2);
  EXPECT_THROW(Curve(grid, Mat::Zero(1, 2)), InvalidConfig);
  EXPECT_THROW(Curve(grid, vec({0.0, NAN, 1.0}).transpose()), InvalidConfig);
}

TEST(CurveType, FlattenRoundTrip) {
  Sampler sampler;
  const Grid grid(5);
  const Curve c = random_curve(sampler, grid, 3);
  const Vec flat = c.flattened();
  EXPECT_EQ(flat.segment(3, 3), c.values().col(1));
  EXPECT_EQ(Curve::from_flat(grid, 3, flat).values(), c.values());
}

TEST(Quad, Examples) {
  const Grid grid(2);
  EXPECT_EQ(quad(Curve::constant(grid, vec({1.5, -2.0}))), vec({1.5, -2.0}));
  EXPECT_DOUBLE_EQ(quad(scalar_curve(grid, {0.0, 0.5, 1.0}))[0], 0.5);
  EXPECT_DOUBLE_EQ(quad(scalar_curve(grid, {0.0, 0.25, 1.0}))[0], 0.375);
}

TEST(Cumulative, Examples) {
  const Grid grid(2);
  EXPECT_EQ(cumulative(Curve::constant(grid, vec({1.0}))).values(),
            vec({0.0, 0.5, 1.0}).transpose());
  EXPECT_EQ(cumulative(scalar_curve(grid, {0.0, 0.5, 1.0})).values(),
            vec({0.0, 0.125, 0.5}).transpose());
  EXPECT_EQ(cumulative(Curve::zero(grid, 2)).values(), Mat::Zero(2, 3));
}

TEST(Tail, Examples) {
  const Grid grid(2);
  EXPECT_EQ(tail(Curve::constant(grid, vec({1.0}))).values(), vec({1.0, 0.5, 0.0}).transpose());
  EXPECT_EQ(tail(Curve::zero(grid, 1)).values(), Mat::Zero(1, 3));
  EXPECT_EQ(tail(scalar_curve(grid, {0.0, 0.5, 1.0})).values(),
            vec({0.5, 0.375, 0.0}).transpose());
}

TEST(InnerProduct, Examples) {
  const Grid grid(2);
  EXPECT_DOUBLE_EQ(inner_product(Curve::constant(grid, vec({2.0})),
                                 Curve::constant(grid, vec({-3.0}))),
                   -6.0);
  EXPECT_DOUBLE_EQ(
      inner_product(scalar_curve(grid, {0.0, 0.5, 1.0}), Curve::constant(grid, vec({1.0}))),
      0.5);
  EXPECT_EQ(inner_product(Curve::zero(grid, 2), Curve::zero(grid, 2)), 0.0);
}

TEST(InnerProduct, Positivity) {
  Sampler sampler;
  const Grid grid(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Curve c = random_curve(sampler, grid, 2);
    EXPECT_GT(inner_product(c, c), 0.0);
  }
}

TEST(InnerProduct, Mismatch) {
  EXPECT_THROW(inner_product(Curve::zero(Grid(2), 1), Curve::zero(Grid(3), 1)), GridMismatch);
  EXPECT_THROW(inner_product(Curve::zero(Grid(2), 1), Curve::zero(Grid(2), 2)), GridMismatch);
}

TEST(MeanProject, Examples) {
  const Grid grid(2);
  EXPECT_EQ(mean_project(Curve::constant(grid, vec({4.0}))).values(), Mat::Zero(1, 3));
  EXPECT_EQ(mean_project(scalar_curve(grid, {0.0, 0.5, 1.0})).values(),
            vec({-0.5, 0.0, 0.5}).transpose());
  const Curve zero_mean = scalar_curve(grid, {-0.5, 0.0, 0.5});
  EXPECT_EQ(mean_project(zero_mean).values(), zero_mean.values());
}

TEST(Properties, ProjectionHasZeroMean) {
  Sampler sampler;
  for (int N : {2, 5, 16, 64}) {
    const Grid grid(N);
    for (int trial = 0; trial < 25; ++trial) {
      const Curve c = random_curve(sampler, grid, 3);
      EXPECT_LE(quad(mean_project(c)).lpNorm<Eigen::Infinity>(),
                1e-14 * testing::max_abs(c.values()));
    }
  }
}

TEST(Properties, ProjectionIsIdempotentAndSelfAdjoint) {
  Sampler sampler;
  const Grid grid(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Curve a = random_curve(sampler, grid, 2);
    const Curve b = random_curve(sampler, grid, 2);
    const Curve pa = mean_project(a);
    EXPECT_LE(testing::max_abs(mean_project(pa).values() - pa.values()), 1e-14);
    EXPECT_LE(std::abs(inner_product(pa, b) - inner_product(a, mean_project(b))), 1e-12);
  }
}

TEST(Properties, CumulativeEndsAtQuadExactly) {
  Sampler sampler;
  for (int N : {2, 3, 17, 100}) {
    const Curve c = random_curve(sampler, Grid(N), 2);
    EXPECT_EQ(cumulative(c).values().col(N), quad(c));
    EXPECT_EQ(tail(c).values(),
              (quad(c).replicate(1, N + 1) - cumulative(c).values()).eval());
  }
}

TEST(Properties, CumulativeAdjoint) {
  Sampler sampler;
  const Grid grid(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Curve f = random_curve(sampler, grid, 2);
    const Curve g = random_curve(sampler, grid, 2);
    EXPECT_NEAR(inner_product(cumulative_adjoint(f), g), inner_product(f, cumulative(g)), 1e-12);
    const Mat diff = cumulative_adjoint(f).values() - tail(f).values();
    EXPECT_LE(testing::max_abs(diff.middleCols(1, grid.intervals() - 1)), 1e-14);
    EXPECT_NEAR(diff(0, 0), -0.5 * grid.du() * f.values()(0, 0), 1e-14);
    EXPECT_NEAR(diff(1, grid.intervals()), 0.5 * grid.du() * f.values()(1, grid.intervals()),
                1e-14);
  }
}

TEST(Properties, QuadratureConvergesAtSecondOrder) {
  auto square = [](double u) { return u * u; };
  double previous = 0.0;
  for (int N = 8; N <= 512; N *= 2) {
    const double err = std::abs(quad(sampled(Grid(N), square))[0] - 1.0 / 3.0);
    if (previous > 0.0) {
      EXPECT_GE(previous / err, 3.5);
      EXPECT_LE(previous / err, 4.5);
    }
    previous = err;
  }
}

TEST(Properties, QuadExactOnAffine) {
  auto affine = [](double u) { return 2.0 - 3.0 * u; };
  for (int N : {2, 3, 10}) EXPECT_NEAR(quad(sampled(Grid(N), affine))[0], 0.5, 1e-15);
}

}  // namespace
}  // namespace varbvp
