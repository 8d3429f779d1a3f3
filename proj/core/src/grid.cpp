#include "varbvp/grid.hpp"

#include <string>
#include <utility>

#include "varbvp/errors.hpp"

namespace varbvp {

Grid::Grid(int intervals) : intervals_(intervals) {
  if (intervals < 2) {
    throw InvalidConfig("grid needs at least 2 subintervals, got " +
                        std::to_string(intervals));
  }
}

Vec Grid::nodes() const {
  Vec u(size());
  for (int i = 0; i < size(); ++i) u[i] = node(i);
  return u;
}

Vec Grid::weights() const {
  Vec w = Vec::Constant(size(), du());
  w[0] *= 0.5;
  w[intervals_] *= 0.5;
  return w;
}

Grid make_grid(int intervals) { return Grid(intervals); }

Curve::Curve(Grid grid, Mat values) : grid_(grid), values_(std::move(values)) {
  if (values_.cols() != grid_.size()) {
    throw InvalidConfig("curve has " + std::to_string(values_.cols()) +
                        " nodes, grid needs " + std::to_string(grid_.size()));
  }
  if (values_.rows() < 1) throw InvalidConfig("curve dimension must be positive");
  if (!values_.allFinite()) throw InvalidConfig("curve values must be finite");
}

Curve Curve::constant(const Grid& grid, const Vec& value) {
  return {grid, value.replicate(1, grid.size())};
}

Curve Curve::zero(const Grid& grid, int dim) { return {grid, Mat::Zero(dim, grid.size())}; }

Vec Curve::flattened() const { return values_.reshaped(); }

Curve Curve::from_flat(const Grid& grid, int dim, const Eigen::Ref<const Vec>& flat) {
  return {grid, flat.reshaped(dim, grid.size())};
}

Curve cumulative(const Curve& curve) {
  const double half = 0.5 * curve.grid().du();
  const Mat& x = curve.values();
  Mat out(x.rows(), x.cols());
  out.col(0).setZero();
  for (Eigen::Index i = 1; i < x.cols(); ++i) {
    out.col(i) = out.col(i - 1) + half * (x.col(i - 1) + x.col(i));
  }
  return {curve.grid(), std::move(out)};
}

Vec quad(const Curve& curve) {
  const Curve running = cumulative(curve);
  return running.values().col(running.size() - 1);
}

Curve tail(const Curve& curve) {
  const Curve running = cumulative(curve);
  const Vec total = running.values().col(running.size() - 1);
  Mat out = (-running.values()).colwise() + total;
  return {curve.grid(), std::move(out)};
}

Curve cumulative_adjoint(const Curve& curve) {
  const double half = 0.5 * curve.grid().du();
  Mat out = tail(curve).values();
  const Eigen::Index last = out.cols() - 1;
  out.col(0) -= half * curve.values().col(0);
  out.col(last) += half * curve.values().col(last);
  return {curve.grid(), std::move(out)};
}

double inner_product(const Curve& a, const Curve& b) {
  if (!(a.grid() == b.grid()) || a.dim() != b.dim()) {
    throw GridMismatch("inner_product of curves on different grids or dimensions");
  }
  const Vec w = a.grid().weights();
  const Vec dots = a.values().cwiseProduct(b.values()).colwise().sum().transpose();
  return w.dot(dots);
}

Curve mean_project(const Curve& curve) {
  Mat out = curve.values().colwise() - quad(curve);
  return {curve.grid(), std::move(out)};
}

}  // namespace varbvp
