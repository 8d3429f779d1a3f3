#pragma once

#include "varbvp/lagrangian.hpp"

namespace varbvp {

/// Uniform grid u_i = i/N, i = 0..N, on [0, 1].
class Grid {
 public:
  explicit Grid(int intervals);

  int intervals() const { return intervals_; }
  int size() const { return intervals_ + 1; }
  double du() const { return 1.0 / intervals_; }
  double node(int i) const { return static_cast<double>(i) / intervals_; }
  Vec nodes() const;

  /// Composite trapezoid weights (du/2 at the ends, du inside).
  Vec weights() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int intervals_;
};

Grid make_grid(int intervals);

/// Node values of a curve [0, 1] → ℝⁿ, stored one node per column.
class Curve {
 public:
  Curve(Grid grid, Mat values);

  static Curve constant(const Grid& grid, const Vec& value);
  static Curve zero(const Grid& grid, int dim);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(values_.rows()); }
  int size() const { return static_cast<int>(values_.cols()); }

  const Mat& values() const { return values_; }
  auto node(int i) const { return values_.col(i); }

  /// Node values stacked node-major: (x_0, x_1, ..., x_N).
  Vec flattened() const;
  static Curve from_flat(const Grid& grid, int dim, const Eigen::Ref<const Vec>& flat);

 private:
  Grid grid_;
  Mat values_;
};

/// ∫₀¹ by the composite trapezoid rule.
Vec quad(const Curve& curve);

/// Node values of ∫₀ᵘ (running trapezoid sums). The last node is quad(curve)
/// bit for bit.
Curve cumulative(const Curve& curve);

/// Node values of ∫ᵤ¹, defined as quad(curve) − cumulative(curve).
Curve tail(const Curve& curve);

/// Adjoint of `cumulative` under `inner_product`:
/// ⟨⟨cumulative_adjoint(f), g⟩⟩ = ⟨⟨f, cumulative(g)⟩⟩ exactly in exact
/// arithmetic. Agrees with `tail` at interior nodes; differs by −du/2·f₀ at
/// u = 0 and +du/2·f_N at u = 1.
Curve cumulative_adjoint(const Curve& curve);

/// Weak inner product ∫₀¹ a·b by the trapezoid rule. Throws GridMismatch.
double inner_product(const Curve& a, const Curve& b);

/// Orthogonal projection onto mean-zero curves: subtracts quad(curve).
Curve mean_project(const Curve& curve);

}  // namespace varbvp
