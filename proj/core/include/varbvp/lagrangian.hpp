#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace varbvp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Parameters = std::map<std::string, double>;

/// L together with its first partials at one point (q, v).
struct LagrangianJet {
  double L = 0.0;
  Vec dLdq;
  Vec dLdv;  ///< momentum
};

/// Second partials at one point (q, v).
///
/// `d2Ldqdv(a, b)` is ∂²L/∂v_a∂q_b, i.e. the q-derivative of the momentum,
/// so that d/dt[∂L/∂v] = d2Ldqdv·q̇ + d2Ldv2·v̇ along a curve.
struct HessianBlocks {
  Mat d2Ldv2;
  Mat d2Ldqdv;
  Mat d2Ldq2;
};

/// An autonomous Lagrangian on an open subset of ℝⁿ × ℝⁿ.
///
/// Evaluators must be pure: the same (q, v) yields bitwise-identical output,
/// and a model may be shared read-only between threads.
class LagrangianModel {
 public:
  using FirstOrder = std::function<LagrangianJet(const Vec& q, const Vec& v)>;
  using SecondOrder = std::function<HessianBlocks(const Vec& q, const Vec& v)>;
  using DomainPredicate = std::function<bool(const Vec& q, const Vec& v)>;

  LagrangianModel(std::string name, int dim, FirstOrder first,
                  SecondOrder second = {}, DomainPredicate domain = {},
                  Parameters parameters = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Parameters& parameters() const { return parameters_; }

  bool has_analytic_hessian() const { return static_cast<bool>(second_); }
  bool in_domain(const Vec& q, const Vec& v) const;

  const FirstOrder& first_order() const { return first_; }
  const SecondOrder& second_order() const { return second_; }

  /// Copy of this model with the analytic Hessian dropped (forces the FD path).
  LagrangianModel without_hessian() const;

 private:
  std::string name_;
  int dim_;
  FirstOrder first_;
  SecondOrder second_;
  DomainPredicate domain_;
  Parameters parameters_;
};

/// Evaluates (L, ∂L/∂q, ∂L/∂v). Throws DomainError outside the domain.
LagrangianJet eval(const LagrangianModel& model, const Vec& q, const Vec& v);

/// Analytic blocks when the model has them, otherwise central differences
/// of the first derivatives with step `fd_step·(1+|x|)` per component.
HessianBlocks second_derivatives(const LagrangianModel& model, const Vec& q,
                                 const Vec& v, double fd_step = 1e-6);

/// Condition estimate of ∂²L/∂v² from an LU factorization.
/// Throws NonRegularLagrangian when singular or above `cond_threshold`.
double regularity_check(const LagrangianModel& model, const Vec& q,
                        const Vec& v, double cond_threshold = 1e12);

/// E = ∂L/∂v·v − L.
double energy(const LagrangianModel& model, const Vec& q, const Vec& v);

/// Solves ∂L/∂v(q, v) = p for v by Newton iteration (at most 50 steps).
/// Starts from v = 0 unless a guess is supplied.
Vec legendre_inverse(const LagrangianModel& model, const Vec& q, const Vec& p,
                     double tol = 1e-12, const std::optional<Vec>& guess = {});

}  // namespace varbvp
