#include "varbvp/lagrangian.hpp"

#include <cmath>
#include <utility>

#include "varbvp/errors.hpp"

namespace varbvp {

namespace {

void check_arguments(const LagrangianModel& model, const Vec& q, const Vec& v) {
  if (q.size() != model.dim() || v.size() != model.dim()) {
    throw InvalidConfig("model '" + model.name() + "' expects vectors of length " +
                        std::to_string(model.dim()));
  }
  if (!q.allFinite() || !v.allFinite()) {
    throw DomainError("non-finite (q, v) passed to model '" + model.name() + "'");
  }
  if (!model.in_domain(q, v)) {
    throw DomainError("(q, v) outside the domain of model '" + model.name() + "'");
  }
}

Eigen::PartialPivLU<Mat> factor_checked(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    throw NonRegularLagrangian(std::string(what) + " has non-finite entries");
  }
  Eigen::PartialPivLU<Mat> lu(m);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > 0.0)) {
    throw NonRegularLagrangian(std::string(what) + " is singular");
  }
  return lu;
}

}  // namespace

LagrangianModel::LagrangianModel(std::string name, int dim, FirstOrder first,
                                 SecondOrder second, DomainPredicate domain,
                                 Parameters parameters)
    : name_(std::move(name)),
      dim_(dim),
      first_(std::move(first)),
      second_(std::move(second)),
      domain_(std::move(domain)),
      parameters_(std::move(parameters)) {
  if (dim_ < 1) throw InvalidConfig("model dimension must be positive");
  if (!first_) throw InvalidConfig("model '" + name_ + "' has no evaluator");
}

bool LagrangianModel::in_domain(const Vec& q, const Vec& v) const {
  return !domain_ || domain_(q, v);
}

LagrangianModel LagrangianModel::without_hessian() const {
  LagrangianModel copy = *this;
  copy.second_ = {};
  return copy;
}

LagrangianJet eval(const LagrangianModel& model, const Vec& q, const Vec& v) {
  check_arguments(model, q, v);
  LagrangianJet jet = model.first_order()(q, v);
  if (!std::isfinite(jet.L) || !jet.dLdq.allFinite() || !jet.dLdv.allFinite()) {
    throw DomainError("model '" + model.name() + "' produced a non-finite value");
  }
  return jet;
}

HessianBlocks second_derivatives(const LagrangianModel& model, const Vec& q,
                                 const Vec& v, double fd_step) {
  check_arguments(model, q, v);
  if (model.has_analytic_hessian()) return model.second_order()(q, v);
  if (!(fd_step > 0.0)) throw InvalidConfig("fd_step must be positive");

  const int n = model.dim();
  HessianBlocks h{Mat(n, n), Mat(n, n), Mat(n, n)};
  const auto& first = model.first_order();
  for (int b = 0; b < n; ++b) {
    const double sv = fd_step * (1.0 + std::abs(v[b]));
    Vec vp = v, vm = v;
    vp[b] += sv;
    vm[b] -= sv;
    const LagrangianJet jp = first(q, vp);
    const LagrangianJet jm = first(q, vm);
    h.d2Ldv2.col(b) = (jp.dLdv - jm.dLdv) / (2.0 * sv);

    const double sq = fd_step * (1.0 + std::abs(q[b]));
    Vec qp = q, qm = q;
    qp[b] += sq;
    qm[b] -= sq;
    const LagrangianJet kp = first(qp, v);
    const LagrangianJet km = first(qm, v);
    h.d2Ldq2.col(b) = (kp.dLdq - km.dLdq) / (2.0 * sq);
    h.d2Ldqdv.col(b) = (kp.dLdv - km.dLdv) / (2.0 * sq);
  }
  return h;
}

double regularity_check(const LagrangianModel& model, const Vec& q, const Vec& v,
                        double cond_threshold) {
  if (!(cond_threshold > 1.0)) throw InvalidConfig("cond_threshold must exceed 1");
  const Mat hess = second_derivatives(model, q, v).d2Ldv2;
  const auto lu = factor_checked(hess, "d2L/dv2");
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(cond <= cond_threshold)) {
    throw NonRegularLagrangian("d2L/dv2 of model '" + model.name() +
                               "' has condition estimate " + std::to_string(cond));
  }
  return cond;
}

double energy(const LagrangianModel& model, const Vec& q, const Vec& v) {
  const LagrangianJet jet = eval(model, q, v);
  return jet.dLdv.dot(v) - jet.L;
}

Vec legendre_inverse(const LagrangianModel& model, const Vec& q, const Vec& p,
                     double tol, const std::optional<Vec>& guess) {
  constexpr int kMaxIterations = 50;
  if (!(tol > 0.0)) throw InvalidConfig("legendre_inverse tolerance must be positive");
  if (p.size() != model.dim()) throw InvalidConfig("momentum has wrong length");

  Vec v = guess ? *guess : Vec::Zero(model.dim());
  for (int it = 0; it <= kMaxIterations; ++it) {
    const Vec r = eval(model, q, v).dLdv - p;
    if (r.lpNorm<Eigen::Infinity>() <= tol) return v;
    if (it == kMaxIterations) break;
    const auto lu = factor_checked(second_derivatives(model, q, v).d2Ldv2, "d2L/dv2");
    v -= lu.solve(r);
  }
  throw NewtonDiverged("legendre_inverse did not converge for model '" +
                       model.name() + "'");
}

}  // namespace varbvp
