#include "varbvp/builtins.hpp"

#include <cmath>
#include <set>
#include <string>

#include "varbvp/errors.hpp"

namespace varbvp {

namespace {

struct Family {
  std::string_view name;
  std::set<std::string> keys;
};

double get(const Parameters& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double positive(const Parameters& params, const std::string& key, double fallback) {
  const double value = get(params, key, fallback);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidConfig("parameter '" + key + "' must be positive and finite");
  }
  return value;
}

void check_keys(std::string_view family, const Parameters& params,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    if (!allowed.count(key)) {
      throw InvalidConfig("unknown parameter '" + key + "' for model '" +
                          std::string(family) + "'");
    }
  }
}

int resolve_dim(std::string_view family, std::optional<int> dim, int fallback,
                bool fixed) {
  if (!dim) return fallback;
  if (*dim < 1) throw InvalidConfig("dimension must be positive");
  if (fixed && *dim != fallback) {
    throw InvalidConfig("model '" + std::string(family) + "' has fixed dimension " +
                        std::to_string(fallback));
  }
  return *dim;
}

LagrangianModel make_free(const Parameters& params, int n) {
  const double m = positive(params, "mass", 1.0);
  auto first = [m](const Vec& q, const Vec& v) {
    return LagrangianJet{0.5 * m * v.squaredNorm(), Vec::Zero(q.size()), m * v};
  };
  auto second = [m, n](const Vec&, const Vec&) {
    return HessianBlocks{m * Mat::Identity(n, n), Mat::Zero(n, n), Mat::Zero(n, n)};
  };
  return {"free", n, first, second, {}, {{"mass", m}}};
}

LagrangianModel make_harmonic(const Parameters& params, int n) {
  const double w2 = std::pow(positive(params, "omega", 1.0), 2);
  auto first = [w2](const Vec& q, const Vec& v) {
    return LagrangianJet{0.5 * v.squaredNorm() - 0.5 * w2 * q.squaredNorm(), -w2 * q, v};
  };
  auto second = [w2, n](const Vec&, const Vec&) {
    return HessianBlocks{Mat::Identity(n, n), Mat::Zero(n, n), -w2 * Mat::Identity(n, n)};
  };
  return {"harmonic", n, first, second, {}, {{"omega", std::sqrt(w2)}}};
}

LagrangianModel make_pendulum(const Parameters& params) {
  const double g = positive(params, "g", 1.0);
  auto first = [g](const Vec& q, const Vec& v) {
    return LagrangianJet{0.5 * v[0] * v[0] + g * std::cos(q[0]),
                         Vec::Constant(1, -g * std::sin(q[0])), v};
  };
  auto second = [g](const Vec& q, const Vec&) {
    return HessianBlocks{Mat::Identity(1, 1), Mat::Zero(1, 1),
                         Mat::Constant(1, 1, -g * std::cos(q[0]))};
  };
  return {"pendulum", 1, first, second, {}, {{"g", g}}};
}

LagrangianModel make_double_well(const Parameters& params) {
  const double d = positive(params, "depth", 1.0);
  auto first = [d](const Vec& q, const Vec& v) {
    const double x = q[0];
    const double s = x * x - 1.0;
    return LagrangianJet{0.5 * v[0] * v[0] - 0.25 * d * s * s,
                         Vec::Constant(1, -d * x * s), v};
  };
  auto second = [d](const Vec& q, const Vec&) {
    const double x = q[0];
    return HessianBlocks{Mat::Identity(1, 1), Mat::Zero(1, 1),
                         Mat::Constant(1, 1, -d * (3.0 * x * x - 1.0))};
  };
  return {"double_well", 1, first, second, {}, {{"depth", d}}};
}

LagrangianModel make_euclidean(const Parameters& params, int n) {
  const double s = positive(params, "scale", 1.0);
  auto first = [s](const Vec& q, const Vec& v) {
    return LagrangianJet{0.5 * s * v.squaredNorm(), Vec::Zero(q.size()), s * v};
  };
  auto second = [s, n](const Vec&, const Vec&) {
    return HessianBlocks{s * Mat::Identity(n, n), Mat::Zero(n, n), Mat::Zero(n, n)};
  };
  return {"euclidean_metric", n, first, second, {}, {{"scale", s}}};
}

// q = (x, y) on y > 0.
LagrangianModel make_halfplane() {
  auto first = [](const Vec& q, const Vec& v) {
    const double y = q[1];
    const double speed2 = v.squaredNorm();
    Vec dq(2);
    dq << 0.0, -speed2 / (y * y * y);
    return LagrangianJet{0.5 * speed2 / (y * y), dq, v / (y * y)};
  };
  auto second = [](const Vec& q, const Vec& v) {
    const double y = q[1];
    const double y2 = y * y;
    HessianBlocks h{Mat::Identity(2, 2) / y2, Mat::Zero(2, 2), Mat::Zero(2, 2)};
    h.d2Ldqdv.col(1) = -2.0 * v / (y2 * y);
    h.d2Ldq2(1, 1) = 3.0 * v.squaredNorm() / (y2 * y2);
    return h;
  };
  auto domain = [](const Vec& q, const Vec&) { return q[1] > 0.0; };
  return {"halfplane_metric", 2, first, second, domain, {}};
}

// q = (θ, φ) on 0 < θ < π.
LagrangianModel make_sphere(const Parameters& params) {
  const double r2 = std::pow(positive(params, "radius", 1.0), 2);
  auto first = [r2](const Vec& q, const Vec& v) {
    const double s = std::sin(q[0]);
    const double c = std::cos(q[0]);
    Vec dq(2), dv(2);
    dq << r2 * s * c * v[1] * v[1], 0.0;
    dv << r2 * v[0], r2 * s * s * v[1];
    return LagrangianJet{0.5 * r2 * (v[0] * v[0] + s * s * v[1] * v[1]), dq, dv};
  };
  auto second = [r2](const Vec& q, const Vec& v) {
    const double s = std::sin(q[0]);
    const double c = std::cos(q[0]);
    HessianBlocks h{Mat::Zero(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2)};
    h.d2Ldv2(0, 0) = r2;
    h.d2Ldv2(1, 1) = r2 * s * s;
    h.d2Ldqdv(1, 0) = 2.0 * r2 * s * c * v[1];
    h.d2Ldq2(0, 0) = r2 * (c * c - s * s) * v[1] * v[1];
    return h;
  };
  auto domain = [](const Vec& q, const Vec&) { return q[0] > 0.0 && q[0] < M_PI; };
  return {"sphere_chart_metric", 2, first, second, domain, {{"radius", std::sqrt(r2)}}};
}

LagrangianModel make_quartic() {
  auto first = [](const Vec&, const Vec& v) {
    const double x = v[0];
    return LagrangianJet{0.25 * x * x * x * x, Vec::Zero(1), Vec::Constant(1, x * x * x)};
  };
  auto second = [](const Vec&, const Vec& v) {
    return HessianBlocks{Mat::Constant(1, 1, 3.0 * v[0] * v[0]), Mat::Zero(1, 1),
                         Mat::Zero(1, 1)};
  };
  return {"quartic", 1, first, second, {}, {}};
}

}  // namespace

const std::vector<std::string_view>& builtin_names() {
  static const std::vector<std::string_view> names = {
      "free",           "harmonic",         "pendulum",           "double_well",
      "euclidean_metric", "halfplane_metric", "sphere_chart_metric"};
  return names;
}

LagrangianModel make_builtin(std::string_view name, const Parameters& params,
                             std::optional<int> dim) {
  if (name == "free") {
    check_keys(name, params, {"mass"});
    return make_free(params, resolve_dim(name, dim, 1, false));
  }
  if (name == "harmonic") {
    check_keys(name, params, {"omega"});
    return make_harmonic(params, resolve_dim(name, dim, 1, false));
  }
  if (name == "pendulum") {
    check_keys(name, params, {"g"});
    resolve_dim(name, dim, 1, true);
    return make_pendulum(params);
  }
  if (name == "double_well") {
    check_keys(name, params, {"depth"});
    resolve_dim(name, dim, 1, true);
    return make_double_well(params);
  }
  if (name == "euclidean_metric") {
    check_keys(name, params, {"scale"});
    return make_euclidean(params, resolve_dim(name, dim, 2, false));
  }
  if (name == "halfplane_metric") {
    check_keys(name, params, {});
    resolve_dim(name, dim, 2, true);
    return make_halfplane();
  }
  if (name == "sphere_chart_metric") {
    check_keys(name, params, {"radius"});
    resolve_dim(name, dim, 2, true);
    return make_sphere(params);
  }
  if (name == "quartic") {
    check_keys(name, params, {});
    resolve_dim(name, dim, 1, true);
    return make_quartic();
  }
  throw InvalidConfig("unknown model '" + std::string(name) + "'");
}

}  // namespace varbvp
