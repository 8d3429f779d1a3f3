#include "cli.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <varbvp/varbvp.hpp>

#include "csv.hpp"
#include "problem.hpp"

namespace varbvp::cli {

namespace {

struct Flags {
  std::string config;
  std::string model;
  std::optional<int> dim;
  std::vector<std::string> params;
  std::map<std::string, double> shorthand;
  std::string q1, q2, q0, v0;
  std::optional<double> h;
  std::optional<int> steps;

  std::optional<int> N;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> continuation_steps;
  std::optional<int> max_bisections;
  std::optional<double> cond_threshold;
  std::optional<double> v_max;

  std::string out;
  bool grid = false;
  int jobs = 1;

  int rk4_steps = 1000;
  double shoot_tol = 1e-12;
  std::string trajectory;

  int samples = 5;
  std::uint64_t seed = 1;
  double amplitude = 0.1;

  std::string ns = "16,32,64,128";
};

void configure_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_logger_mt("varbvp");
    spdlog::set_default_logger(logger);
  });
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("VARBVP_LOG")) {
    const std::string value(env);
    if (value == "quiet") level = spdlog::level::off;
    else if (value == "debug") level = spdlog::level::debug;
    else if (value != "info") spdlog::warn("VARBVP_LOG='{}' not recognised; using info", value);
  }
  spdlog::set_level(level);
}

void add_model_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "YAML problem file; flags override its values");
  sub->add_option("--model", f.model, "built-in model name");
  sub->add_option("--dim", f.dim, "model dimension (where the family allows it)");
  sub->add_option("--param", f.params, "model parameter as key=value (repeatable)");
  for (const char* key : {"omega", "mass", "g", "depth", "scale", "radius"}) {
    sub->add_option_function<double>(
        std::string("--") + key, [&f, key](double v) { f.shorthand[key] = v; },
        std::string("shorthand for --param ") + key + "=VALUE");
  }
}

void add_solver_options(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.N, "grid subintervals N");
  sub->add_option("--tol", f.tol, "Newton residual tolerance");
  sub->add_option("--max-iter", f.max_iter, "Newton iteration cap");
  sub->add_option("--continuation-steps", f.continuation_steps, "initial h partition");
  sub->add_option("--max-bisections", f.max_bisections, "continuation halving depth");
  sub->add_option("--cond-threshold", f.cond_threshold, "largest accepted condition estimate");
  sub->add_option("--v-max", f.v_max, "divergence bound on |V|");
}

void add_endpoint_options(CLI::App* sub, Flags& f) {
  sub->add_option("--q1", f.q1, "left endpoint, e.g. 0 or 0,1");
  sub->add_option("--q2", f.q2, "right endpoint");
  sub->add_option("--h", f.h, "duration h > 0");
}

ProblemSpec merge(const Flags& f) {
  ProblemSpec spec = f.config.empty() ? ProblemSpec{} : load_problem_file(f.config);
  if (!f.model.empty()) spec.model = f.model;
  if (f.dim) spec.dim = f.dim;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidConfig("--param expects key=value, got " + kv);
    spec.parameters[kv.substr(0, eq)] = parse_vector(kv.substr(eq + 1))[0];
  }
  for (const auto& [key, value] : f.shorthand) spec.parameters[key] = value;
  if (!f.q1.empty()) spec.q1 = parse_vector_list(f.q1);
  if (!f.q2.empty()) spec.q2 = parse_vector_list(f.q2);
  if (!f.q0.empty()) spec.q0 = parse_vector(f.q0);
  if (!f.v0.empty()) spec.v0 = parse_vector(f.v0);
  if (f.h) spec.h = f.h;
  if (f.steps) spec.steps = *f.steps;

  SolverConfig& c = spec.solver;
  if (f.N) c.N = *f.N;
  if (f.tol) c.tol = *f.tol;
  if (f.max_iter) c.max_iter = *f.max_iter;
  if (f.continuation_steps) c.continuation_steps = *f.continuation_steps;
  if (f.max_bisections) c.max_bisections = *f.max_bisections;
  if (f.cond_threshold) c.cond_threshold = *f.cond_threshold;
  if (f.v_max) c.v_max = *f.v_max;
  c.validate();

  if (spec.model.empty()) throw InvalidConfig("no model given (--model or problem file)");
  return spec;
}

LagrangianModel build_model(const ProblemSpec& spec) {
  return make_builtin(spec.model, spec.parameters, spec.dim);
}

const Vec& single(const std::vector<Vec>& points, const char* name) {
  if (points.size() != 1) {
    throw InvalidConfig(std::string(name) + " must be a single point");
  }
  return points.front();
}

double require_h(const ProblemSpec& spec) {
  if (!spec.h) throw InvalidConfig("no duration given (--h)");
  return *spec.h;
}

/// Writes to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidConfig("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_solve(const Flags& f, std::ostream& out) {
  const ProblemSpec spec = merge(f);
  const LagrangianModel model = build_model(spec);
  const auto [solution, traj] =
      solve_bvp(model, single(spec.q1, "q1"), single(spec.q2, "q2"), require_h(spec),
                spec.solver);
  Sink sink(f.out, out);
  write_trajectory_csv(sink.get(), model, traj);
  spdlog::info("solve: residual={:.3e} iterations={} condition={:.3e} action={:.17g}",
               solution.residual_norm, solution.iterations, solution.condition_estimate,
               action(model, solution));
  return kOk;
}

struct GenfunRow {
  Vec q1, q2;
  std::optional<GeneratingValue> value;
  int code = kOk;
  std::string error;
};

int code_for_current_exception(std::string& message);

int cmd_genfun(const Flags& f, std::ostream& out) {
  const ProblemSpec spec = merge(f);
  const LagrangianModel model = build_model(spec);
  const double h = require_h(spec);
  if (!f.grid) {
    single(spec.q1, "q1 (use --grid for tables)");
    single(spec.q2, "q2 (use --grid for tables)");
  }
  if (spec.q1.empty() || spec.q2.empty()) throw InvalidConfig("q1 and q2 are required");

  std::vector<GenfunRow> rows;
  for (const Vec& a : spec.q1) {
    for (const Vec& b : spec.q2) rows.push_back({a, b, std::nullopt, kOk, {}});
  }

  // Rows are filled by index, so output order never depends on scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        rows[i].value = generating_function(model, rows[i].q1, rows[i].q2, h, spec.solver);
      } catch (...) {
        rows[i].code = code_for_current_exception(rows[i].error);
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(f.jobs, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const int n = model.dim();
  Sink sink(f.out, out);
  std::ostream& os = sink.get();
  for (int a = 0; a < n; ++a) os << (a ? "," : "") << "q1_" << a;
  for (int a = 0; a < n; ++a) os << ",q2_" << a;
  os << ",S";
  for (int a = 0; a < n; ++a) os << ",D1S_" << a;
  for (int a = 0; a < n; ++a) os << ",D2S_" << a;
  os << '\n';

  int status = kOk;
  for (const GenfunRow& row : rows) {
    std::vector<double> cells(row.q1.data(), row.q1.data() + n);
    cells.insert(cells.end(), row.q2.data(), row.q2.data() + n);
    if (row.value) {
      cells.push_back(row.value->S);
      cells.insert(cells.end(), row.value->D1S.data(), row.value->D1S.data() + n);
      cells.insert(cells.end(), row.value->D2S.data(), row.value->D2S.data() + n);
    } else {
      cells.resize(cells.size() + 1 + 2 * n, std::numeric_limits<double>::quiet_NaN());
      spdlog::error("genfun failed: {}", row.error);
      if (status == kOk) status = row.code;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << format_number(cells[i]);
    os << '\n';
  }
  return status;
}

int cmd_integrate(const Flags& f, std::ostream& out) {
  const ProblemSpec spec = merge(f);
  const LagrangianModel model = build_model(spec);
  if (!spec.q0 || !spec.v0) throw InvalidConfig("integrate needs --q0 and --v0");
  const DiscreteFlow flow =
      integrate_ivp(model, *spec.q0, *spec.v0, require_h(spec), spec.steps, spec.solver);
  Sink sink(f.out, out);
  write_flow_csv(sink.get(), model, flow);
  if (flow.failure) {
    spdlog::error("integrate: step {} failed ({}): {}", flow.failure->step,
                  flow.failure->kind, flow.failure->message);
    if (flow.failure->kind == "NewtonDiverged") return kConvergenceFailure;
    if (flow.failure->kind == "NonRegularLagrangian") return kNonRegular;
    return kInvalidConfig;
  }
  spdlog::info("integrate: {} steps", flow.diagnostics.size());
  return kOk;
}

int cmd_shoot(const Flags& f, std::ostream& out) {
  const ProblemSpec spec = merge(f);
  const LagrangianModel model = build_model(spec);
  const Vec& q1 = single(spec.q1, "q1");
  const double h = require_h(spec);
  ShootingOptions options;
  options.rk4_steps = f.rk4_steps;
  const Vec v0 = shoot_bvp(model, q1, single(spec.q2, "q2"), h, f.shoot_tol, options);

  Sink sink(f.out, out);
  std::ostream& os = sink.get();
  for (int a = 0; a < v0.size(); ++a) os << (a ? "," : "") << "v0_" << a;
  os << '\n';
  for (int a = 0; a < v0.size(); ++a) os << (a ? "," : "") << format_number(v0[a]);
  os << '\n';
  if (!f.trajectory.empty()) {
    std::ofstream file(f.trajectory);
    if (!file) throw InvalidConfig("cannot write '" + f.trajectory + "'");
    write_trajectory_csv(file, model, rk4_flow(model, q1, v0, h, options.rk4_steps));
  }
  return kOk;
}

int cmd_check_gradient(const Flags& f, std::ostream& out) {
  const ProblemSpec spec = merge(f);
  const LagrangianModel model = build_model(spec);
  const Vec& q1 = single(spec.q1, "q1");
  const double h = require_h(spec);
  const Vec z = (single(spec.q2, "q2") - q1) / h;
  const int n = model.dim();

  Sink sink(f.out, out);
  std::ostream& os = sink.get();
  os << "check,index,finite_difference,analytic,relative_error\n";
  double worst = 0.0;
  auto emit = [&](const char* check, int index, double fd, double an) {
    const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-300});
    worst = std::max(worst, std::abs(fd - an) <= 1e-12 ? 0.0 : rel);
    os << check << ',' << index << ',' << format_number(fd) << ',' << format_number(an) << ','
       << format_number(rel) << '\n';
  };

  // First partials of L at (q1, z).
  const LagrangianJet jet = eval(model, q1, z);
  for (int a = 0; a < n; ++a) {
    const double sq = 1e-6 * (1.0 + std::abs(q1[a]));
    Vec qp = q1, qm = q1;
    qp[a] += sq;
    qm[a] -= sq;
    emit("dLdq", a, (eval(model, qp, z).L - eval(model, qm, z).L) / (2 * sq), jet.dLdq[a]);
    const double sv = 1e-6 * (1.0 + std::abs(z[a]));
    Vec vp = z, vm = z;
    vp[a] += sv;
    vm[a] -= sv;
    emit("dLdv", a, (eval(model, q1, vp).L - eval(model, q1, vm).L) / (2 * sv), jet.dLdv[a]);
  }

  // Weak gradient of the discrete objective along random mean-zero directions.
  const Grid grid(spec.solver.N);
  const RegularizedProblem problem{q1, z, h};
  std::mt19937_64 rng(f.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  auto random_curve = [&] {
    Mat m(n, grid.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng);
    return mean_project(Curve(grid, m));
  };
  const Curve V(grid, Curve::constant(grid, z).values() + f.amplitude * random_curve().values());
  const Curve gradient = stationarity_gradient(model, problem, V);
  constexpr double kStep = 1e-5;
  for (int k = 0; k < f.samples; ++k) {
    const Curve dV = random_curve();
    const Curve plus(grid, V.values() + kStep * dV.values());
    const Curve minus(grid, V.values() - kStep * dV.values());
    const double fd =
        (objective(model, problem, plus) - objective(model, problem, minus)) / (2 * kStep);
    emit("objective", k, fd, inner_product(mean_project(gradient), dV));
  }
  spdlog::info("check-gradient: max relative error {:.3e}", worst);
  return kOk;
}

int cmd_convergence(const Flags& f, std::ostream& out) {
  const ProblemSpec spec = merge(f);
  const LagrangianModel model = build_model(spec);
  const Vec& q1 = single(spec.q1, "q1");
  const Vec& q2 = single(spec.q2, "q2");
  const double h = require_h(spec);

  std::vector<int> ns;
  for (double v : parse_vector(f.ns)) ns.push_back(static_cast<int>(v));
  const int finest = *std::max_element(ns.begin(), ns.end());
  const int rk_steps = 16 * finest;
  for (int N : ns) {
    if (N < 2 || rk_steps % N != 0) {
      throw InvalidConfig("convergence grid sizes must be >= 2 and divide 16*max(N)");
    }
  }
  ShootingOptions options;
  options.rk4_steps = rk_steps;
  const Vec v0 = shoot_bvp(model, q1, q2, h, 1e-12, options);
  const Trajectory reference = rk4_flow(model, q1, v0, h, rk_steps);

  Sink sink(f.out, out);
  std::ostream& os = sink.get();
  os << "N,max_error,ratio,action,residual_norm,condition_estimate\n";
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int N : ns) {
    SolverConfig cfg = spec.solver;
    cfg.N = N;
    const auto [solution, traj] = solve_bvp(model, q1, q2, h, cfg);
    double err = 0.0;
    for (int i = 0; i <= N; ++i) {
      const Vec diff = traj.positions.col(i) - reference.positions.col(i * (rk_steps / N));
      err = std::max(err, diff.lpNorm<Eigen::Infinity>());
    }
    os << N << ',' << format_number(err) << ',' << format_number(previous / err) << ','
       << format_number(action(model, solution)) << ','
       << format_number(solution.residual_norm) << ','
       << format_number(solution.condition_estimate) << '\n';
    previous = err;
  }
  return kOk;
}

int code_for_current_exception(std::string& message) {
  try {
    throw;
  } catch (const NewtonDiverged& e) {
    message = e.what();
    return kConvergenceFailure;
  } catch (const NonRegularLagrangian& e) {
    message = e.what();
    return kNonRegular;
  } catch (const Error& e) {
    message = e.what();
    return kInvalidConfig;
  } catch (const std::exception& e) {
    message = e.what();
    return kUnexpected;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out) {
  configure_logging();
  Flags f;
  CLI::App app{"Local boundary value problems of Lagrangian mechanics", "varbvp"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "boundary value problem -> trajectory CSV");
  auto* genfun = app.add_subcommand("genfun", "generating function S, D1S, D2S");
  auto* integrate = app.add_subcommand("integrate", "initial value problem by gluing solves");
  auto* shoot = app.add_subcommand("shoot", "RK4 shooting oracle");
  auto* check = app.add_subcommand("check-gradient", "finite differences vs analytic gradients");
  auto* conv = app.add_subcommand("convergence", "error-vs-N table against the RK4 oracle");

  for (auto* sub : {solve, genfun, integrate, shoot, check, conv}) {
    add_model_options(sub, f);
    add_solver_options(sub, f);
    sub->add_option("--out", f.out, "output file (default: standard output)");
  }
  for (auto* sub : {solve, genfun, shoot, check, conv}) add_endpoint_options(sub, f);

  genfun->add_flag("--grid", f.grid, "tabulate every (q1, q2) pair from ';'-separated lists");
  genfun->add_option("--jobs", f.jobs, "worker threads for --grid");
  integrate->add_option("--q0", f.q0, "initial position");
  integrate->add_option("--v0", f.v0, "initial velocity");
  integrate->add_option("--h", f.h, "step size");
  integrate->add_option("--steps", f.steps, "number of steps");
  shoot->add_option("--rk4-steps", f.rk4_steps, "RK4 steps over [0, h]");
  shoot->add_option("--shoot-tol", f.shoot_tol, "endpoint tolerance");
  shoot->add_option("--trajectory", f.trajectory, "write the RK4 trajectory CSV here");
  check->add_option("--samples", f.samples, "random directions for the objective check");
  check->add_option("--seed", f.seed, "random seed");
  check->add_option("--amplitude", f.amplitude, "size of the random base perturbation");
  conv->add_option("--ns", f.ns, "comma-separated grid sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(f, out);
    if (genfun->parsed()) return cmd_genfun(f, out);
    if (integrate->parsed()) return cmd_integrate(f, out);
    if (shoot->parsed()) return cmd_shoot(f, out);
    if (check->parsed()) return cmd_check_gradient(f, out);
    return cmd_convergence(f, out);
  } catch (...) {
    std::string message;
    const int code = code_for_current_exception(message);
    spdlog::error("{}", message);
    return code;
  }
}

}  // namespace varbvp::cli
