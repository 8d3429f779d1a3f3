#include "problem.hpp"

#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include <varbvp/errors.hpp>

namespace varbvp::cli {

namespace {

double to_double(std::string token) {
  const auto first = token.find_first_not_of(" \t");
  const auto last = token.find_last_not_of(" \t");
  token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw InvalidConfig("not a number: '" + token + "'");
  }
  if (used != token.size()) throw InvalidConfig("not a number: '" + token + "'");
  return value;
}

Vec node_to_vector(const YAML::Node& node, const std::string& key) {
  if (node.IsScalar()) return Vec::Constant(1, node.as<double>());
  if (!node.IsSequence() || node.size() == 0) {
    throw InvalidConfig("'" + key + "' must be a number or a list of numbers");
  }
  Vec v(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) v[i] = node[i].as<double>();
  return v;
}

std::vector<Vec> node_to_points(const YAML::Node& node, const std::string& key) {
  if (node.IsSequence() && node.size() > 0 && node[0].IsSequence()) {
    std::vector<Vec> points;
    for (const auto& item : node) points.push_back(node_to_vector(item, key));
    return points;
  }
  return {node_to_vector(node, key)};
}

void read_solver(const YAML::Node& node, SolverConfig& cfg) {
  if (!node.IsMap()) throw InvalidConfig("'solver' must be a map");
  for (const auto& item : node) {
    const auto key = item.first.as<std::string>();
    const YAML::Node& v = item.second;
    if (key == "N") cfg.N = v.as<int>();
    else if (key == "tol") cfg.tol = v.as<double>();
    else if (key == "max_iter") cfg.max_iter = v.as<int>();
    else if (key == "continuation_steps") cfg.continuation_steps = v.as<int>();
    else if (key == "max_bisections") cfg.max_bisections = v.as<int>();
    else if (key == "damping_factor") cfg.damping_factor = v.as<double>();
    else if (key == "max_backtracks") cfg.max_backtracks = v.as<int>();
    else if (key == "cond_threshold") cfg.cond_threshold = v.as<double>();
    else if (key == "v_max") cfg.v_max = v.as<double>();
    else if (key == "fd_step") cfg.fd_step = v.as<double>();
    else throw InvalidConfig("unknown solver key '" + key + "'");
  }
}

}  // namespace

ProblemSpec load_problem_file(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw InvalidConfig("cannot read problem file '" + path + "': " + e.what());
  }
  if (!root.IsMap()) throw InvalidConfig("problem file must be a map of keys");

  ProblemSpec spec;
  try {
    for (const auto& item : root) {
      const auto key = item.first.as<std::string>();
      const YAML::Node& v = item.second;
      if (key == "model") spec.model = v.as<std::string>();
      else if (key == "dim") spec.dim = v.as<int>();
      else if (key == "parameters") {
        for (const auto& p : v) spec.parameters[p.first.as<std::string>()] = p.second.as<double>();
      } else if (key == "q1") spec.q1 = node_to_points(v, key);
      else if (key == "q2") spec.q2 = node_to_points(v, key);
      else if (key == "h") spec.h = v.as<double>();
      else if (key == "q0") spec.q0 = node_to_vector(v, key);
      else if (key == "v0") spec.v0 = node_to_vector(v, key);
      else if (key == "steps") spec.steps = v.as<int>();
      else if (key == "solver") read_solver(v, spec.solver);
      else throw InvalidConfig("unknown problem key '" + key + "'");
    }
  } catch (const YAML::Exception& e) {
    throw InvalidConfig("bad value in problem file '" + path + "': " + e.what());
  }
  return spec;
}

Vec parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) values.push_back(to_double(token));
  if (values.empty()) throw InvalidConfig("empty vector");
  return Eigen::Map<Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<Vec> parse_vector_list(const std::string& text) {
  std::vector<Vec> points;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ';')) points.push_back(parse_vector(token));
  if (points.empty()) throw InvalidConfig("empty point list");
  return points;
}

}  // namespace varbvp::cli
