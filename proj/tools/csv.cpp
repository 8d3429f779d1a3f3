#include "csv.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include <varbvp/errors.hpp>

namespace varbvp::cli {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

namespace {

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format_number(values[i]);
  }
  out << '\n';
}

std::string indexed(const std::string& prefix, int n) {
  std::string cols;
  for (int i = 0; i < n; ++i) cols += fmt::format(",{}_{}", prefix, i);
  return cols;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const LagrangianModel& model,
                          const Trajectory& traj) {
  validate(traj);
  const int n = traj.dim();
  out << "t" << indexed("q", n) << indexed("v", n) << ",E\n";
  for (int i = 0; i < traj.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (int a = 0; a < n; ++a) row.push_back(traj.positions(a, i));
    for (int a = 0; a < n; ++a) row.push_back(traj.velocities(a, i));
    row.push_back(energy(model, traj.positions.col(i), traj.velocities.col(i)));
    write_row(out, row);
  }
}

void write_flow_csv(std::ostream& out, const LagrangianModel& model, const DiscreteFlow& flow) {
  const int n = model.dim();
  out << "step,t" << indexed("q", n) << indexed("p", n) << ",E\n";
  for (std::size_t k = 0; k < flow.points.size(); ++k) {
    const PhasePoint& pt = flow.points[k];
    const double tol = 1e-13 * (1.0 + pt.p.lpNorm<Eigen::Infinity>());
    const Vec v = legendre_inverse(model, pt.q, pt.p, tol);
    std::vector<double> row{static_cast<double>(k), static_cast<double>(k) * flow.h};
    for (int a = 0; a < n; ++a) row.push_back(pt.q[a]);
    for (int a = 0; a < n; ++a) row.push_back(pt.p[a]);
    row.push_back(energy(model, pt.q, v));
    write_row(out, row);
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidConfig("empty trajectory file");
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns < 4 || (columns - 2) % 2 != 0) throw InvalidConfig("bad trajectory header");
  const int n = static_cast<int>((columns - 2) / 2);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<long>(row.size()) != columns) throw InvalidConfig("ragged trajectory row");
    rows.push_back(std::move(row));
  }
  Trajectory traj;
  const auto k = static_cast<Eigen::Index>(rows.size());
  traj.times.resize(k);
  traj.positions.resize(n, k);
  traj.velocities.resize(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    traj.times[i] = rows[i][0];
    for (int a = 0; a < n; ++a) {
      traj.positions(a, i) = rows[i][1 + a];
      traj.velocities(a, i) = rows[i][1 + n + a];
    }
  }
  traj.h = k ? traj.times[k - 1] : 0.0;
  validate(traj);
  return traj;
}

}  // namespace varbvp::cli
