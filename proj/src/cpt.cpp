#include "faithlab/cpt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faithlab {

CptModel::CptModel(Dag dag, std::vector<Eigen::MatrixXd> tables) : dag_(std::move(dag)), tables_(std::move(tables)) {
  if (tables_.size() != static_cast<std::size_t>(dag_.size())) {
    throw std::invalid_argument("need exactly one table per node");
  }
  for (int i = 0; i < dag_.size(); ++i) {
    Eigen::Index rows = 1;
    for (int p : dag_.parents(i)) rows *= dag_.node(p).cardinality;
    const auto& t = tables_[static_cast<std::size_t>(i)];
    if (t.rows() != rows || t.cols() != dag_.node(i).cardinality) {
      throw std::invalid_argument("table of " + dag_.node(i).name + " has the wrong shape");
    }
    if ((t.array() < 0.0).any() || (t.array() > 1.0).any()) {
      throw std::invalid_argument("table of " + dag_.node(i).name + " has entries outside [0, 1]");
    }
    if (((t.rowwise().sum().array() - 1.0).abs() > kExactTolerance).any()) {
      throw std::invalid_argument("a row of " + dag_.node(i).name + "'s table does not sum to 1");
    }
  }
}

Eigen::Index CptModel::parent_row(int node, std::span<const int> parent_values) const {
  const auto parents = dag_.parents(node);
  if (parent_values.size() != parents.size()) throw std::invalid_argument("parent assignment rank mismatch");
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    row = row * dag_.node(parents[k]).cardinality + parent_values[k];
  }
  return row;
}

Eigen::Index CptModel::row_index(int node, std::span<const int> assignment) const {
  Eigen::Index row = 0;
  for (int p : dag_.parents(node)) row = row * dag_.node(p).cardinality + assignment[static_cast<std::size_t>(p)];
  return row;
}

std::size_t joint_cell_count(const Dag& dag) {
  std::size_t cells = 1;
  for (const auto& n : dag.nodes()) {
    cells *= static_cast<std::size_t>(n.cardinality);
    if (cells > kMaxJointCells) return kMaxJointCells + 1;
  }
  return cells;
}

JointTable joint_from_cpt(const CptModel& model, bool marginalize_latents) {
  const Dag& dag = model.dag();
  if (joint_cell_count(dag) > kMaxJointCells) {
    throw std::length_error("joint would exceed 10^6 cells");
  }
  std::vector<Variable> vars;
  for (const auto& n : dag.nodes()) vars.push_back({n.name, n.cardinality});
  JointTable joint = JointTable::zeros(vars);

  std::vector<int> a(vars.size(), 0);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    double p = 1.0;
    for (int i = 0; i < dag.size() && p != 0.0; ++i) {
      p *= model.table(i)(model.row_index(i, a), a[static_cast<std::size_t>(i)]);
    }
    joint.cells()(static_cast<Eigen::Index>(flat)) = p;
    joint.advance(a);
  }
  if (!marginalize_latents) return joint;

  std::vector<std::string> observed;
  for (const auto& n : dag.nodes()) {
    if (!n.latent) observed.push_back(n.name);
  }
  return joint.marginal(observed);
}

CptModel shifted(const CptModel& model, const ParameterPath& path, double epsilon) {
  std::vector<Eigen::MatrixXd> tables = model.tables();
  for (const auto& entry : path) {
    auto& t = tables[static_cast<std::size_t>(model.dag().index_of(entry.node))];
    if (entry.row < 0 || entry.row >= t.rows() || entry.value < 0 || entry.value >= t.cols()) {
      throw std::out_of_range("parameter entry outside the table of " + entry.node);
    }
    const double old_value = t(entry.row, entry.value);
    const double new_value = old_value + epsilon;
    if (new_value < -kExactTolerance || new_value > 1.0 + kExactTolerance) {
      throw std::domain_error("perturbation moves " + entry.node + " outside [0, 1]");
    }
    const double rest_old = 1.0 - old_value;
    const double rest_new = 1.0 - new_value;
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      if (c == entry.value) continue;
      t(entry.row, c) = rest_old > 0.0 ? t(entry.row, c) * rest_new / rest_old
                                       : rest_new / static_cast<double>(t.cols() - 1);
    }
    t(entry.row, entry.value) = std::clamp(new_value, 0.0, 1.0);
  }
  return CptModel(model.dag(), std::move(tables));
}

}  // namespace faithlab
