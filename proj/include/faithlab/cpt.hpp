#pragma once

#include "faithlab/dag.hpp"
#include "faithlab/table.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace faithlab {

/// Largest joint the exact engine will materialize.
inline constexpr std::size_t kMaxJointCells = 1'000'000;

/// A Dag with one conditional probability table per node.
///
/// The table of node i is a matrix with one row per parent assignment and
/// one column per value of i. Rows enumerate parents in ascending node
/// index, last parent fastest.
class CptModel {
 public:
  CptModel(Dag dag, std::vector<Eigen::MatrixXd> tables);

  const Dag& dag() const { return dag_; }
  const Eigen::MatrixXd& table(int node) const { return tables_[static_cast<std::size_t>(node)]; }
  const Eigen::MatrixXd& table(std::string_view node) const { return table(dag_.index_of(node)); }
  const std::vector<Eigen::MatrixXd>& tables() const { return tables_; }

  /// Row of `node`'s table for a full assignment of the graph.
  Eigen::Index row_index(int node, std::span<const int> assignment) const;

  /// Row for an explicit assignment of the node's parents (ascending index).
  Eigen::Index parent_row(int node, std::span<const int> parent_values) const;

 private:
  Dag dag_;
  std::vector<Eigen::MatrixXd> tables_;
};

/// Number of cells in the full joint of a model's variables.
std::size_t joint_cell_count(const Dag& dag);

/// Product of the CPT entries over every full assignment. With
/// `marginalize_latents`, latent nodes are summed out afterwards.
JointTable joint_from_cpt(const CptModel& model, bool marginalize_latents = false);

/// One entry of one table: P(node = value | parent row `row`).
struct CptEntry {
  std::string node;
  Eigen::Index row = 0;
  Eigen::Index value = 1;
};

/// A parameter that may span several table entries; all move together.
using ParameterPath = std::vector<CptEntry>;

/// Adds `epsilon` to each entry on the path and rescales the remaining
/// entries of its row so the row still sums to one. Throws
/// std::domain_error if any entry leaves [0, 1].
CptModel shifted(const CptModel& model, const ParameterPath& path, double epsilon);

}  // namespace faithlab
