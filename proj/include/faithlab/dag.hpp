#pragma once

#include "faithlab/inference.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace faithlab {

struct Node {
  std::string name;
  bool latent = false;
  int cardinality = 2;

  friend bool operator==(const Node&, const Node&) = default;
};

using NodeMask = std::uint64_t;

inline constexpr NodeMask bit(int i) { return NodeMask{1} << i; }

/// Directed acyclic graph over at most 64 named nodes. Parent sets are
/// stored as bitmasks; edges that would close a cycle are rejected.
class Dag {
 public:
  static constexpr int kMaxNodes = 64;

  Dag() = default;
  explicit Dag(std::vector<Node> nodes);

  /// Builds a graph from parent masks; throws if the masks contain a cycle.
  static Dag from_parent_masks(std::vector<Node> nodes, std::vector<NodeMask> parents);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int index_of(std::string_view name) const;
  bool contains(std::string_view name) const;

  void add_edge(int from, int to);
  void add_edge(std::string_view from, std::string_view to) { add_edge(index_of(from), index_of(to)); }
  bool has_edge(int from, int to) const { return (parents_[static_cast<std::size_t>(to)] & bit(from)) != 0; }

  NodeMask parent_mask(int i) const { return parents_[static_cast<std::size_t>(i)]; }
  const std::vector<NodeMask>& parent_masks() const { return parents_; }
  std::vector<int> parents(int i) const;
  std::vector<int> children(int i) const;
  std::vector<std::pair<int, int>> edges() const;
  int edge_count() const;

  /// Ancestors of the nodes in `seed`, including the seed nodes themselves.
  NodeMask ancestors(NodeMask seed) const;
  NodeMask descendants(NodeMask seed) const;

  std::vector<int> topological_order() const;

  /// Stable textual form, e.g. "alpha->A;lambda->A;lambda->B".
  std::string encode() const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  std::vector<Node> nodes_;
  std::vector<NodeMask> parents_;
};

/// True when the parent masks admit a topological order.
bool is_acyclic(std::span<const NodeMask> parents);

/// d-separation of x and y given z, by reachability over active trails.
bool d_separated(const Dag& dag, int x, int y, NodeMask z);
bool d_separated(const Dag& dag, std::string_view x, std::string_view y,
                 std::span<const std::string> z);

/// Every statement among `observables` (conditioning sets drawn from the
/// observables) whose variables are d-separated in the graph.
std::vector<CIStatement> implied_independences(const Dag& dag, std::span<const std::string> observables);

nlohmann::json to_json(const Dag& dag);
Dag dag_from_json(const nlohmann::json& j);

}  // namespace faithlab
