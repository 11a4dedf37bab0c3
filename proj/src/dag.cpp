#include "faithlab/dag.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace faithlab {

Dag::Dag(std::vector<Node> nodes) : nodes_(std::move(nodes)), parents_(nodes_.size(), 0) {
  if (nodes_.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw std::invalid_argument("graphs are limited to 64 nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].cardinality < 1) throw std::invalid_argument("node " + nodes_[i].name + " has empty domain");
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes_[i].name == nodes_[j].name) throw std::invalid_argument("duplicate node name: " + nodes_[i].name);
    }
  }
}

Dag Dag::from_parent_masks(std::vector<Node> nodes, std::vector<NodeMask> parents) {
  Dag dag(std::move(nodes));
  if (parents.size() != dag.nodes_.size()) throw std::invalid_argument("parent mask count mismatch");
  const NodeMask valid = dag.size() == kMaxNodes ? ~NodeMask{0} : bit(dag.size()) - 1;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if ((parents[i] & ~valid) != 0 || (parents[i] & bit(static_cast<int>(i))) != 0) {
      throw std::invalid_argument("parent mask refers to an invalid node");
    }
  }
  if (!is_acyclic(parents)) throw std::invalid_argument("graph contains a directed cycle");
  dag.parents_ = std::move(parents);
  return dag;
}

int Dag::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown node: " + std::string(name));
}

bool Dag::contains(std::string_view name) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [&](const Node& n) { return n.name == name; });
}

void Dag::add_edge(int from, int to) {
  if (from < 0 || to < 0 || from >= size() || to >= size()) throw std::out_of_range("edge endpoint out of range");
  if (from == to) throw std::invalid_argument("self loops are not allowed");
  if ((descendants(bit(to)) & bit(from)) != 0) {
    throw std::invalid_argument("edge " + nodes_[static_cast<std::size_t>(from)].name + "->" +
                                nodes_[static_cast<std::size_t>(to)].name + " would create a cycle");
  }
  parents_[static_cast<std::size_t>(to)] |= bit(from);
}

std::vector<int> Dag::parents(int i) const {
  std::vector<int> out;
  for (NodeMask m = parents_[static_cast<std::size_t>(i)]; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::vector<int> Dag::children(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (has_edge(i, j)) out.push_back(j);
  }
  return out;
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int to = 0; to < size(); ++to) {
    for (int from : parents(to)) out.emplace_back(from, to);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Dag::edge_count() const {
  int n = 0;
  for (NodeMask m : parents_) n += std::popcount(m);
  return n;
}

NodeMask Dag::ancestors(NodeMask seed) const {
  NodeMask result = seed;
  NodeMask frontier = seed;
  while (frontier != 0) {
    NodeMask next = 0;
    for (NodeMask m = frontier; m != 0; m &= m - 1) next |= parents_[static_cast<std::size_t>(std::countr_zero(m))];
    frontier = next & ~result;
    result |= next;
  }
  return result;
}

NodeMask Dag::descendants(NodeMask seed) const {
  NodeMask result = seed;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int i = 0; i < size(); ++i) {
      if ((result & bit(i)) == 0 && (parents_[static_cast<std::size_t>(i)] & result) != 0) {
        result |= bit(i);
        grew = true;
      }
    }
  }
  return result;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> order;
  NodeMask placed = 0;
  while (static_cast<int>(order.size()) < size()) {
    for (int i = 0; i < size(); ++i) {
      if ((placed & bit(i)) == 0 && (parents_[static_cast<std::size_t>(i)] & ~placed) == 0) {
        order.push_back(i);
        placed |= bit(i);
      }
    }
  }
  return order;
}

std::string Dag::encode() const {
  std::string out;
  for (const auto& [from, to] : edges()) {
    if (!out.empty()) out += ';';
    out += nodes_[static_cast<std::size_t>(from)].name + "->" + nodes_[static_cast<std::size_t>(to)].name;
  }
  return out;
}

bool is_acyclic(std::span<const NodeMask> parents) {
  const int n = static_cast<int>(parents.size());
  NodeMask placed = 0;
  for (int round = 0; round < n; ++round) {
    bool progressed = false;
    for (int i = 0; i < n; ++i) {
      if ((placed & bit(i)) == 0 && (parents[static_cast<std::size_t>(i)] & ~placed) == 0) {
        placed |= bit(i);
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return std::popcount(placed) == n;
}

bool d_separated(const Dag& dag, int x, int y, NodeMask z) {
  if (x == y) throw std::invalid_argument("d-separation needs two distinct nodes");
  if ((z & (bit(x) | bit(y))) != 0) throw std::invalid_argument("tested node appears in the conditioning set");
  const NodeMask z_ancestors = dag.ancestors(z);

  // Visited states: bit i of up/down means node i was entered from a child / a parent.
  NodeMask visited_up = 0;
  NodeMask visited_down = 0;
  std::vector<std::pair<int, bool>> stack{{x, true}};
  while (!stack.empty()) {
    const auto [node, up] = stack.back();
    stack.pop_back();
    NodeMask& visited = up ? visited_up : visited_down;
    if ((visited & bit(node)) != 0) continue;
    visited |= bit(node);
    const bool observed = (z & bit(node)) != 0;
    if (!observed && node == y) return false;

    if (up) {
      if (!observed) {
        for (int p : dag.parents(node)) stack.emplace_back(p, true);
        for (int c : dag.children(node)) stack.emplace_back(c, false);
      }
    } else {
      if (!observed) {
        for (int c : dag.children(node)) stack.emplace_back(c, false);
      }
      if ((z_ancestors & bit(node)) != 0) {
        for (int p : dag.parents(node)) stack.emplace_back(p, true);
      }
    }
  }
  return true;
}

bool d_separated(const Dag& dag, std::string_view x, std::string_view y, std::span<const std::string> z) {
  NodeMask zmask = 0;
  for (const auto& name : z) zmask |= bit(dag.index_of(name));
  return d_separated(dag, dag.index_of(x), dag.index_of(y), zmask);
}

std::vector<CIStatement> implied_independences(const Dag& dag, std::span<const std::string> observables) {
  std::vector<int> idx;
  for (const auto& name : observables) idx.push_back(dag.index_of(name));
  const int m = static_cast<int>(idx.size());
  std::vector<CIStatement> out;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      std::vector<int> others;
      for (int k = 0; k < m; ++k) {
        if (k != i && k != j) others.push_back(k);
      }
      for (unsigned subset = 0; subset < (1u << others.size()); ++subset) {
        NodeMask z = 0;
        std::vector<std::string> names;
        for (std::size_t k = 0; k < others.size(); ++k) {
          if ((subset >> k) & 1u) {
            z |= bit(idx[static_cast<std::size_t>(others[k])]);
            names.push_back(observables[static_cast<std::size_t>(others[k])]);
          }
        }
        if (d_separated(dag, idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)], z)) {
          out.emplace_back(observables[static_cast<std::size_t>(i)], observables[static_cast<std::size_t>(j)],
                           std::move(names));
        }
      }
    }
  }
  return out;
}

nlohmann::json to_json(const Dag& dag) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : dag.nodes()) {
    nodes.push_back({{"name", n.name}, {"latent", n.latent}, {"cardinality", n.cardinality}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [from, to] : dag.edges()) edges.push_back({dag.node(from).name, dag.node(to).name});
  return {{"nodes", nodes}, {"edges", edges}};
}

Dag dag_from_json(const nlohmann::json& j) {
  std::vector<Node> nodes;
  for (const auto& n : j.at("nodes")) {
    nodes.push_back({n.at("name").get<std::string>(), n.value("latent", false), n.value("cardinality", 2)});
  }
  Dag dag(std::move(nodes));
  for (const auto& e : j.at("edges")) dag.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  return dag;
}

}  // namespace faithlab
