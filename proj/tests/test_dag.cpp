#include <doctest.h>

#include "faithlab/causal.hpp"
#include "faithlab/cpt.hpp"
#include "faithlab/dag.hpp"
#include "oracles.hpp"

#include <bit>
#include <functional>
#include <random>

using namespace faithlab;
using faithlab::oracle::labeled_dag_counts;
using faithlab::oracle::random_dag;

namespace {

Dag chain() {
  Dag d({{"x"}, {"m"}, {"y"}});
  d.add_edge("x", "m");
  d.add_edge("m", "y");
  return d;
}

Dag collider() {
  Dag d({{"x"}, {"c"}, {"y"}});
  d.add_edge("x", "c");
  d.add_edge("y", "c");
  return d;
}

// Path-enumeration oracle: separated iff no simple trail between x and y is
// active. A collider is active when it or a descendant is conditioned on;
// any other interior node is active when it is not conditioned on.
bool separated_by_paths(const Dag& d, int x, int y, NodeMask z) {
  const int n = d.size();
  std::vector<int> path{x};
  NodeMask on_path = bit(x);
  std::function<bool(int)> active_path_from = [&](int u) -> bool {
    for (int v = 0; v < n; ++v) {
      if ((on_path & bit(v)) != 0 || !(d.has_edge(u, v) || d.has_edge(v, u))) continue;
      path.push_back(v);
      on_path |= bit(v);
      bool found = false;
      if (v == y) {
        found = true;
        for (std::size_t k = 1; k + 1 < path.size(); ++k) {
          const int prev = path[k - 1], mid = path[k], next = path[k + 1];
          const bool is_collider = d.has_edge(prev, mid) && d.has_edge(next, mid);
          if (is_collider) {
            found = found && (d.descendants(bit(mid)) & z) != 0;
          } else {
            found = found && (z & bit(mid)) == 0;
          }
        }
      } else {
        found = active_path_from(v);
      }
      path.pop_back();
      on_path &= ~bit(v);
      if (found) return true;
    }
    return false;
  };
  return !active_path_from(x);
}

}  // namespace

TEST_CASE("d-separation examples") {
  const Dag empty({{"x"}, {"y"}, {"w"}});
  CHECK(d_separated(empty, "x", "y", {}));

  const Dag c = chain();
  const std::vector<std::string> m{"m"};
  CHECK(d_separated(c, "x", "y", m));
  CHECK_FALSE(d_separated(c, "x", "y", {}));

  const Dag v = collider();
  const std::vector<std::string> cz{"c"};
  CHECK_FALSE(d_separated(v, "x", "y", cz));
  CHECK(d_separated(v, "x", "y", {}));

  Dag with_child = collider();
  with_child = Dag({{"x"}, {"c"}, {"y"}, {"d"}});
  with_child.add_edge("x", "c");
  with_child.add_edge("y", "c");
  with_child.add_edge("c", "d");
  const std::vector<std::string> dz{"d"};
  CHECK_FALSE(d_separated(with_child, "x", "y", dz));
}

TEST_CASE("d-separation errors") {
  const Dag c = chain();
  CHECK_THROWS_AS(d_separated(c, "x", "q", {}), std::invalid_argument);
  const std::vector<std::string> has_x{"x"};
  CHECK_THROWS_AS(d_separated(c, "x", "y", has_x), std::invalid_argument);
  CHECK_THROWS_AS(d_separated(c, "x", "x", {}), std::invalid_argument);
}

TEST_CASE("graph construction rejects cycles and duplicates") {
  Dag c = chain();
  CHECK_THROWS_AS(c.add_edge("y", "x"), std::invalid_argument);
  CHECK_THROWS_AS(c.add_edge("x", "x"), std::invalid_argument);
  CHECK_THROWS_AS(Dag({{"x"}, {"x"}}), std::invalid_argument);
  CHECK_THROWS_AS(Dag::from_parent_masks({{"a"}, {"b"}}, {bit(1), bit(0)}), std::invalid_argument);
  CHECK(c.topological_order() == std::vector<int>{0, 1, 2});
  CHECK(c.encode() == "x->m;m->y");
}

TEST_CASE("property: reachability d-separation matches path enumeration") {
  std::mt19937_64 g(5);
  int queries = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 5;
    const Dag d = random_dag(g, n, 0.45);
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) {
        const NodeMask rest = (bit(n) - 1) & ~(bit(x) | bit(y));
        for (NodeMask z = rest;; z = (z - 1) & rest) {
          CHECK(d_separated(d, x, y, z) == separated_by_paths(d, x, y, z));
          ++queries;
          if (z == 0) break;
        }
      }
    }
  }
  CHECK(queries > 5000);
}

TEST_CASE("implied independences") {
  Dag cc({{kAlpha}, {kFirst}, {kBeta}, {kSecond}, {kLatent, true}});
  cc.add_edge(kAlpha, kFirst);
  cc.add_edge(kLatent, kFirst);
  cc.add_edge(kLatent, kSecond);
  cc.add_edge(kBeta, kSecond);
  const std::vector<std::string> obs{kAlpha, kFirst, kBeta, kSecond};
  const auto implied = implied_independences(cc, obs);
  const auto has = [&](const CIStatement& s) { return std::find(implied.begin(), implied.end(), s) != implied.end(); };
  CHECK(has(CIStatement(kFirst, kBeta, {kAlpha})));
  CHECK(has(CIStatement(kSecond, kAlpha, {kBeta})));
  CHECK(has(CIStatement(kAlpha, kBeta)));
  CHECK_FALSE(has(CIStatement(kFirst, kSecond, {kAlpha, kBeta})));

  Dag complete({{"a"}, {"b"}, {"c"}});
  complete.add_edge("a", "b");
  complete.add_edge("a", "c");
  complete.add_edge("b", "c");
  const std::vector<std::string> abc{"a", "b", "c"};
  CHECK(implied_independences(complete, abc).empty());

  const Dag edgeless({{"a"}, {"b"}, {"c"}, {"d"}});
  const std::vector<std::string> abcd{"a", "b", "c", "d"};
  CHECK(implied_independences(edgeless, abcd).size() == 6 * 4);
}

TEST_CASE("property: adding an edge never adds an implied independence") {
  std::mt19937_64 g(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 3;
    Dag d = random_dag(g, n, 0.3);
    std::vector<std::string> names;
    for (const auto& node : d.nodes()) names.push_back(node.name);
    const auto before = implied_independences(d, names);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int u = pick(g), v = pick(g);
    if (u == v || d.has_edge(u, v) || d.has_edge(v, u)) continue;
    try {
      d.add_edge(u, v);
    } catch (const std::invalid_argument&) {
      d.add_edge(v, u);
    }
    for (const auto& s : implied_independences(d, names)) {
      CHECK(std::find(before.begin(), before.end(), s) != before.end());
    }
  }
}

TEST_CASE("labeled DAG enumeration matches the counting recurrence") {
  const auto counts = labeled_dag_counts(5);
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 3);
  CHECK(counts[3] == 25);
  CHECK(counts[4] == 543);
  for (int n = 1; n <= 5; ++n) {
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({"v" + std::to_string(i)});
    CHECK(enumerate_dags(nodes).size() == static_cast<std::size_t>(counts[static_cast<std::size_t>(n)]));
    const IndependencePattern none;
    CHECK(enumerate_and_classify(nodes, {}, none, false).entries.size() ==
          static_cast<std::size_t>(counts[static_cast<std::size_t>(n)]));
  }
  std::vector<Node> seven;
  for (int i = 0; i < 7; ++i) seven.push_back({"v" + std::to_string(i)});
  CHECK_THROWS_AS(enumerate_dags(seven), std::invalid_argument);
}

TEST_CASE("DAG JSON round trip") {
  Dag d({{"a", false, 3}, {"l", true, 4}, {"b"}});
  d.add_edge("l", "a");
  d.add_edge("l", "b");
  CHECK(dag_from_json(to_json(d)) == d);
}

TEST_CASE("random-CPT semantic oracle for d-separation") {
  std::mt19937_64 g(2718);
  oracle::SemanticTally tally;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    const Dag base = oracle::random_dag(g, n, 0.5);
    std::vector<Node> nodes = base.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].cardinality = 2 + static_cast<int>(i % 2);
    oracle::semantic_check(Dag::from_parent_masks(nodes, base.parent_masks()), g, tally);
  }
  CHECK(tally.separated_violations == 0);
  REQUIRE(tally.connected > 0);
  CHECK(static_cast<double>(tally.connected_dependent) >= 0.99 * tally.connected);
}
