#include "faithlab/causal.hpp"
#include "faithlab/corestats.hpp"

#include <algorithm>
#include <stdexcept>

namespace faithlab {

IndependencePattern quantum_pattern() {
  return {
      {CIStatement(kAlpha, kBeta), CIStatement(kFirst, kBeta, {kAlpha}), CIStatement(kSecond, kAlpha, {kBeta})},
      {CIStatement(kFirst, kSecond, {kAlpha, kBeta}), CIStatement(kFirst, kAlpha), CIStatement(kSecond, kBeta)},
  };
}

std::vector<Node> experiment_nodes() {
  return {{kAlpha, false, 2}, {kFirst, false, 2}, {kBeta, false, 2}, {kSecond, false, 2}};
}

EnumerationConstraints default_constraints() {
  return {{kAlpha, kBeta}, Node{kLatent, true, 2}};
}

bool is_bell_local(const Dag& dag) {
  for (const auto* name : {&kAlpha, &kFirst, &kBeta, &kSecond}) {
    if (!dag.contains(*name)) return false;
  }
  const int alpha = dag.index_of(kAlpha);
  const int a = dag.index_of(kFirst);
  const int beta = dag.index_of(kBeta);
  const int b = dag.index_of(kSecond);
  if (dag.parent_mask(alpha) != 0 || dag.parent_mask(beta) != 0) return false;
  // Directed influence from one wing to the other outcome, whether direct,
  // mediated by an observable, or passing through a latent.
  if ((dag.descendants(bit(alpha) | bit(a)) & bit(b)) != 0) return false;
  if ((dag.descendants(bit(beta) | bit(b)) & bit(a)) != 0) return false;
  return true;
}

std::string to_string(TriadVerdict v) {
  switch (v) {
    case TriadVerdict::explanatory_and_faithful: return "explanatory-and-faithful";
    case TriadVerdict::excluded_by_bell: return "excluded-by-bell";
    case TriadVerdict::fine_tuned: return "fine-tuned";
    case TriadVerdict::not_markov: return "not-markov";
  }
  return "unknown";
}

namespace {

bool separated(const Dag& dag, const CIStatement& s) { return d_separated(dag, s.x, s.y, s.z); }

void check_observable(const Dag& dag, const CIStatement& s) {
  for (const auto& name : [&] {
         std::vector<std::string> all{s.x, s.y};
         all.insert(all.end(), s.z.begin(), s.z.end());
         return all;
       }()) {
    if (dag.node(dag.index_of(name)).latent) {
      throw std::invalid_argument("pattern mentions latent node " + name);
    }
  }
}

}  // namespace

TriadEntry classify(const Dag& dag, const IndependencePattern& pattern, bool bell_violated) {
  TriadEntry e;
  e.dag = dag;
  // Equivalent to comparing against implied_independences(): the pattern is
  // partial, so only its own statements can contradict the graph.
  e.markov_ok = std::none_of(pattern.dependences.begin(), pattern.dependences.end(), [&](const CIStatement& s) {
    check_observable(dag, s);
    return separated(dag, s);
  });
  e.faithful_ok = std::all_of(pattern.independences.begin(), pattern.independences.end(), [&](const CIStatement& s) {
    check_observable(dag, s);
    return separated(dag, s);
  });
  e.bell_excluded = bell_violated && is_bell_local(dag);
  if (!e.markov_ok) {
    e.verdict = TriadVerdict::not_markov;
  } else if (!e.faithful_ok) {
    e.verdict = TriadVerdict::fine_tuned;
  } else {
    e.verdict = e.bell_excluded ? TriadVerdict::excluded_by_bell : TriadVerdict::explanatory_and_faithful;
  }
  return e;
}

std::vector<Dag> enumerate_dags(std::span<const Node> nodes, const std::function<bool(int, int)>& edge_allowed) {
  const int n = static_cast<int>(nodes.size());
  if (n > kMaxEnumerationNodes) throw std::invalid_argument("enumeration is limited to 6 nodes");
  const auto allowed = [&](int from, int to) { return !edge_allowed || edge_allowed(from, to); };

  struct Pair {
    int i, j;
    std::vector<int> states;  // 0: no edge, 1: i->j, 2: j->i
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Pair p{i, j, {0}};
      if (allowed(i, j)) p.states.push_back(1);
      if (allowed(j, i)) p.states.push_back(2);
      pairs.push_back(std::move(p));
    }
  }

  std::vector<Dag> out;
  const std::vector<Node> node_list(nodes.begin(), nodes.end());
  std::vector<std::size_t> pos(pairs.size(), 0);
  std::vector<NodeMask> parents(static_cast<std::size_t>(n));
  while (true) {
    std::fill(parents.begin(), parents.end(), 0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& p = pairs[k];
      const int state = p.states[pos[k]];
      if (state == 1) parents[static_cast<std::size_t>(p.j)] |= bit(p.i);
      if (state == 2) parents[static_cast<std::size_t>(p.i)] |= bit(p.j);
    }
    if (is_acyclic(parents)) out.push_back(Dag::from_parent_masks(node_list, parents));

    std::size_t k = pairs.size();
    while (k > 0) {
      --k;
      if (++pos[k] < pairs[k].states.size()) break;
      pos[k] = 0;
      if (k == 0) return out;
    }
    if (pairs.empty()) return out;
  }
}

TriadReport enumerate_and_classify(std::span<const Node> variables, const EnumerationConstraints& constraints,
                                   const IndependencePattern& pattern, bool bell_violated) {
  const std::size_t total_nodes = variables.size() + (constraints.optional_latent ? 1 : 0);
  if (total_nodes > static_cast<std::size_t>(kMaxEnumerationNodes)) {
    throw std::invalid_argument("node budget exceeded: at most 6 nodes including the latent");
  }

  std::vector<std::vector<Node>> node_sets{std::vector<Node>(variables.begin(), variables.end())};
  if (constraints.optional_latent) {
    node_sets.push_back(node_sets.front());
    node_sets.back().push_back(*constraints.optional_latent);
  }

  TriadReport report;
  for (std::size_t set = 0; set < node_sets.size(); ++set) {
    const auto& nodes = node_sets[set];
    const auto is_exogenous = [&](int i) {
      const auto& ex = constraints.exogenous;
      return std::find(ex.begin(), ex.end(), nodes[static_cast<std::size_t>(i)].name) != ex.end();
    };
    const bool with_latent = set == 1;
    const int latent = static_cast<int>(nodes.size()) - 1;
    for (Dag& dag : enumerate_dags(nodes, [&](int, int to) { return !is_exogenous(to); })) {
      if (with_latent && dag.parent_mask(latent) == 0 && dag.children(latent).empty()) continue;
      report.entries.push_back(classify(dag, pattern, bell_violated));
    }
  }

  for (const auto& e : report.entries) {
    switch (e.verdict) {
      case TriadVerdict::explanatory_and_faithful: ++report.explanatory_and_faithful; break;
      case TriadVerdict::excluded_by_bell: ++report.excluded_by_bell; break;
      case TriadVerdict::fine_tuned: ++report.fine_tuned; break;
      case TriadVerdict::not_markov: ++report.not_markov; break;
    }
    if (e.markov_ok && !e.faithful_ok && !e.bell_excluded) ++report.markov_unfaithful_unexcluded;
  }
  return report;
}

nlohmann::json to_json(const TriadEntry& e) {
  return {{"dag", to_json(e.dag)},
          {"edges", e.dag.encode()},
          {"markov_ok", e.markov_ok},
          {"faithful_ok", e.faithful_ok},
          {"bell_excluded", e.bell_excluded},
          {"verdict", to_string(e.verdict)}};
}

nlohmann::json to_json(const TriadReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"summary",
           {{"total", r.entries.size()},
            {"explanatory_and_faithful", r.explanatory_and_faithful},
            {"excluded_by_bell", r.excluded_by_bell},
            {"fine_tuned", r.fine_tuned},
            {"not_markov", r.not_markov},
            {"markov_unfaithful_unexcluded", r.markov_unfaithful_unexcluded}}},
          {"entries", entries}};
}

}  // namespace faithlab
