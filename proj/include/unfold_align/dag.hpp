#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace ua {

using Edge = std::pair<int, int>;

/// Node-labeled directed graph over nodes 0..n-1. Used for p-traces,
/// alignment orders and both sides of a u-alignment.
struct LabeledDag {
  std::vector<std::string> labels;
  std::vector<Edge> edges;  // sorted, unique

  LabeledDag() = default;
  LabeledDag(std::vector<std::string> l, std::vector<Edge> e);

  int size() const { return static_cast<int>(labels.size()); }
  int add_node(std::string label);
  void add_edge(int from, int to);
  bool has_edge(int from, int to) const;

  std::vector<std::vector<int>> successors() const;
  std::vector<std::vector<int>> predecessors() const;
};

using Reachability = std::vector<boost::dynamic_bitset<>>;

/// Topological order; empty optional-like result (size < n) signals a cycle.
std::vector<int> topological_order(int n, const std::vector<Edge>& edges);
bool is_acyclic(int n, const std::vector<Edge>& edges);

/// reach[u][v] iff there is a non-empty path u -> v. Throws on cycles.
Reachability transitive_closure(int n, const std::vector<Edge>& edges);

/// The unique minimal edge set with the same reachability. Input must be
/// acyclic.
std::vector<Edge> transitive_reduction(int n, const std::vector<Edge>& edges);
LabeledDag transitive_reduction(const LabeledDag& g);

/// All pairs (u, v) with u reaching v.
std::vector<Edge> closure_edges(int n, const std::vector<Edge>& edges);

/// Labeled isomorphism of the partial orders induced by two DAGs (their
/// transitive reductions are compared). Returns a mapping a-node -> b-node.
std::vector<int> find_isomorphism(const LabeledDag& a, const LabeledDag& b);
bool isomorphic(const LabeledDag& a, const LabeledDag& b);

/// Isomorphism-invariant hash of the induced partial order (colour
/// refinement over the transitive reduction).
std::uint64_t structural_hash(const LabeledDag& g);

}  // namespace ua
