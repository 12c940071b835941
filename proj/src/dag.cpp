#include "unfold_align/dag.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "unfold_align/error.hpp"

namespace ua {

LabeledDag::LabeledDag(std::vector<std::string> l, std::vector<Edge> e)
    : labels(std::move(l)), edges(std::move(e)) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

int LabeledDag::add_node(std::string label) {
  labels.push_back(std::move(label));
  return size() - 1;
}

void LabeledDag::add_edge(int from, int to) {
  Edge e{from, to};
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) edges.insert(it, e);
}

bool LabeledDag::has_edge(int from, int to) const {
  return std::binary_search(edges.begin(), edges.end(), Edge{from, to});
}

std::vector<std::vector<int>> LabeledDag::successors() const {
  std::vector<std::vector<int>> out(labels.size());
  for (auto [u, v] : edges) out[u].push_back(v);
  return out;
}

std::vector<std::vector<int>> LabeledDag::predecessors() const {
  std::vector<std::vector<int>> out(labels.size());
  for (auto [u, v] : edges) out[v].push_back(u);
  return out;
}

std::vector<int> topological_order(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : edges) {
    succ[u].push_back(v);
    ++indeg[v];
  }
  // Smallest ready node first keeps the order deterministic.
  std::vector<int> ready, order;
  for (int i = n - 1; i >= 0; --i)
    if (indeg[i] == 0) ready.push_back(i);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    int u = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (int v : succ[u]) {
      if (--indeg[v] == 0) {
        ready.push_back(v);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
    }
  }
  return order;
}

bool is_acyclic(int n, const std::vector<Edge>& edges) {
  return static_cast<int>(topological_order(n, edges).size()) == n;
}

Reachability transitive_closure(int n, const std::vector<Edge>& edges) {
  auto order = topological_order(n, edges);
  if (static_cast<int>(order.size()) != n)
    throw Error(Errc::InvalidTrace, "graph contains a cycle");
  std::vector<std::vector<int>> succ(n);
  for (auto [u, v] : edges) succ[u].push_back(v);
  Reachability reach(n, boost::dynamic_bitset<>(n));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int u = *it;
    for (int v : succ[u]) {
      reach[u].set(v);
      reach[u] |= reach[v];
    }
  }
  return reach;
}

std::vector<Edge> transitive_reduction(int n, const std::vector<Edge>& edges) {
  auto reach = transitive_closure(n, edges);
  std::vector<boost::dynamic_bitset<>> direct(n, boost::dynamic_bitset<>(n));
  for (auto [u, v] : edges) direct[u].set(v);
  std::vector<Edge> out;
  for (int u = 0; u < n; ++u) {
    // Nodes reachable through some other successor are implied.
    boost::dynamic_bitset<> implied(n);
    for (auto v = direct[u].find_first(); v != direct[u].npos;
         v = direct[u].find_next(v))
      implied |= reach[v];
    boost::dynamic_bitset<> keep = direct[u] - implied;
    for (auto v = keep.find_first(); v != keep.npos; v = keep.find_next(v))
      out.emplace_back(u, static_cast<int>(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabeledDag transitive_reduction(const LabeledDag& g) {
  return LabeledDag(g.labels, transitive_reduction(g.size(), g.edges));
}

std::vector<Edge> closure_edges(int n, const std::vector<Edge>& edges) {
  auto reach = transitive_closure(n, edges);
  std::vector<Edge> out;
  for (int u = 0; u < n; ++u)
    for (auto v = reach[u].find_first(); v != reach[u].npos; v = reach[u].find_next(v))
      out.emplace_back(u, static_cast<int>(v));
  return out;
}

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Colour refinement on a reduced DAG; colours are content hashes, so they
// are comparable across graphs.
std::vector<std::uint64_t> refine(const LabeledDag& g) {
  const int n = g.size();
  auto pred = g.predecessors();
  auto succ = g.successors();
  std::vector<std::uint64_t> colour(n);
  for (int v = 0; v < n; ++v) colour[v] = hash_string(g.labels[v]);
  auto classes = [](const std::vector<std::uint64_t>& c) {
    auto s = c;
    std::sort(s.begin(), s.end());
    return std::unique(s.begin(), s.end()) - s.begin();
  };
  auto count = classes(colour);
  for (int round = 0; round < n; ++round) {
    std::vector<std::uint64_t> next(n);
    for (int v = 0; v < n; ++v) {
      std::vector<std::uint64_t> in, out;
      for (int u : pred[v]) in.push_back(colour[u]);
      for (int u : succ[v]) out.push_back(colour[u]);
      std::sort(in.begin(), in.end());
      std::sort(out.begin(), out.end());
      std::uint64_t h = fnv(1469598103934665603ull, colour[v]);
      h = fnv(h, in.size());
      for (auto c : in) h = fnv(h, c);
      h = fnv(h, out.size() + 0x5bd1e995);
      for (auto c : out) h = fnv(h, c);
      next[v] = h;
    }
    colour = std::move(next);
    auto now = classes(colour);
    if (now == count) break;
    count = now;
  }
  return colour;
}

}  // namespace

std::vector<int> find_isomorphism(const LabeledDag& a_in, const LabeledDag& b_in) {
  if (a_in.size() != b_in.size()) return {};
  const LabeledDag a = transitive_reduction(a_in);
  const LabeledDag b = transitive_reduction(b_in);
  if (a.edges.size() != b.edges.size()) return {};
  const int n = a.size();
  auto ca = refine(a), cb = refine(b);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return {};
  }
  std::vector<boost::dynamic_bitset<>> adj_a(n, boost::dynamic_bitset<>(n)),
      adj_b(n, boost::dynamic_bitset<>(n));
  for (auto [u, v] : a.edges) adj_a[u].set(v);
  for (auto [u, v] : b.edges) adj_b[u].set(v);

  auto order = topological_order(n, a.edges);
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> extend = [&](int k) -> bool {
    if (k == n) return true;
    int u = order[k];
    for (int x = 0; x < n; ++x) {
      if (used[x] || cb[x] != ca[u]) continue;
      bool ok = true;
      for (int j = 0; j < k && ok; ++j) {
        int w = order[j];
        int y = map[w];
        ok = adj_a[u][w] == adj_b[x][y] && adj_a[w][u] == adj_b[y][x];
      }
      if (!ok) continue;
      map[u] = x;
      used[x] = true;
      if (extend(k + 1)) return true;
      used[x] = false;
      map[u] = -1;
    }
    return false;
  };
  if (!extend(0)) return {};
  if (n == 0) return {};
  return map;
}

bool isomorphic(const LabeledDag& a, const LabeledDag& b) {
  if (a.size() == 0 && b.size() == 0) return true;
  return !find_isomorphism(a, b).empty();
}

std::uint64_t structural_hash(const LabeledDag& g) {
  auto colour = refine(transitive_reduction(g));
  std::sort(colour.begin(), colour.end());
  std::uint64_t h = fnv(1469598103934665603ull, colour.size());
  for (auto c : colour) h = fnv(h, c);
  return h;
}

}  // namespace ua
