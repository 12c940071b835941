#include "unfold_align/ptrace.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "unfold_align/error.hpp"

namespace ua {

PTrace::PTrace(std::string case_id, std::vector<std::string> labels,
               std::vector<Edge> order, std::vector<std::string> event_ids)
    : case_id_(std::move(case_id)) {
  const int n = static_cast<int>(labels.size());
  for (auto [u, v] : order) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(Errc::InvalidTrace, "order references an unknown event");
    if (u == v) throw Error(Errc::InvalidTrace, "order is not irreflexive");
  }
  if (!is_acyclic(n, order)) throw Error(Errc::InvalidTrace, "order is cyclic");
  graph_ = LabeledDag(std::move(labels), transitive_reduction(n, order));
  if (event_ids.empty()) {
    for (int i = 0; i < n; ++i) event_ids.push_back("e" + std::to_string(i));
  }
  if (static_cast<int>(event_ids.size()) != n)
    throw Error(Errc::InvalidTrace, "event id count mismatch");
  ids_ = std::move(event_ids);
  reach_ = transitive_closure(n, graph_.edges);
}

bool PTrace::precedes(int a, int b) const { return reach_[a][b]; }

std::vector<int> PTrace::minimal_events() const {
  std::vector<bool> has_pred(size(), false);
  for (auto [u, v] : graph_.edges) has_pred[v] = true;
  std::vector<int> out;
  for (int e = 0; e < size(); ++e)
    if (!has_pred[e]) out.push_back(e);
  return out;
}

std::vector<int> PTrace::maximal_events() const {
  std::vector<bool> has_succ(size(), false);
  for (auto [u, v] : graph_.edges) has_succ[u] = true;
  std::vector<int> out;
  for (int e = 0; e < size(); ++e)
    if (!has_succ[e]) out.push_back(e);
  return out;
}

PTrace derive_ptrace(const std::vector<RawEvent>& events) {
  if (events.empty()) throw Error(Errc::EmptyInput, "no events");
  const std::string& case_id = events.front().case_id;
  std::vector<std::string> labels, ids;
  std::vector<Edge> order;
  const int n = static_cast<int>(events.size());
  for (int i = 0; i < n; ++i) {
    const auto& e = events[i];
    if (e.case_id != case_id)
      throw Error(Errc::MixedCaseIds,
                  "events of cases '" + case_id + "' and '" + e.case_id + "' mixed");
    if (e.end < e.start)
      throw Error(Errc::NegativeDuration,
                  "event '" + e.activity + "' ends before it starts");
    labels.push_back(e.activity);
    ids.push_back(e.id.empty() ? "e" + std::to_string(i) : e.id);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (events[a].end < events[b].start) order.emplace_back(a, b);
  return PTrace(case_id, std::move(labels), std::move(order), std::move(ids));
}

TraceNet ptrace_to_trace_net(const PTrace& trace) {
  NetBuilder b;
  TraceNet out;
  std::vector<TransId> t(trace.size());
  for (int e = 0; e < trace.size(); ++e) {
    t[e] = b.add_transition("t" + std::to_string(e), trace.label(e));
    out.origin.push_back(e);
  }
  std::vector<PlaceId> init, fin;
  for (int e : trace.minimal_events()) {
    PlaceId p = b.add_place("p(>," + std::to_string(e) + ")");
    b.add_arc(p, t[e]);
    init.push_back(p);
  }
  for (auto [u, v] : trace.edges()) {
    PlaceId p = b.add_place("p(" + std::to_string(u) + "," + std::to_string(v) + ")");
    b.add_arc(t[u], p);
    b.add_arc(p, t[v]);
  }
  for (int e : trace.maximal_events()) {
    PlaceId p = b.add_place("p(" + std::to_string(e) + ",#)");
    b.add_arc(t[e], p);
    fin.push_back(p);
  }
  b.set_initial(std::move(init));
  b.set_final(std::move(fin));
  out.net = b.build();
  return out;
}

std::vector<std::vector<RawEvent>> group_by_case(const std::vector<RawEvent>& events) {
  std::vector<std::vector<RawEvent>> out;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& e : events) {
    auto [it, fresh] = slot.emplace(e.case_id, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(e);
  }
  return out;
}

std::vector<std::vector<std::size_t>> group_variants(const std::vector<PTrace>& traces) {
  std::vector<std::vector<std::size_t>> variants;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;  // -> variant ids
  for (std::size_t i = 0; i < traces.size(); ++i) {
    auto h = structural_hash(traces[i].graph());
    auto& bucket = by_hash[h];
    bool placed = false;
    for (std::size_t v : bucket) {
      if (isomorphic(traces[variants[v].front()].graph(), traces[i].graph())) {
        variants[v].push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      bucket.push_back(variants.size());
      variants.push_back({i});
    }
  }
  return variants;
}

}  // namespace ua
