#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unfold_align/dag.hpp"
#include "unfold_align/petri_net.hpp"

namespace ua {

struct RawEvent {
  std::string case_id;
  std::string activity;
  std::int64_t start = 0;  // ms since epoch
  std::int64_t end = 0;
  std::string id;          // optional external event id
};

/// Partially ordered trace: a labeled DAG whose edge set is the transitive
/// reduction of the event order.
class PTrace {
 public:
  PTrace() = default;
  /// Throws InvalidTrace if `order` is cyclic or references unknown events.
  PTrace(std::string case_id, std::vector<std::string> labels,
         std::vector<Edge> order, std::vector<std::string> event_ids = {});

  const std::string& case_id() const { return case_id_; }
  int size() const { return graph_.size(); }
  const std::string& label(int e) const { return graph_.labels[e]; }
  const std::string& event_id(int e) const { return ids_[e]; }
  /// Transitive reduction of the order.
  const std::vector<Edge>& edges() const { return graph_.edges; }
  const LabeledDag& graph() const { return graph_; }
  bool precedes(int a, int b) const;
  std::vector<Edge> closure() const { return closure_edges(size(), graph_.edges); }

  std::vector<int> minimal_events() const;
  std::vector<int> maximal_events() const;

 private:
  std::string case_id_;
  LabeledDag graph_;
  std::vector<std::string> ids_;
  Reachability reach_;
};

/// a precedes b iff end(a) < start(b). Throws EmptyInput, MixedCaseIds or
/// NegativeDuration.
PTrace derive_ptrace(const std::vector<RawEvent>& events);

/// Trace net: one transition per event, one place per order edge, one
/// source place per minimal and one sink place per maximal event.
struct TraceNet {
  SystemNet net;
  std::vector<int> origin;  // transition index -> event index
};

TraceNet ptrace_to_trace_net(const PTrace& trace);

/// Events grouped by case id in first-appearance order.
std::vector<std::vector<RawEvent>> group_by_case(const std::vector<RawEvent>& events);

/// Variant grouping: traces with isomorphic labeled partial orders share a
/// variant. Returns for each variant the indices of its member traces,
/// ordered by first occurrence.
std::vector<std::vector<std::size_t>> group_variants(const std::vector<PTrace>& traces);

}  // namespace ua
