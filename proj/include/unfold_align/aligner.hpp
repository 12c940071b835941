#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unfold_align/cost.hpp"
#include "unfold_align/dag.hpp"
#include "unfold_align/product.hpp"
#include "unfold_align/unfolder.hpp"

namespace ua {

enum class NodeKind { Sync, Log, Model, Invisible };

const char* to_string(NodeKind k);

/// One alignment move. `label` is empty for invisible model moves.
struct MoveNode {
  NodeKind kind = NodeKind::Log;
  std::string label;
  int log_event = -1;                 // p-trace event, for sync and log moves
  std::optional<TransId> model;       // model transition, for model-side moves

  bool has_log_part() const { return kind == NodeKind::Sync || kind == NodeKind::Log; }
  bool has_model_part() const { return kind != NodeKind::Log; }
  /// ">>" for skip, "τ" for silent.
  std::string log_part() const;
  std::string model_part() const;
  /// "(log,model)", e.g. "(b,b)", "(d,>>)", "(>>,τ)".
  std::string display() const;
};

struct OrderEdge {
  int from = 0;
  int to = 0;
  bool log_dep = false;
  bool model_dep = false;

  friend bool operator==(const OrderEdge&, const OrderEdge&) = default;
};

/// Fused partial order of moves with origin-tagged dependencies. Edges are
/// sorted by (from, to).
struct AlignmentOrder {
  std::vector<MoveNode> nodes;
  std::vector<OrderEdge> edges;

  /// Plain graph with display labels.
  LabeledDag graph() const;
};

/// Node per non-target event; an edge per (producer, consumer) pair of
/// events linked by a condition, tagged by the side of the condition's place.
AlignmentOrder run_to_alignment_order(const AlignmentRun& run, const MoveNet& spn);

/// Log side and model side of an alignment order, linked by `phi`.
struct UAlignment {
  LabeledDag log_side;
  LabeledDag model_side;
  std::vector<int> log_event;       // log node -> p-trace event
  std::vector<bool> model_silent;   // model node -> is tau
  std::vector<int> log_origin;      // log node -> order node
  std::vector<int> model_origin;    // model node -> order node
  std::vector<std::pair<int, int>> phi;  // (log node, model node), sorted
  Cost cost;

  /// phi as a function: log node -> model node or -1.
  std::vector<int> phi_map() const;
};

UAlignment decompose(const AlignmentOrder& order, const CostModel& cm);

/// Reassembles the order from both sides, merging phi pairs into sync
/// nodes. Labels follow MoveNode::display().
LabeledDag fuse(const UAlignment& ua);

struct DepRef {
  int from = 0;  // node index on the side the dependency comes from
  int to = 0;
  std::string from_label;
  std::string to_label;

  friend bool operator==(const DepRef&, const DepRef&) = default;
};

struct Diagnostics {
  std::vector<int> missing_events;    // log nodes of log moves
  std::vector<int> undesired_events;  // model nodes of model moves
  std::vector<DepRef> missing_deps;   // reduced log edges absent from the model
  std::vector<DepRef> undesired_deps; // reduced model edges absent from the log

  bool conforming() const {
    return missing_events.empty() && undesired_events.empty() &&
           missing_deps.empty() && undesired_deps.empty();
  }
};

/// Compares the transitive reductions of both sides. A dependency between
/// two synchronous nodes matches if its phi image is a reduced edge on the
/// other side; any dependency touching a non-synchronous node is reported.
/// Silent model moves count as undesired events only with `include_tau`.
Diagnostics diagnose(const UAlignment& ua, bool include_tau = false);

/// Report document for one aligned variant. Diagnostics always include
/// silent moves, flagged with "tau": true.
nlohmann::json report_json(const std::string& case_id, const AlignmentOrder& order,
                           const UAlignment& ua);

}  // namespace ua
