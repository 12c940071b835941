#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unfold_align/cost.hpp"
#include "unfold_align/petri_net.hpp"
#include "unfold_align/ptrace.hpp"

namespace ua {

enum class MoveKind { Log, Model, Sync, Target };

/// Annotation of a product transition. `log` / `model` index into the trace
/// net and model net respectively; the absent component is the skip symbol.
struct Move {
  MoveKind kind = MoveKind::Log;
  std::optional<TransId> log;
  std::optional<TransId> model;
  std::optional<std::string> label;  // nullopt: tau (or the target transition)

  bool is_invisible() const { return kind == MoveKind::Model && !label; }
};

enum class Side { Log, Model, Target };

/// Synchronous product of a trace net and a model net. Place and transition
/// annotations are parallel to the underlying net's index spaces.
struct MoveNet {
  SystemNet net;
  std::vector<Move> moves;        // by transition
  std::vector<Side> place_side;   // by place
  std::vector<int> log_origin;    // trace-net transition -> p-trace event
  std::optional<TransId> target;  // t*, once extended
  std::optional<PlaceId> target_place;

  bool extended() const { return target.has_value(); }
  const Move& move(TransId t) const { return moves.at(idx(t)); }
  Side side(PlaceId p) const { return place_side.at(idx(p)); }
};

struct CostModel {
  Cost log_cost = Cost::units(1);
  Cost model_cost = Cost::units(1);
  Cost tau_cost = Cost::from_ticks(1);  // 0.0001

  /// Throws InvalidCostModel unless 0 < tau < min(log, model).
  void check() const;
};

MoveNet synchronous_product(const TraceNet& trace, const SystemNet& model);

/// Adds t* consuming the final marking and p* as its sole output; the final
/// marking becomes {p*}. Throws AlreadyExtended.
MoveNet extend_with_target(const MoveNet& spn);

Cost move_cost(const CostModel& cm, const Move& move);

/// Per-transition costs of a move net.
std::vector<Cost> transition_costs(const MoveNet& spn, const CostModel& cm);

/// Graphviz rendering: orange log side, blue model side, green sync, red
/// target.
std::string to_dot(const MoveNet& spn);

}  // namespace ua
