#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "unfold_align/aligner.hpp"
#include "unfold_align/cost.hpp"
#include "unfold_align/product.hpp"

namespace ua {

enum class SearchStatus { Found, NoPath, BudgetExceeded };

const char* to_string(SearchStatus s);

struct AStarOptions {
  /// Without the heuristic the search is Dijkstra on the reachability graph.
  bool use_heuristic = true;
  std::size_t max_states = 5'000'000;
  std::chrono::milliseconds timeout{3000};
};

struct AStarResult {
  SearchStatus status = SearchStatus::NoPath;
  std::vector<TransId> sequence;  // ends with the target transition
  Cost cost = Cost::infinity();
  std::size_t expanded = 0;   // markings closed
  std::size_t generated = 0;  // queue insertions
  std::size_t queue_peak = 0;
};

/// Cheapest firing sequence from the initial marking to {p*} in the
/// reachability graph of an extended product net. Ties on f prefer lower h,
/// then insertion order. Throws NotExtended.
AStarResult astar_alignment(const MoveNet& spn, const CostModel& cm,
                            const AStarOptions& opts = {});

/// Replays a firing sequence, creating a fresh condition for every token
/// produced, and returns the resulting causal net as an alignment run.
/// Throws InvalidSequence if a transition is not enabled or the sequence
/// does not end in {p*}.
AlignmentRun replay_sequence(const MoveNet& spn, const CostModel& cm,
                             const std::vector<TransId>& seq);

/// replay_sequence followed by run_to_alignment_order.
AlignmentOrder replay_to_partial_order(const MoveNet& spn, const CostModel& cm,
                                       const std::vector<TransId>& seq);

}  // namespace ua
