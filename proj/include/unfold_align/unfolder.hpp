#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "unfold_align/cost.hpp"
#include "unfold_align/heuristic.hpp"
#include "unfold_align/petri_net.hpp"
#include "unfold_align/product.hpp"

namespace ua {

using EventId = std::uint32_t;
using CondId = std::uint32_t;
inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Condition {
  PlaceId place{};
  EventId producer = kNone;
  std::vector<EventId> consumers;
  std::vector<CondId> co;  // sorted; concurrent conditions
};

/// An event of the prefix. Events are created when they become possible
/// extensions; the id doubles as the insertion index. Postset conditions are
/// attached once the event is popped and not discarded.
struct Event {
  TransId transition{};
  std::vector<CondId> preset;
  std::vector<CondId> postset;
  std::vector<EventId> past;  // local configuration [e], ascending, includes e
  Cost cost;                  // s([e])
  Cost estimate;              // heuristic value of Mark([e]); zero for the cost order
  Marking mark;               // Mark([e])
  bool popped = false;
  bool extended = false;
  bool cutoff = false;
  bool discarded = false;  // popped with a cut-off in its past
};

/// Finite configuration with cached score; `events` is sorted by insertion.
struct Configuration {
  std::vector<EventId> events;
  Cost cost;

  std::size_t size() const { return events.size(); }
  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.events == b.events;
  }
};

struct Candidate {
  TransId transition{};
  std::vector<CondId> preset;  // sorted

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

class Unfolder;

/// Branching process under construction.
class Prefix {
 public:
  Prefix(const SystemNet& net, std::vector<Cost> costs);

  const SystemNet& net() const { return *net_; }
  std::span<const Condition> conditions() const { return conditions_; }
  std::span<const Event> events() const { return events_; }
  const Condition& condition(CondId c) const { return conditions_.at(c); }
  const Event& event(EventId e) const { return events_.at(e); }
  std::span<const CondId> initial_conditions() const { return initial_; }
  Cost transition_cost(TransId t) const { return costs_.at(idx(t)); }

  bool co(CondId a, CondId b) const;

  /// [e] with its score.
  Configuration local_configuration(EventId e) const;
  /// Checks causal closure and conflict freedom; events must exist.
  bool is_configuration(std::span<const EventId> events) const;
  /// Builds a configuration from an arbitrary event set. Throws
  /// InvalidConfiguration.
  Configuration make_configuration(std::vector<EventId> events) const;
  /// h-image of the cut of `c`. Throws InvalidConfiguration.
  Marking mark_of(const Configuration& c) const;

  /// All (t, X) with X a co-set mapped onto the preset of t that meets
  /// `new_conditions` and is not an existing event.
  std::vector<Candidate> possible_extensions(std::span<const CondId> new_conditions) const;

 private:
  friend class Unfolder;

  CondId add_condition(PlaceId p, EventId producer);
  EventId add_event(const Candidate& c);
  /// Attaches postset conditions to `e` and updates the co relation.
  std::vector<CondId> extend(EventId e);

  const SystemNet* net_;
  std::vector<Cost> costs_;
  std::vector<Condition> conditions_;
  std::vector<Event> events_;
  std::vector<CondId> initial_;
};

/// Lexicographic comparison on (score, size, insertion-ordered event list).
/// Equal only for identical configurations.
std::strong_ordering order_cost(const Configuration& a, const Configuration& b);
inline bool cost_less(const Configuration& a, const Configuration& b) {
  return order_cost(a, b) < 0;
}

/// f = score + estimate compared first; ties fall back to order_cost.
std::strong_ordering order_heuristic(const Configuration& a, Cost est_a,
                                     const Configuration& b, Cost est_b);

enum class SearchOrder { Cost, Heuristic };

struct UnfoldOptions {
  SearchOrder order = SearchOrder::Cost;
  bool stop_at_first = true;
  /// With stop_at_first = false: stop once the popped key exceeds the
  /// lowest target cost.
  bool early_exit = true;
  /// Turning cut-offs off grows a prefix of the full unfolding (bounded by
  /// max_events); used to test the order on long configurations.
  bool cutoffs = true;
  std::size_t max_events = 2'000'000;
  std::chrono::milliseconds timeout{3000};
};

enum class UnfoldStatus {
  Found,
  ModelNotEasySound,  // queue drained without a target event
  BudgetExceeded,
  Complete,  // no target transition: the finite prefix is complete
};

const char* to_string(UnfoldStatus s);

struct UnfoldStats {
  std::size_t events = 0;  // events created (possible extensions)
  std::size_t conditions = 0;
  std::size_t cutoffs = 0;
  std::size_t popped = 0;
  std::size_t discarded = 0;
  std::size_t queue_peak = 0;
  std::size_t heuristic_solves = 0;
};

/// Complete distributed run ending in the target event, as a standalone
/// causal net with its homomorphism into the product net.
struct AlignmentRun {
  struct Cond {
    PlaceId place{};
  };
  struct Ev {
    TransId transition{};
    std::vector<int> preset;
    std::vector<int> postset;
  };
  std::vector<Cond> conditions;
  std::vector<Ev> events;  // in insertion order, target last
  int target_event = -1;
  Cost cost;
};

struct UnfoldResult {
  UnfoldStatus status = UnfoldStatus::ModelNotEasySound;
  std::vector<AlignmentRun> runs;
  Cost lowest_cost = Cost::infinity();
  UnfoldStats stats;
};

/// ERV-style unfolding driven by a priority queue of possible extensions.
/// With a target transition the search stops at (or enumerates) the
/// cheapest target events; without one it builds the complete finite prefix.
class Unfolder {
 public:
  Unfolder(const SystemNet& net, std::vector<Cost> costs,
           std::optional<TransId> target, UnfoldOptions opts);

  UnfoldResult run();

  const Prefix& prefix() const { return prefix_; }
  /// Called with every popped event, before it is processed.
  void on_pop(std::function<void(const Prefix&, EventId)> cb) { on_pop_ = std::move(cb); }

  /// Key comparison between two events under the active order.
  bool less(EventId a, EventId b) const;
  Cost priority(EventId e) const;

  /// Whether Mark([e]) is already represented in the marking table by a
  /// smaller configuration.
  bool is_cutoff(EventId e) const;

 private:
  void create_events(std::span<const CondId> new_conditions);
  AlignmentRun extract_run(EventId target) const;

  Prefix prefix_;
  std::optional<TransId> target_;
  UnfoldOptions opts_;
  std::unique_ptr<MarkingEquation> heuristic_;
  // Marking -> representative event; kNone stands for the empty
  // configuration of the initial marking.
  std::unordered_map<Marking, EventId, MarkingHash> imarks_;
  std::vector<EventId> heap_;
  UnfoldStats stats_;
  std::function<void(const Prefix&, EventId)> on_pop_;
};

/// Unfolds an extended product net (throws NotExtended otherwise).
UnfoldResult unfold(const MoveNet& spn, const CostModel& cm, const UnfoldOptions& opts);

/// Causal-net axioms of a run plus the single-sink / target conditions.
std::vector<std::string> check_alignment_run(const AlignmentRun& run, const MoveNet& spn);

/// Fires the run's transitions in a topological order from the initial
/// marking; returns the reached marking.
Marking replay_run(const AlignmentRun& run, const SystemNet& net);

}  // namespace ua
