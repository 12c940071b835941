#pragma once

// Shared fixtures, random instance generators and brute-force oracles for
// the test executables. Oracles only use net primitives (enabled / fire)
// and never the search engines under test.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "unfold_align/cost.hpp"
#include "unfold_align/petri_net.hpp"
#include "unfold_align/product.hpp"
#include "unfold_align/ptrace.hpp"
#include "unfold_align/unfolder.hpp"

namespace ua::testing {

struct Instance {
  std::string name;
  SystemNet model;
  PTrace trace;
  std::optional<Cost> expected;  // hand-computed optimum, default costs
};

// Hand-built nets ------------------------------------------------------------

/// b, then a silent step, then c and f; or b then x. Final place p4.
SystemNet running_example_model();
/// b precedes each of c, d, e; c, d, e mutually unordered.
PTrace running_example_trace();

/// x: {a,c} -> {d,c}, y: {b,c} -> {e,c}; initial {a,b,c}, final {d,c,e}.
SystemNet shared_resource_net();

/// Eleven places, twelve transitions with choice, concurrency and a silent
/// join.
SystemNet branching_model();

PTrace chain_trace(const std::vector<std::string>& labels, const std::string& case_id = "c");
PTrace antichain_trace(const std::vector<std::string>& labels, const std::string& case_id = "c");

/// At least twenty instances covering the running example, choices,
/// concurrency, loops, silent steps and duplicate labels.
std::vector<Instance> fixture_corpus();

// Random instances -----------------------------------------------------------

/// Block-structured model with at most `max_transitions` transitions and a
/// trace of at most `max_events` events (a noisy play or a random order
/// over the model alphabet plus one foreign label).
Instance random_instance(std::uint64_t seed, int max_transitions = 12, int max_events = 8);

/// Arbitrary (not block-structured) 1-safe net with at most `max_places`
/// places, possibly cyclic. Reachable markings are bounded by 400.
SystemNet random_safe_net(std::mt19937_64& rng, int max_places = 8);

/// Random 1-safe net without cycles.
SystemNet random_acyclic_net(std::mt19937_64& rng, int max_places = 8);

// Oracles --------------------------------------------------------------------

/// Breadth-first reachable markings, or nullopt if a firing is unsafe or
/// more than `limit` markings exist.
std::optional<std::vector<Marking>> bfs_markings(const SystemNet& net, std::size_t limit = 100000);

/// Exact cheapest remaining cost from every reachable marking to the final
/// marking (Dijkstra on the reversed reachability graph). Markings that
/// cannot reach the final marking are absent.
std::map<Marking, Cost> remaining_costs(const SystemNet& net, const std::vector<Cost>& costs);

/// Cheapest cost from the initial to the final marking, nullopt if none.
std::optional<Cost> dijkstra_cost(const SystemNet& net, const std::vector<Cost>& costs);

/// Extended product of a trace and a model.
MoveNet extended_product(const PTrace& trace, const SystemNet& model);

// Prefix helpers --------------------------------------------------------------

/// Conditions of the cut of a configuration (events must be extended).
std::vector<CondId> cut_of(const Prefix& prefix, const std::vector<EventId>& config);

/// The event extending `config` by transition `t` on its cut, if present.
std::optional<EventId> extension_event(const Prefix& prefix, const std::vector<EventId>& config,
                                       TransId t);

/// Random configuration built by firing extended events from the initial
/// cut; stops with probability `stop` after each step.
std::vector<EventId> random_configuration(const Prefix& prefix, std::mt19937_64& rng,
                                          double stop = 0.15);

/// All configurations of the finished part (extended events) of a prefix,
/// or nullopt when there are more than `limit`.
std::optional<std::vector<std::vector<EventId>>> all_configurations(const Prefix& prefix,
                                                                    std::size_t limit = 200000);

}  // namespace ua::testing
