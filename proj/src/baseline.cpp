#include "unfold_align/baseline.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "unfold_align/error.hpp"
#include "unfold_align/heuristic.hpp"

namespace ua {

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NoPath: return "no-path";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

namespace {

struct SearchNode {
  Marking marking;
  Cost g;
  Cost h;
  std::uint32_t parent;
  TransId via;
};

struct OpenEntry {
  Cost f;
  Cost h;
  std::uint64_t seq;
  std::uint32_t node;

  // std::priority_queue is a max-heap: invert the comparison.
  friend bool operator<(const OpenEntry& a, const OpenEntry& b) {
    return std::tie(a.f, a.h, a.seq) > std::tie(b.f, b.h, b.seq);
  }
};

constexpr std::uint32_t kRoot = std::numeric_limits<std::uint32_t>::max();

}  // namespace

AStarResult astar_alignment(const MoveNet& spn, const CostModel& cm, const AStarOptions& opts) {
  if (!spn.extended()) throw Error(Errc::NotExtended, "search expects an extended product net");
  const SystemNet& net = spn.net;
  const auto costs = transition_costs(spn, cm);
  MarkingEquation heuristic(net, costs);
  auto h_of = [&](const Marking& m) {
    return opts.use_heuristic ? heuristic.estimate(m) : Cost::zero();
  };
  const auto deadline = std::chrono::steady_clock::now() + opts.timeout;

  AStarResult res;
  std::vector<SearchNode> nodes;
  std::priority_queue<OpenEntry> open;
  std::unordered_map<Marking, Cost, MarkingHash> best_g;
  std::unordered_set<Marking, MarkingHash> closed;
  std::uint64_t seq = 0;

  auto push = [&](Marking m, Cost g, std::uint32_t parent, TransId via) {
    Cost h = h_of(m);
    if (h == Cost::infinity()) return;  // final marking unreachable from m
    auto [it, fresh] = best_g.try_emplace(m, g);
    if (!fresh) {
      if (it->second <= g) return;
      it->second = g;
    }
    nodes.push_back({std::move(m), g, h, parent, via});
    open.push({g + h, h, seq++, static_cast<std::uint32_t>(nodes.size() - 1)});
    ++res.generated;
    res.queue_peak = std::max(res.queue_peak, open.size());
  };

  push(net.initial_marking(), Cost::zero(), kRoot, TransId{});
  while (!open.empty()) {
    if (std::chrono::steady_clock::now() > deadline || closed.size() >= opts.max_states) {
      res.status = SearchStatus::BudgetExceeded;
      return res;
    }
    const std::uint32_t cur = open.top().node;
    open.pop();
    if (!closed.insert(nodes[cur].marking).second) continue;
    ++res.expanded;
    if (nodes[cur].marking == net.final_marking()) {
      res.status = SearchStatus::Found;
      res.cost = nodes[cur].g;
      for (std::uint32_t n = cur; nodes[n].parent != kRoot; n = nodes[n].parent)
        res.sequence.push_back(nodes[n].via);
      std::reverse(res.sequence.begin(), res.sequence.end());
      return res;
    }
    for (TransId t : enabled(net, nodes[cur].marking)) {
      Marking next = fire(net, nodes[cur].marking, t);
      if (closed.count(next)) continue;
      push(std::move(next), nodes[cur].g + costs[idx(t)], cur, t);
    }
  }
  res.status = SearchStatus::NoPath;
  return res;
}

AlignmentRun replay_sequence(const MoveNet& spn, const CostModel& cm,
                             const std::vector<TransId>& seq) {
  const SystemNet& net = spn.net;
  AlignmentRun run;
  // Current token holder per place; revisiting a place yields a new clone.
  std::vector<int> holder(net.num_places(), -1);
  for (PlaceId p : net.initial_marking()) {
    holder[idx(p)] = static_cast<int>(run.conditions.size());
    run.conditions.push_back({p});
  }
  Cost cost = Cost::zero();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const TransId t = seq[i];
    if (idx(t) >= net.num_transitions())
      throw Error(Errc::InvalidSequence, "unknown transition at position " + std::to_string(i));
    AlignmentRun::Ev ev{t, {}, {}};
    for (PlaceId p : net.preset(t)) {
      if (holder[idx(p)] < 0)
        throw Error(Errc::InvalidSequence,
                    net.name(t) + " not enabled at position " + std::to_string(i));
      ev.preset.push_back(holder[idx(p)]);
      holder[idx(p)] = -1;
    }
    for (PlaceId p : net.postset(t)) {
      if (holder[idx(p)] >= 0)
        throw Error(Errc::InvalidSequence,
                    net.name(t) + " puts a second token on " + net.name(p));
      holder[idx(p)] = static_cast<int>(run.conditions.size());
      ev.postset.push_back(holder[idx(p)]);
      run.conditions.push_back({p});
    }
    cost += move_cost(cm, spn.move(t));
    run.events.push_back(std::move(ev));
  }
  std::vector<PlaceId> left;
  for (std::size_t p = 0; p < holder.size(); ++p)
    if (holder[p] >= 0) left.push_back(place_id(p));
  if (!spn.extended() || seq.empty() || seq.back() != *spn.target ||
      Marking(left) != net.final_marking())
    throw Error(Errc::InvalidSequence, "sequence does not end in the target marking");
  run.target_event = static_cast<int>(run.events.size()) - 1;
  run.cost = cost;
  return run;
}

AlignmentOrder replay_to_partial_order(const MoveNet& spn, const CostModel& cm,
                                       const std::vector<TransId>& seq) {
  return run_to_alignment_order(replay_sequence(spn, cm, seq), spn);
}

}  // namespace ua
