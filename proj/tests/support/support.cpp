#include "support.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>

#include "unfold_align/bench.hpp"

namespace ua::testing {

namespace {

using Spec = TransitionSpec;
const std::optional<std::string> kTau = std::nullopt;

SystemNet chain_model(const std::vector<std::string>& labels) {
  std::vector<Spec> ts;
  for (std::size_t i = 0; i < labels.size(); ++i)
    ts.push_back({"t" + std::to_string(i), labels[i], {"p" + std::to_string(i)},
                  {"p" + std::to_string(i + 1)}});
  return make_net(ts, {"p0"}, {"p" + std::to_string(labels.size())});
}

/// a, then b and c concurrently, then d.
SystemNet diamond_model() {
  return make_net({{"ta", "a", {"p0"}, {"p1", "p2"}},
                   {"tb", "b", {"p1"}, {"p3"}},
                   {"tc", "c", {"p2"}, {"p4"}},
                   {"td", "d", {"p3", "p4"}, {"p5"}}},
                  {"p0"}, {"p5"});
}

/// a, then b or c, then d.
SystemNet choice_model() {
  return make_net({{"ta", "a", {"p0"}, {"p1"}},
                   {"tb", "b", {"p1"}, {"p2"}},
                   {"tc", "c", {"p1"}, {"p2"}},
                   {"td", "d", {"p2"}, {"p3"}}},
                  {"p0"}, {"p3"});
}

/// a, then b (c b)*, then d.
SystemNet loop_model() {
  return make_net({{"ta", "a", {"p0"}, {"p1"}},
                   {"tb", "b", {"p1"}, {"p2"}},
                   {"tc", "c", {"p2"}, {"p1"}},
                   {"td", "d", {"p2"}, {"p3"}}},
                  {"p0"}, {"p3"});
}

/// a, then b or nothing, then c.
SystemNet skip_model() {
  return make_net({{"ta", "a", {"p0"}, {"p1"}},
                   {"tb", "b", {"p1"}, {"p2"}},
                   {"ts", kTau, {"p1"}, {"p2"}},
                   {"tc", "c", {"p2"}, {"p3"}}},
                  {"p0"}, {"p3"});
}

/// Silent fork and join around concurrent a and b.
SystemNet silent_fork_model() {
  return make_net({{"fork", kTau, {"p0"}, {"p1", "p2"}},
                   {"ta", "a", {"p1"}, {"p3"}},
                   {"tb", "b", {"p2"}, {"p4"}},
                   {"join", kTau, {"p3", "p4"}, {"p5"}}},
                  {"p0"}, {"p5"});
}

/// Two transitions labelled a in sequence, then b.
SystemNet duplicate_model() {
  return make_net({{"a1", "a", {"p0"}, {"p1"}},
                   {"a2", "a", {"p1"}, {"p2"}},
                   {"tb", "b", {"p2"}, {"p3"}}},
                  {"p0"}, {"p3"});
}

/// Four concurrent branches between a fork s and a join e.
SystemNet four_branch_model() {
  return make_net({{"ts", "s", {"p0"}, {"p1", "p2", "p3", "p4"}},
                   {"ta", "a", {"p1"}, {"q1"}},
                   {"tb", "b", {"p2"}, {"q2"}},
                   {"tc", "c", {"p3"}, {"q3"}},
                   {"td", "d", {"p4"}, {"q4"}},
                   {"te", "e", {"q1", "q2", "q3", "q4"}, {"p5"}}},
                  {"p0"}, {"p5"});
}

PTrace ordered(const std::vector<std::string>& labels, std::vector<Edge> order) {
  return PTrace("c", labels, std::move(order));
}

}  // namespace

SystemNet running_example_model() {
  return make_net({{"tb", "b", {"p0"}, {"p1"}},
                   {"tt", kTau, {"p1"}, {"p2"}},
                   {"tc", "c", {"p2"}, {"p3"}},
                   {"tf", "f", {"p3"}, {"p4"}},
                   {"tx", "x", {"p1"}, {"p4"}}},
                  {"p0"}, {"p4"});
}

PTrace running_example_trace() {
  return PTrace("running", {"b", "c", "d", "e"}, {{0, 1}, {0, 2}, {0, 3}});
}

SystemNet shared_resource_net() {
  return make_net({{"x", "x", {"a", "c"}, {"d", "c"}}, {"y", "y", {"b", "c"}, {"e", "c"}}},
                  {"a", "b", "c"}, {"d", "c", "e"});
}

SystemNet branching_model() {
  return make_net({{"ta", "a", {"p0"}, {"p1", "p2"}},
                   {"tb", "b", {"p1"}, {"p3"}},
                   {"tc", "c", {"p1"}, {"p3"}},
                   {"td", "d", {"p2"}, {"p4"}},
                   {"te", "e", {"p4"}, {"p5"}},
                   {"tf", "f", {"p4"}, {"p6"}},
                   {"tg", "g", {"p5"}, {"p7"}},
                   {"th", "h", {"p6"}, {"p7"}},
                   {"join", kTau, {"p3", "p7"}, {"p8"}},
                   {"ti", "i", {"p8"}, {"p9"}},
                   {"tk", "k", {"p9"}, {"p10"}},
                   {"tl", "l", {"p8"}, {"p10"}}},
                  {"p0"}, {"p10"});
}

PTrace chain_trace(const std::vector<std::string>& labels, const std::string& case_id) {
  std::vector<Edge> order;
  for (int i = 0; i + 1 < static_cast<int>(labels.size()); ++i) order.emplace_back(i, i + 1);
  return PTrace(case_id, labels, order);
}

PTrace antichain_trace(const std::vector<std::string>& labels, const std::string& case_id) {
  return PTrace(case_id, labels, {});
}

std::vector<Instance> fixture_corpus() {
  auto units = [](std::int64_t whole, std::int64_t ticks = 0) {
    return Cost::units(whole) + Cost::from_ticks(ticks);
  };
  const auto abc = chain_model({"a", "b", "c"});
  std::vector<Instance> c;
  c.push_back({"running-example", running_example_model(), running_example_trace(), units(3, 1)});
  c.push_back({"chain-fit", abc, chain_trace({"a", "b", "c"}), units(0)});
  c.push_back({"chain-missing", abc, chain_trace({"a", "c"}), units(1)});
  c.push_back({"chain-extra", abc, chain_trace({"a", "b", "x", "c"}), units(1)});
  c.push_back({"chain-swap", abc, chain_trace({"a", "c", "b"}), units(2)});
  c.push_back({"chain-concurrent-tail", abc, ordered({"a", "b", "c"}, {{0, 1}, {0, 2}}), units(0)});
  c.push_back({"diamond-sequential", diamond_model(), chain_trace({"a", "b", "c", "d"}), units(0)});
  c.push_back({"diamond-rotated", diamond_model(), chain_trace({"d", "a", "b", "c"}), units(2)});
  c.push_back({"diamond-antichain", diamond_model(), antichain_trace({"a", "b", "c", "d"}), units(0)});
  c.push_back({"choice-both", choice_model(), chain_trace({"a", "b", "c", "d"}), units(1)});
  c.push_back({"choice-none", choice_model(), chain_trace({"a", "d"}), units(1)});
  c.push_back({"loop-twice", loop_model(), chain_trace({"a", "b", "c", "b", "d"}), units(0)});
  c.push_back({"loop-broken", loop_model(), chain_trace({"a", "b", "b", "d"}), units(1)});
  c.push_back({"silent-skip", skip_model(), chain_trace({"a", "c"}), units(0, 1)});
  c.push_back({"silent-fork-concurrent", silent_fork_model(), antichain_trace({"a", "b"}), units(0, 2)});
  c.push_back({"silent-fork-sequential", silent_fork_model(), chain_trace({"b", "a"}), units(0, 2)});
  c.push_back({"duplicate-fit", duplicate_model(), chain_trace({"a", "a", "b"}), units(0)});
  c.push_back({"duplicate-short", duplicate_model(), chain_trace({"a", "b"}), units(1)});
  c.push_back({"single-mismatch", chain_model({"x"}), chain_trace({"y"}), units(2)});
  c.push_back({"shared-resource-fit", shared_resource_net(), antichain_trace({"x", "y"}), units(0)});
  c.push_back({"shared-resource-repeat", shared_resource_net(), chain_trace({"x", "x"}), units(2)});
  c.push_back({"branching-fit", branching_model(),
               chain_trace({"a", "b", "d", "e", "g", "i", "k"}), units(0, 1)});
  c.push_back({"branching-both-choices", branching_model(),
               chain_trace({"a", "c", "b", "d", "f", "h", "l"}), units(1, 1)});
  c.push_back({"running-example-reversed", running_example_model(),
               chain_trace({"e", "d", "c", "b"}), std::nullopt});
  c.push_back({"four-branches-antichain", four_branch_model(),
               ordered({"s", "a", "b", "c", "d", "e"},
                       {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}}),
               units(0)});
  c.push_back({"four-branches-noisy", four_branch_model(),
               ordered({"s", "b", "a", "d", "x", "e"}, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {2, 5}}),
               std::nullopt});
  return c;
}

Instance random_instance(std::uint64_t seed, int max_transitions, int max_events) {
  std::mt19937_64 rng(seed);
  static constexpr int kPar[] = {0, 30, 50, 70, 100};
  for (;;) {
    GenSpec g;
    g.n_activities = std::uniform_int_distribution<int>(2, 5)(rng);
    g.parallelism_pct = kPar[std::uniform_int_distribution<int>(0, 4)(rng)];
    g.seed = rng();
    g.no_loops = std::uniform_int_distribution<int>(0, 3)(rng) != 0;
    SystemNet model = generate_model(g);
    if (static_cast<int>(model.num_transitions()) > max_transitions) continue;

    std::optional<PTrace> trace;
    if (rng() % 2 == 0) {
      auto plays = simulate_log(model, 1, rng());
      NoiseSpec ns;
      ns.noise_pct = 100;
      ns.seed = rng();
      auto noisy = inject_noise(plays, ns);
      trace = noisy.traces.front();
    } else {
      std::vector<std::string> alphabet;
      for (std::size_t i = 0; i < model.num_transitions(); ++i)
        if (auto l = model.label(trans_id(i))) alphabet.emplace_back(*l);
      alphabet.push_back("z");
      const int n = std::uniform_int_distribution<int>(1, max_events)(rng);
      std::vector<std::string> labels;
      for (int i = 0; i < n; ++i)
        labels.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
      std::vector<Edge> order;
      std::bernoulli_distribution link(0.4);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (link(rng)) order.emplace_back(i, j);
      trace = PTrace("random", labels, order);
    }
    if (trace->size() > max_events) continue;
    return {"random-" + std::to_string(seed), std::move(model), std::move(*trace), std::nullopt};
  }
}

namespace {

SystemNet random_net(std::mt19937_64& rng, int max_places, bool acyclic) {
  for (;;) {
    const int np = std::uniform_int_distribution<int>(3, max_places)(rng);
    const int nt = std::uniform_int_distribution<int>(2, 8)(rng);
    std::vector<Spec> ts;
    auto pname = [](int p) { return "p" + std::to_string(p); };
    for (int t = 0; t < nt; ++t) {
      Spec s;
      s.name = "t" + std::to_string(t);
      s.label = "l" + std::to_string(t % 4);
      // Acyclic nets only move tokens to higher-numbered places.
      const int split = acyclic ? std::uniform_int_distribution<int>(1, np - 1)(rng) : np;
      const int in_hi = acyclic ? split - 1 : np - 1;
      const int out_lo = acyclic ? split : 0;
      std::set<int> in, out;
      const int ni = std::uniform_int_distribution<int>(1, 2)(rng);
      const int no = std::uniform_int_distribution<int>(1, 2)(rng);
      for (int i = 0; i < ni; ++i) in.insert(std::uniform_int_distribution<int>(0, in_hi)(rng));
      for (int i = 0; i < no; ++i) out.insert(std::uniform_int_distribution<int>(out_lo, np - 1)(rng));
      for (int p : in) s.inputs.push_back(pname(p));
      for (int p : out) s.outputs.push_back(pname(p));
      ts.push_back(std::move(s));
    }
    std::set<int> init;
    const int ni = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int i = 0; i < ni; ++i)
      init.insert(std::uniform_int_distribution<int>(0, acyclic ? np / 2 : np - 1)(rng));
    NetBuilder b;
    for (int p = 0; p < np; ++p) b.add_place(pname(p));
    for (const auto& s : ts) {
      TransId t = b.add_transition(s.name, s.label);
      for (const auto& p : s.inputs) b.add_arc(place_id(std::stoi(p.substr(1))), t);
      for (const auto& p : s.outputs) b.add_arc(t, place_id(std::stoi(p.substr(1))));
    }
    std::vector<PlaceId> m;
    for (int p : init) m.push_back(place_id(p));
    b.set_initial(m);
    b.set_final(m);
    SystemNet net = b.build();
    auto reach = bfs_markings(net, 400);
    if (!reach || reach->size() < 3) continue;
    return net;
  }
}

}  // namespace

SystemNet random_safe_net(std::mt19937_64& rng, int max_places) {
  return random_net(rng, max_places, false);
}

SystemNet random_acyclic_net(std::mt19937_64& rng, int max_places) {
  return random_net(rng, max_places, true);
}

std::optional<std::vector<Marking>> bfs_markings(const SystemNet& net, std::size_t limit) {
  std::vector<std::vector<PlaceId>> seen_order;
  std::set<std::vector<PlaceId>> seen;
  std::deque<std::vector<PlaceId>> todo;
  std::vector<PlaceId> m0(net.initial_marking().begin(), net.initial_marking().end());
  seen.insert(m0);
  todo.push_back(m0);
  while (!todo.empty()) {
    auto m = todo.front();
    todo.pop_front();
    seen_order.push_back(m);
    for (std::size_t i = 0; i < net.num_transitions(); ++i) {
      auto pre = net.preset(trans_id(i));
      auto post = net.postset(trans_id(i));
      if (!std::includes(m.begin(), m.end(), pre.begin(), pre.end())) continue;
      std::vector<PlaceId> rest, next;
      std::set_difference(m.begin(), m.end(), pre.begin(), pre.end(), std::back_inserter(rest));
      for (PlaceId p : post)
        if (std::binary_search(rest.begin(), rest.end(), p)) return std::nullopt;
      std::set_union(rest.begin(), rest.end(), post.begin(), post.end(), std::back_inserter(next));
      if (seen.insert(next).second) {
        if (seen.size() > limit) return std::nullopt;
        todo.push_back(next);
      }
    }
  }
  std::vector<Marking> out;
  for (auto& m : seen_order) out.emplace_back(std::move(m));
  return out;
}

std::map<Marking, Cost> remaining_costs(const SystemNet& net, const std::vector<Cost>& costs) {
  auto reach = bfs_markings(net);
  std::map<Marking, Cost> dist;
  if (!reach) return dist;
  std::map<Marking, std::vector<std::pair<Marking, Cost>>> reverse;
  for (const Marking& m : *reach)
    for (TransId t : enabled(net, m)) reverse[fire(net, m, t)].emplace_back(m, costs[idx(t)]);
  using Item = std::pair<Cost, Marking>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  if (std::find(reach->begin(), reach->end(), net.final_marking()) == reach->end()) return dist;
  pq.emplace(Cost::zero(), net.final_marking());
  while (!pq.empty()) {
    auto [d, m] = pq.top();
    pq.pop();
    if (dist.count(m)) continue;
    dist.emplace(m, d);
    for (const auto& [prev, c] : reverse[m])
      if (!dist.count(prev)) pq.emplace(d + c, prev);
  }
  return dist;
}

std::optional<Cost> dijkstra_cost(const SystemNet& net, const std::vector<Cost>& costs) {
  auto dist = remaining_costs(net, costs);
  auto it = dist.find(net.initial_marking());
  if (it == dist.end()) return std::nullopt;
  return it->second;
}

MoveNet extended_product(const PTrace& trace, const SystemNet& model) {
  return extend_with_target(synchronous_product(ptrace_to_trace_net(trace), model));
}

std::vector<CondId> cut_of(const Prefix& prefix, const std::vector<EventId>& config) {
  std::vector<CondId> produced(prefix.initial_conditions().begin(), prefix.initial_conditions().end());
  std::vector<CondId> consumed;
  for (EventId e : config) {
    const Event& ev = prefix.event(e);
    produced.insert(produced.end(), ev.postset.begin(), ev.postset.end());
    consumed.insert(consumed.end(), ev.preset.begin(), ev.preset.end());
  }
  std::sort(produced.begin(), produced.end());
  std::sort(consumed.begin(), consumed.end());
  std::vector<CondId> cut;
  std::set_difference(produced.begin(), produced.end(), consumed.begin(), consumed.end(),
                      std::back_inserter(cut));
  return cut;
}

std::optional<EventId> extension_event(const Prefix& prefix, const std::vector<EventId>& config,
                                       TransId t) {
  const auto cut = cut_of(prefix, config);
  std::vector<CondId> pre;
  for (PlaceId p : prefix.net().preset(t)) {
    auto it = std::find_if(cut.begin(), cut.end(),
                           [&](CondId c) { return prefix.condition(c).place == p; });
    if (it == cut.end()) return std::nullopt;
    pre.push_back(*it);
  }
  std::sort(pre.begin(), pre.end());
  for (EventId e : prefix.condition(pre.front()).consumers)
    if (prefix.event(e).transition == t && prefix.event(e).preset == pre) return e;
  return std::nullopt;
}

namespace {

std::vector<EventId> enabled_events(const Prefix& prefix, const std::vector<CondId>& cut,
                                    const std::vector<EventId>& config) {
  std::vector<EventId> out;
  for (CondId c : cut)
    for (EventId e : prefix.condition(c).consumers) {
      const Event& ev = prefix.event(e);
      if (!ev.extended || std::binary_search(config.begin(), config.end(), e)) continue;
      if (std::includes(cut.begin(), cut.end(), ev.preset.begin(), ev.preset.end()) &&
          std::find(out.begin(), out.end(), e) == out.end())
        out.push_back(e);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<EventId> random_configuration(const Prefix& prefix, std::mt19937_64& rng, double stop) {
  std::vector<EventId> config;
  std::bernoulli_distribution halt(stop);
  for (;;) {
    auto cand = enabled_events(prefix, cut_of(prefix, config), config);
    if (cand.empty()) break;
    config.push_back(cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)]);
    std::sort(config.begin(), config.end());
    if (halt(rng)) break;
  }
  return config;
}

std::optional<std::vector<std::vector<EventId>>> all_configurations(const Prefix& prefix,
                                                                    std::size_t limit) {
  std::set<std::vector<EventId>> seen{{}};
  std::deque<std::vector<EventId>> todo{{}};
  while (!todo.empty()) {
    auto config = todo.front();
    todo.pop_front();
    for (EventId e : enabled_events(prefix, cut_of(prefix, config), config)) {
      auto next = config;
      next.insert(std::upper_bound(next.begin(), next.end(), e), e);
      if (seen.insert(next).second) {
        if (seen.size() > limit) return std::nullopt;
        todo.push_back(std::move(next));
      }
    }
  }
  return std::vector<std::vector<EventId>>(seen.begin(), seen.end());
}

}  // namespace ua::testing
