#include "unfold_align/unfolder.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "unfold_align/dag.hpp"
#include "unfold_align/error.hpp"

namespace ua {

// ---------------------------------------------------------------------------
// Prefix

Prefix::Prefix(const SystemNet& net, std::vector<Cost> costs)
    : net_(&net), costs_(std::move(costs)) {
  if (costs_.size() != net.num_transitions())
    throw std::invalid_argument("one cost per transition expected");
}

bool Prefix::co(CondId a, CondId b) const {
  const auto& list = conditions_.at(a).co;
  return std::binary_search(list.begin(), list.end(), b);
}

CondId Prefix::add_condition(PlaceId p, EventId producer) {
  conditions_.push_back(Condition{p, producer, {}, {}});
  return static_cast<CondId>(conditions_.size() - 1);
}

EventId Prefix::add_event(const Candidate& cand) {
  const auto id = static_cast<EventId>(events_.size());
  Event ev;
  ev.transition = cand.transition;
  ev.preset = cand.preset;
  for (CondId b : cand.preset) {
    EventId prod = conditions_[b].producer;
    if (prod != kNone) {
      const auto& pp = events_[prod].past;
      ev.past.insert(ev.past.end(), pp.begin(), pp.end());
    }
  }
  std::sort(ev.past.begin(), ev.past.end());
  ev.past.erase(std::unique(ev.past.begin(), ev.past.end()), ev.past.end());
  ev.past.push_back(id);

  // Insertion order is a linearisation of causality, so replaying the past
  // in id order yields Mark([e]).
  std::vector<char> marked(net_->num_places(), 0);
  for (PlaceId p : net_->initial_marking()) marked[idx(p)] = 1;
  Cost cost = Cost::zero();
  for (EventId x : ev.past) {
    TransId t = x == id ? ev.transition : events_[x].transition;
    cost += costs_[idx(t)];
    for (PlaceId p : net_->preset(t)) marked[idx(p)] = 0;
    for (PlaceId p : net_->postset(t)) marked[idx(p)] = 1;
  }
  std::vector<PlaceId> mark;
  for (std::size_t p = 0; p < marked.size(); ++p)
    if (marked[p]) mark.push_back(place_id(p));
  ev.mark = Marking(std::move(mark));
  ev.cost = cost;
  for (CondId b : cand.preset) conditions_[b].consumers.push_back(id);
  events_.push_back(std::move(ev));
  return id;
}

std::vector<CondId> Prefix::extend(EventId e) {
  Event& ev = events_[e];
  std::vector<CondId> base = conditions_[ev.preset.front()].co;
  for (std::size_t i = 1; i < ev.preset.size() && !base.empty(); ++i) {
    const auto& other = conditions_[ev.preset[i]].co;
    std::vector<CondId> next;
    std::set_intersection(base.begin(), base.end(), other.begin(), other.end(),
                          std::back_inserter(next));
    base = std::move(next);
  }
  std::vector<CondId> fresh;
  for (PlaceId p : net_->postset(ev.transition)) fresh.push_back(add_condition(p, e));
  for (CondId c : fresh) {
    auto& co = conditions_[c].co;
    co = base;
    for (CondId s : fresh)
      if (s != c) co.push_back(s);
  }
  // Fresh ids exceed every existing id, so appending keeps the lists sorted.
  for (CondId b : base) {
    auto& co = conditions_[b].co;
    co.insert(co.end(), fresh.begin(), fresh.end());
  }
  events_[e].postset = fresh;
  events_[e].extended = true;
  return fresh;
}

std::vector<Candidate> Prefix::possible_extensions(std::span<const CondId> new_conditions) const {
  std::vector<Candidate> out;
  std::vector<CondId> fresh(new_conditions.begin(), new_conditions.end());
  std::sort(fresh.begin(), fresh.end());
  auto earlier_fresh = [&](CondId b, CondId c) {
    return b < c && std::binary_search(fresh.begin(), fresh.end(), b);
  };

  std::vector<char> needed(net_->num_places(), 0);
  std::vector<std::vector<CondId>> bucket(net_->num_places());
  std::vector<PlaceId> touched;

  for (CondId c : fresh) {
    const PlaceId p = conditions_[c].place;
    auto consumers = net_->postset(p);
    if (consumers.empty()) continue;
    for (TransId t : consumers)
      for (PlaceId q : net_->preset(t))
        if (q != p && !needed[idx(q)]) {
          needed[idx(q)] = 1;
          touched.push_back(q);
        }
    // Each candidate preset is generated from its smallest fresh condition.
    for (CondId b : conditions_[c].co) {
      const PlaceId q = conditions_[b].place;
      if (needed[idx(q)] && !earlier_fresh(b, c)) bucket[idx(q)].push_back(b);
    }

    for (TransId t : consumers) {
      std::vector<const std::vector<CondId>*> slots;
      bool ok = true;
      for (PlaceId q : net_->preset(t)) {
        if (q == p) continue;
        if (bucket[idx(q)].empty()) {
          ok = false;
          break;
        }
        slots.push_back(&bucket[idx(q)]);
      }
      if (!ok) continue;
      std::vector<CondId> chosen{c};
      std::function<void(std::size_t)> pick = [&](std::size_t k) {
        if (k == slots.size()) {
          Candidate cand{t, chosen};
          std::sort(cand.preset.begin(), cand.preset.end());
          for (EventId ev : conditions_[c].consumers)
            if (events_[ev].transition == t && events_[ev].preset == cand.preset) return;
          out.push_back(std::move(cand));
          return;
        }
        for (CondId b : *slots[k]) {
          bool pairwise = true;
          for (std::size_t i = 1; i < chosen.size() && pairwise; ++i)
            pairwise = co(chosen[i], b);
          if (!pairwise) continue;
          chosen.push_back(b);
          pick(k + 1);
          chosen.pop_back();
        }
      };
      pick(0);
    }

    for (PlaceId q : touched) {
      needed[idx(q)] = 0;
      bucket[idx(q)].clear();
    }
    touched.clear();
  }
  return out;
}

Configuration Prefix::local_configuration(EventId e) const {
  const Event& ev = events_.at(e);
  return Configuration{ev.past, ev.cost};
}

bool Prefix::is_configuration(std::span<const EventId> events) const {
  std::vector<EventId> sorted(events.begin(), events.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  std::vector<CondId> consumed;
  for (EventId e : sorted) {
    if (e >= events_.size()) return false;
    for (EventId x : events_[e].past)
      if (!std::binary_search(sorted.begin(), sorted.end(), x)) return false;
    consumed.insert(consumed.end(), events_[e].preset.begin(), events_[e].preset.end());
  }
  std::sort(consumed.begin(), consumed.end());
  return std::adjacent_find(consumed.begin(), consumed.end()) == consumed.end();
}

Configuration Prefix::make_configuration(std::vector<EventId> events) const {
  std::sort(events.begin(), events.end());
  if (!is_configuration(events))
    throw Error(Errc::InvalidConfiguration,
                "event set is not causally closed and conflict free");
  Cost cost = Cost::zero();
  for (EventId e : events) cost += costs_[idx(events_[e].transition)];
  return Configuration{std::move(events), cost};
}

Marking Prefix::mark_of(const Configuration& c) const {
  if (!is_configuration(c.events))
    throw Error(Errc::InvalidConfiguration,
                "event set is not causally closed and conflict free");
  std::vector<CondId> produced(initial_.begin(), initial_.end());
  std::vector<CondId> consumed;
  std::vector<PlaceId> pending;  // outputs of events without materialised postset
  for (EventId e : c.events) {
    const Event& ev = events_[e];
    consumed.insert(consumed.end(), ev.preset.begin(), ev.preset.end());
    if (ev.extended) {
      produced.insert(produced.end(), ev.postset.begin(), ev.postset.end());
    } else {
      for (PlaceId p : net_->postset(ev.transition)) pending.push_back(p);
    }
  }
  std::sort(produced.begin(), produced.end());
  std::sort(consumed.begin(), consumed.end());
  std::vector<CondId> cut;
  std::set_difference(produced.begin(), produced.end(), consumed.begin(),
                      consumed.end(), std::back_inserter(cut));
  for (CondId b : cut) pending.push_back(conditions_[b].place);
  return Marking(std::move(pending));
}

// ---------------------------------------------------------------------------
// Orders

std::strong_ordering order_cost(const Configuration& a, const Configuration& b) {
  if (auto c = a.cost <=> b.cost; c != 0) return c;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.events.begin(), a.events.end(),
                                                b.events.begin(), b.events.end());
}

std::strong_ordering order_heuristic(const Configuration& a, Cost est_a,
                                     const Configuration& b, Cost est_b) {
  if (auto c = (a.cost + est_a) <=> (b.cost + est_b); c != 0) return c;
  return order_cost(a, b);
}

// ---------------------------------------------------------------------------
// Unfolder

const char* to_string(UnfoldStatus s) {
  switch (s) {
    case UnfoldStatus::Found: return "found";
    case UnfoldStatus::ModelNotEasySound: return "model-not-easy-sound";
    case UnfoldStatus::BudgetExceeded: return "budget-exceeded";
    case UnfoldStatus::Complete: return "complete";
  }
  return "?";
}

Unfolder::Unfolder(const SystemNet& net, std::vector<Cost> costs,
                   std::optional<TransId> target, UnfoldOptions opts)
    : prefix_(net, costs), target_(target), opts_(opts) {
  if (opts_.order == SearchOrder::Heuristic)
    heuristic_ = std::make_unique<MarkingEquation>(net, std::move(costs));
}

Cost Unfolder::priority(EventId e) const {
  const Event& ev = prefix_.events_[e];
  return ev.cost + ev.estimate;
}

bool Unfolder::less(EventId a, EventId b) const {
  const Event& ea = prefix_.events_[a];
  const Event& eb = prefix_.events_[b];
  if (auto c = priority(a) <=> priority(b); c != 0) return c < 0;
  if (ea.past.size() != eb.past.size()) return ea.past.size() < eb.past.size();
  return std::lexicographical_compare(ea.past.begin(), ea.past.end(),
                                      eb.past.begin(), eb.past.end());
}

bool Unfolder::is_cutoff(EventId e) const {
  auto it = imarks_.find(prefix_.events_[e].mark);
  if (it == imarks_.end()) return false;
  // Representatives were popped earlier, hence are smaller in the order.
  if (it->second != kNone && !less(it->second, e))
    throw std::logic_error("marking representative is not smaller than the event");
  return true;
}

void Unfolder::create_events(std::span<const CondId> new_conditions) {
  auto heap_cmp = [this](EventId a, EventId b) { return less(b, a); };
  for (const Candidate& cand : prefix_.possible_extensions(new_conditions)) {
    EventId e = prefix_.add_event(cand);
    if (heuristic_) prefix_.events_[e].estimate = heuristic_->estimate(prefix_.events_[e].mark);
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(), heap_cmp);
    ++stats_.events;
  }
  stats_.queue_peak = std::max(stats_.queue_peak, heap_.size());
}

UnfoldResult Unfolder::run() {
  UnfoldResult result;
  const auto deadline = std::chrono::steady_clock::now() + opts_.timeout;
  const SystemNet& net = prefix_.net();

  for (PlaceId p : net.initial_marking())
    prefix_.initial_.push_back(prefix_.add_condition(p, kNone));
  for (CondId c : prefix_.initial_)
    for (CondId d : prefix_.initial_)
      if (c != d) prefix_.conditions_[c].co.push_back(d);
  imarks_.emplace(net.initial_marking(), kNone);
  create_events(prefix_.initial_);

  auto heap_cmp = [this](EventId a, EventId b) { return less(b, a); };
  bool budget_hit = false;
  while (!heap_.empty()) {
    if (std::chrono::steady_clock::now() > deadline ||
        prefix_.events_.size() > opts_.max_events) {
      budget_hit = true;
      break;
    }
    std::pop_heap(heap_.begin(), heap_.end(), heap_cmp);
    const EventId e = heap_.back();
    heap_.pop_back();
    ++stats_.popped;
    prefix_.events_[e].popped = true;
    if (on_pop_) on_pop_(prefix_, e);

    const bool found = !result.runs.empty();
    if (found && !opts_.stop_at_first && opts_.early_exit &&
        priority(e) > result.lowest_cost)
      break;

    Event& ev = prefix_.events_[e];
    if (target_ && ev.transition == *target_) {
      // Only a run that consumed every token reaches the target marking.
      if (ev.mark != net.final_marking()) continue;
      if (!found) result.lowest_cost = ev.cost;
      if (ev.cost == result.lowest_cost) result.runs.push_back(extract_run(e));
      if (opts_.stop_at_first) break;
      continue;
    }

    bool cut_past = false;
    for (EventId x : ev.past)
      if (x != e && prefix_.events_[x].cutoff) {
        cut_past = true;
        break;
      }
    if (cut_past) {
      prefix_.events_[e].discarded = true;
      ++stats_.discarded;
      continue;
    }

    auto fresh = prefix_.extend(e);
    if (opts_.cutoffs && is_cutoff(e)) {
      prefix_.events_[e].cutoff = true;
      ++stats_.cutoffs;
    } else {
      create_events(fresh);
      imarks_.try_emplace(prefix_.events_[e].mark, e);
    }
  }

  stats_.conditions = prefix_.conditions_.size();
  if (heuristic_) stats_.heuristic_solves = heuristic_->solves();
  result.stats = stats_;
  if (!result.runs.empty()) {
    result.status = UnfoldStatus::Found;
  } else if (budget_hit) {
    result.status = UnfoldStatus::BudgetExceeded;
  } else {
    result.status = target_ ? UnfoldStatus::ModelNotEasySound : UnfoldStatus::Complete;
  }
  return result;
}

AlignmentRun Unfolder::extract_run(EventId target) const {
  AlignmentRun run;
  const Event& te = prefix_.events_[target];
  std::unordered_map<EventId, int> ev_index;
  for (EventId x : te.past) {
    ev_index.emplace(x, static_cast<int>(run.events.size()));
    run.events.push_back({prefix_.events_[x].transition, {}, {}});
  }
  std::unordered_map<CondId, int> cond_index;
  auto cond = [&](CondId b) {
    auto [it, fresh] = cond_index.emplace(b, static_cast<int>(run.conditions.size()));
    if (fresh) run.conditions.push_back({prefix_.conditions_[b].place});
    return it->second;
  };
  for (EventId x : te.past)
    for (CondId b : prefix_.events_[x].preset) run.events[ev_index[x]].preset.push_back(cond(b));
  for (EventId x : te.past) {
    if (x == target) continue;
    for (CondId b : prefix_.events_[x].postset)
      if (cond_index.count(b)) run.events[ev_index[x]].postset.push_back(cond_index[b]);
  }
  // The target event is never extended; its sink condition is synthesised.
  auto& last = run.events.back();
  for (PlaceId p : prefix_.net().postset(te.transition)) {
    last.postset.push_back(static_cast<int>(run.conditions.size()));
    run.conditions.push_back({p});
  }
  run.target_event = static_cast<int>(run.events.size()) - 1;
  run.cost = te.cost;
  return run;
}

UnfoldResult unfold(const MoveNet& spn, const CostModel& cm, const UnfoldOptions& opts) {
  if (!spn.extended())
    throw Error(Errc::NotExtended, "unfold expects an extended product net");
  Unfolder u(spn.net, transition_costs(spn, cm), spn.target, opts);
  return u.run();
}

// ---------------------------------------------------------------------------
// Run checks

std::vector<std::string> check_alignment_run(const AlignmentRun& run, const MoveNet& spn) {
  std::vector<std::string> out;
  const int nc = static_cast<int>(run.conditions.size());
  const int ne = static_cast<int>(run.events.size());
  std::vector<int> producers(nc, 0), consumers(nc, 0);
  std::vector<Edge> flow;  // nodes: conditions 0..nc-1, events nc..
  for (int e = 0; e < ne; ++e) {
    for (int b : run.events[e].preset) {
      ++consumers[b];
      flow.emplace_back(b, nc + e);
    }
    for (int b : run.events[e].postset) {
      ++producers[b];
      flow.emplace_back(nc + e, b);
    }
  }
  for (int b = 0; b < nc; ++b) {
    if (producers[b] > 1) out.push_back("(a) condition " + std::to_string(b) + " has several producers");
    if (consumers[b] > 1) out.push_back("(e) condition " + std::to_string(b) + " has several consumers");
  }
  if (!is_acyclic(nc + ne, flow)) {
    out.push_back("(c) flow relation is cyclic");
    return out;
  }
  // (b): two events in the causal past of one event may not share an input.
  auto reach = transitive_closure(nc + ne, flow);
  for (int e = 0; e < ne; ++e) {
    std::vector<int> inputs;
    for (int x = 0; x < ne; ++x)
      if (x == e || reach[nc + x][nc + e])
        inputs.insert(inputs.end(), run.events[x].preset.begin(), run.events[x].preset.end());
    std::sort(inputs.begin(), inputs.end());
    if (std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end())
      out.push_back("(b) event " + std::to_string(e) + " is in self-conflict");
  }
  // (d) holds for finite acyclic nets.

  const SystemNet& net = spn.net;
  for (int e = 0; e < ne; ++e) {
    const auto& ev = run.events[e];
    std::vector<PlaceId> pre, post;
    for (int b : ev.preset) pre.push_back(run.conditions[b].place);
    for (int b : ev.postset) post.push_back(run.conditions[b].place);
    std::sort(pre.begin(), pre.end());
    std::sort(post.begin(), post.end());
    auto np = net.preset(ev.transition);
    auto nq = net.postset(ev.transition);
    if (!std::equal(pre.begin(), pre.end(), np.begin(), np.end()) ||
        !std::equal(post.begin(), post.end(), nq.begin(), nq.end()))
      out.push_back("homomorphism broken at event " + std::to_string(e));
  }
  std::vector<PlaceId> minimal;
  int sinks = 0, sink = -1;
  for (int b = 0; b < nc; ++b) {
    if (producers[b] == 0) minimal.push_back(run.conditions[b].place);
    if (consumers[b] == 0) {
      ++sinks;
      sink = b;
    }
  }
  if (Marking(minimal) != net.initial_marking() || minimal.size() != net.initial_marking().size())
    out.push_back("minimal conditions do not map onto the initial marking");
  if (sinks != 1) {
    out.push_back("run has " + std::to_string(sinks) + " sink conditions");
  } else if (run.target_event < 0 ||
             std::find(run.events[run.target_event].postset.begin(),
                       run.events[run.target_event].postset.end(),
                       sink) == run.events[run.target_event].postset.end()) {
    out.push_back("sink condition is not produced by the target event");
  }
  if (run.target_event >= 0 && spn.target &&
      run.events[run.target_event].transition != *spn.target)
    out.push_back("target event does not map to t*");
  return out;
}

Marking replay_run(const AlignmentRun& run, const SystemNet& net) {
  const int nc = static_cast<int>(run.conditions.size());
  std::vector<Edge> flow;
  std::vector<int> producer(nc, -1);
  for (int e = 0; e < static_cast<int>(run.events.size()); ++e)
    for (int b : run.events[e].postset) producer[b] = e;
  for (int e = 0; e < static_cast<int>(run.events.size()); ++e)
    for (int b : run.events[e].preset)
      if (producer[b] >= 0) flow.emplace_back(producer[b], e);
  Marking m = net.initial_marking();
  for (int e : topological_order(static_cast<int>(run.events.size()), flow))
    m = fire(net, m, run.events[e].transition);
  return m;
}

}  // namespace ua
