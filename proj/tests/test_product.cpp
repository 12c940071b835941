#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "support.hpp"
#include "unfold_align/error.hpp"

using namespace ua;
using namespace ua::testing;

namespace {

int count_kind(const MoveNet& spn, MoveKind k) {
  int n = 0;
  for (const Move& m : spn.moves) n += m.kind == k;
  return n;
}

std::set<std::string> sync_labels(const MoveNet& spn) {
  std::set<std::string> out;
  for (const Move& m : spn.moves)
    if (m.kind == MoveKind::Sync) out.insert(*m.label);
  return out;
}

// Depth-first enumeration of firing sequences that end in the final marking.
void complete_sequences(const SystemNet& net, const Marking& m, std::vector<TransId>& seq,
                        std::size_t max_len, std::vector<std::vector<TransId>>& out) {
  if (m == net.final_marking()) {
    out.push_back(seq);
    return;
  }
  if (seq.size() >= max_len) return;
  for (TransId t : enabled(net, m)) {
    seq.push_back(t);
    complete_sequences(net, fire(net, m, t), seq, max_len, out);
    seq.pop_back();
  }
}

}  // namespace

TEST_CASE("synchronous product of the running example", "[product]") {
  const MoveNet spn = synchronous_product(ptrace_to_trace_net(running_example_trace()),
                                          running_example_model());
  CHECK_FALSE(spn.extended());
  CHECK(sync_labels(spn) == std::set<std::string>{"b", "c"});
  CHECK(count_kind(spn, MoveKind::Sync) == 2);
  CHECK(count_kind(spn, MoveKind::Log) == 4);
  CHECK(count_kind(spn, MoveKind::Model) == 5);
  CHECK(spn.net.num_places() == 7 + 5);
  CHECK(spn.net.initial_marking().size() == 2);
  CHECK(spn.net.final_marking().size() == 4);
  for (const Move& m : spn.moves)
    if (m.kind == MoveKind::Log) CHECK_FALSE(m.is_invisible());
  int invisible = 0;
  for (const Move& m : spn.moves) invisible += m.is_invisible();
  CHECK(invisible == 1);

  SECTION("extension adds the target") {
    const MoveNet ext = extend_with_target(spn);
    REQUIRE(ext.extended());
    CHECK(ext.net.num_places() == spn.net.num_places() + 1);
    CHECK(ext.net.num_transitions() == spn.net.num_transitions() + 1);
    CHECK(ext.net.final_marking() == Marking{*ext.target_place});
    CHECK(ext.net.initial_marking() == spn.net.initial_marking());
    CHECK(ext.net.preset(*ext.target).size() == 4);
    CHECK(ext.move(*ext.target).kind == MoveKind::Target);
    CHECK(ext.side(*ext.target_place) == Side::Target);
    try {
      extend_with_target(ext);
      FAIL("expected AlreadyExtended");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::AlreadyExtended);
    }
  }
}

TEST_CASE("transition counts", "[product]") {
  SECTION("disjoint alphabets give no synchronous moves") {
    const auto tn = ptrace_to_trace_net(chain_trace({"a", "b"}));
    const SystemNet model = make_net({{"t", "x", {"p"}, {"q"}}}, {"p"}, {"q"});
    const MoveNet spn = synchronous_product(tn, model);
    CHECK(count_kind(spn, MoveKind::Sync) == 0);
    CHECK(spn.net.num_transitions() == tn.net.num_transitions() + model.num_transitions());
  }
  SECTION("duplicate labels pair up") {
    const auto tn = ptrace_to_trace_net(chain_trace({"x", "x"}));
    const SystemNet model =
        make_net({{"t1", "x", {"p"}, {"q"}}, {"t2", "x", {"q"}, {"r"}}}, {"p"}, {"r"});
    CHECK(count_kind(synchronous_product(tn, model), MoveKind::Sync) == 4);
  }
  SECTION("closed form on random instances") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const Instance inst = random_instance(seed);
      const auto tn = ptrace_to_trace_net(inst.trace);
      const MoveNet spn = synchronous_product(tn, inst.model);
      std::map<std::string, int> log_count, model_count;
      for (int e = 0; e < inst.trace.size(); ++e) ++log_count[inst.trace.label(e)];
      for (std::size_t t = 0; t < inst.model.num_transitions(); ++t)
        if (auto l = inst.model.label(trans_id(t))) ++model_count[std::string(*l)];
      std::size_t pairs = 0;
      for (auto [label, n] : log_count)
        if (model_count.count(label)) pairs += static_cast<std::size_t>(n * model_count[label]);
      CHECK(spn.net.num_transitions() ==
            tn.net.num_transitions() + inst.model.num_transitions() + pairs);
      for (const Move& m : spn.moves) {
        if (m.kind != MoveKind::Sync) continue;
        CHECK(tn.net.label(*m.log) == inst.model.label(*m.model));
      }
    }
  }
}

TEST_CASE("move costs", "[product]") {
  const CostModel cm;
  CHECK(move_cost(cm, {MoveKind::Sync, trans_id(0), trans_id(0), "b"}) == Cost::zero());
  CHECK(move_cost(cm, {MoveKind::Log, trans_id(0), std::nullopt, "d"}) == Cost::units(1));
  CHECK(move_cost(cm, {MoveKind::Model, std::nullopt, trans_id(0), "f"}) == Cost::units(1));
  CHECK(move_cost(cm, {MoveKind::Model, std::nullopt, trans_id(0), std::nullopt}) ==
        Cost::from_ticks(1));
  CHECK(move_cost(cm, {MoveKind::Target, std::nullopt, std::nullopt, std::nullopt}) == Cost::zero());
  const MoveNet ext = extended_product(running_example_trace(), running_example_model());
  const auto costs = transition_costs(ext, cm);
  REQUIRE(costs.size() == ext.net.num_transitions());
  CHECK(costs[idx(*ext.target)] == Cost::zero());
}

TEST_CASE("target consumes the whole final marking", "[product]") {
  const SystemNet model = make_net({{"t", "a", {"p"}, {"q", "r"}}}, {"p"}, {"q", "r"});
  const MoveNet ext = extended_product(chain_trace({"a"}), model);
  REQUIRE(ext.net.preset(*ext.target).size() == 3);
  Marking m = ext.net.initial_marking();
  for (TransId t : enabled(ext.net, m))
    if (ext.move(t).kind == MoveKind::Sync) m = fire(ext.net, m, t);
  REQUIRE(is_enabled(ext.net, m, *ext.target));
  CHECK(fire(ext.net, m, *ext.target) == ext.net.final_marking());
}

TEST_CASE("complete product runs project onto both sides", "[product][property]") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 25 && seed < 500; ++seed) {
    const Instance inst = random_instance(seed, 6, 4);
    const MoveNet ext = extended_product(inst.trace, inst.model);
    if (ext.net.num_transitions() > 10) continue;
    ++checked;
    REQUIRE(bfs_markings(ext.net));  // 1-safe along every run
    std::vector<std::vector<TransId>> runs;
    std::vector<TransId> seq;
    complete_sequences(ext.net, ext.net.initial_marking(), seq, 14, runs);
    CHECK_FALSE(runs.empty());
    const TraceNet tn = ptrace_to_trace_net(inst.trace);
    for (const auto& run : runs) {
      REQUIRE(run.back() == *ext.target);
      std::vector<int> log_events;
      Marking model_m = inst.model.initial_marking();
      for (TransId t : run) {
        const Move& mv = ext.move(t);
        if (mv.log) log_events.push_back(ext.log_origin[idx(*mv.log)]);
        if (mv.model) model_m = fire(inst.model, model_m, *mv.model);
      }
      CHECK(model_m == inst.model.final_marking());
      REQUIRE(static_cast<int>(log_events.size()) == inst.trace.size());
      for (std::size_t i = 0; i < log_events.size(); ++i)
        for (std::size_t j = i + 1; j < log_events.size(); ++j)
          CHECK_FALSE(inst.trace.precedes(log_events[j], log_events[i]));
    }
  }
  CHECK(checked == 25);
}

TEST_CASE("dot rendering", "[product]") {
  const std::string dot = to_dot(extended_product(running_example_trace(), running_example_model()));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("t*") != std::string::npos);
  CHECK(dot.find("#c62828") != std::string::npos);
}
