#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "support.hpp"
#include "unfold_align/aligner.hpp"
#include "unfold_align/pipeline.hpp"

using namespace ua;
using namespace ua::testing;

namespace {

AlignmentOrder first_order(const PTrace& trace, const SystemNet& model,
                           Engine engine = Engine::UnfoldCost) {
  AlignOptions o;
  o.engine = engine;
  const TraceResult r = align_trace(trace, model, o);
  REQUIRE(r.status == AlignStatus::Aligned);
  REQUIRE(!r.orders.empty());
  return r.orders.front();
}

int find_node(const AlignmentOrder& order, const std::string& display) {
  for (int i = 0; i < static_cast<int>(order.nodes.size()); ++i)
    if (order.nodes[i].display() == display) return i;
  return -1;
}

const OrderEdge* find_edge(const AlignmentOrder& order, int from, int to) {
  for (const auto& e : order.edges)
    if (e.from == from && e.to == to) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("move display", "[aligner]") {
  MoveNode sync{NodeKind::Sync, "b", 0, trans_id(0)};
  MoveNode log{NodeKind::Log, "d", 1, std::nullopt};
  MoveNode model{NodeKind::Model, "f", -1, trans_id(3)};
  MoveNode tau{NodeKind::Invisible, "", -1, trans_id(1)};
  CHECK(sync.display() == "(b,b)");
  CHECK(log.display() == "(d,>>)");
  CHECK(model.display() == "(>>,f)");
  CHECK(tau.display() == "(>>,τ)");
  CHECK(std::string(to_string(NodeKind::Invisible)) == "invisible");
}

TEST_CASE("alignment order of the running example", "[aligner]") {
  const CostModel cm;
  for (Engine engine : kAllEngines) {
    CAPTURE(to_string(engine));
    const AlignmentOrder order = first_order(running_example_trace(), running_example_model(), engine);
    REQUIRE(order.nodes.size() == 6);
    const int b = find_node(order, "(b,b)");
    const int c = find_node(order, "(c,c)");
    const int d = find_node(order, "(d,>>)");
    const int e = find_node(order, "(e,>>)");
    const int t = find_node(order, "(>>,τ)");
    const int f = find_node(order, "(>>,f)");
    REQUIRE(std::min({b, c, d, e, t, f}) >= 0);

    SECTION("log dependencies follow the trace") {
      for (int to : {c, d, e}) {
        const OrderEdge* edge = find_edge(order, b, to);
        REQUIRE(edge);
        CHECK(edge->log_dep);
      }
    }
    SECTION("model dependencies follow the chosen path") {
      for (auto [from, to] : {std::pair{b, t}, std::pair{t, c}, std::pair{c, f}}) {
        const OrderEdge* edge = find_edge(order, from, to);
        REQUIRE(edge);
        CHECK(edge->model_dep);
        CHECK_FALSE(edge->log_dep);
      }
    }
    SECTION("exactly six edges") {
      CHECK(order.edges.size() == 6);
      CHECK(std::is_sorted(order.edges.begin(), order.edges.end(), [](auto& x, auto& y) {
        return std::pair{x.from, x.to} < std::pair{y.from, y.to};
      }));
    }
    SECTION("decomposition") {
      const UAlignment ua = decompose(order, cm);
      CHECK(ua.log_side.size() == 4);
      CHECK(ua.model_side.size() == 4);
      CHECK(ua.phi.size() == 2);
      CHECK(ua.cost == Cost::units(3) + Cost::from_ticks(1));
      CHECK(isomorphic(ua.log_side, running_example_trace().graph()));
      CHECK(std::count(ua.model_silent.begin(), ua.model_silent.end(), true) == 1);
    }
  }
}

TEST_CASE("diagnostics of the running example", "[aligner]") {
  const UAlignment ua =
      decompose(first_order(running_example_trace(), running_example_model()), CostModel{});
  auto labels = [](const LabeledDag& g, const std::vector<int>& nodes) {
    std::vector<std::string> out;
    for (int n : nodes) out.push_back(g.labels[n]);
    std::sort(out.begin(), out.end());
    return out;
  };
  auto dep_labels = [](const std::vector<DepRef>& deps) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& d : deps) out.emplace_back(d.from_label, d.to_label);
    std::sort(out.begin(), out.end());
    return out;
  };

  const Diagnostics with_tau = diagnose(ua, true);
  CHECK(labels(ua.log_side, with_tau.missing_events) == std::vector<std::string>{"d", "e"});
  CHECK(labels(ua.model_side, with_tau.undesired_events) == std::vector<std::string>{"f", "τ"});
  using P = std::pair<std::string, std::string>;
  CHECK(dep_labels(with_tau.missing_deps) == std::vector<P>{{"b", "c"}, {"b", "d"}, {"b", "e"}});
  CHECK(dep_labels(with_tau.undesired_deps) == std::vector<P>{{"b", "τ"}, {"c", "f"}, {"τ", "c"}});

  const Diagnostics without_tau = diagnose(ua);
  CHECK(labels(ua.model_side, without_tau.undesired_events) == std::vector<std::string>{"f"});
  CHECK(without_tau.missing_deps.size() == 3);
  CHECK_FALSE(without_tau.conforming());
}

TEST_CASE("dependency matching", "[aligner]") {
  const CostModel cm;
  const SystemNet parallel = make_net({{"s", "s", {"i"}, {"p", "q"}},
                                       {"a", "a", {"p"}, {"p2"}},
                                       {"b", "b", {"q"}, {"q2"}},
                                       {"e", "e", {"p2", "q2"}, {"o"}}},
                                      {"i"}, {"o"});
  const SystemNet sequential = make_net({{"s", "s", {"i"}, {"p"}},
                                         {"a", "a", {"p"}, {"q"}},
                                         {"b", "b", {"q"}, {"r"}},
                                         {"e", "e", {"r"}, {"o"}}},
                                        {"i"}, {"o"});
  const PTrace ordered = chain_trace({"s", "a", "b", "e"});
  PTrace unordered("c", {"s", "a", "b", "e"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});

  SECTION("an order the model lacks is a missing dependency") {
    const UAlignment ua = decompose(first_order(ordered, parallel), cm);
    CHECK(ua.cost == Cost::zero());
    const Diagnostics d = diagnose(ua);
    CHECK(d.missing_events.empty());
    CHECK(d.undesired_events.empty());
    REQUIRE(d.missing_deps.size() == 1);
    CHECK(d.missing_deps[0].from_label == "a");
    CHECK(d.missing_deps[0].to_label == "b");
    // s -> b and a -> e are model edges implied by the log order.
    CHECK(d.undesired_deps.size() == 2);
  }
  SECTION("an order the log lacks is an undesired dependency") {
    const UAlignment ua = decompose(first_order(unordered, sequential), cm);
    const Diagnostics d = diagnose(ua);
    REQUIRE(d.undesired_deps.size() == 1);
    CHECK(d.undesired_deps[0].from_label == "a");
    CHECK(d.undesired_deps[0].to_label == "b");
    CHECK(d.missing_deps.size() == 2);
  }
  SECTION("matching orders conform") {
    CHECK(diagnose(decompose(first_order(ordered, sequential), cm)).conforming());
    CHECK(diagnose(decompose(first_order(unordered, parallel), cm)).conforming());
  }
  SECTION("dependencies touching unmatched moves are reported") {
    const UAlignment ua = decompose(first_order(chain_trace({"s", "a", "x", "b", "e"}), sequential), cm);
    const Diagnostics d = diagnose(ua);
    REQUIRE(d.missing_events.size() == 1);
    CHECK(ua.log_side.labels[d.missing_events[0]] == "x");
    std::vector<std::pair<std::string, std::string>> deps;
    for (const auto& r : d.missing_deps) deps.emplace_back(r.from_label, r.to_label);
    std::sort(deps.begin(), deps.end());
    CHECK(deps == std::vector<std::pair<std::string, std::string>>{{"a", "x"}, {"x", "b"}});
    REQUIRE(d.undesired_deps.size() == 1);
    CHECK(d.undesired_deps[0].from_label == "a");
  }
}

TEST_CASE("orders, decompositions and fusion on random instances", "[aligner][property]") {
  const CostModel cm;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = random_instance(seed);
    CAPTURE(seed);
    AlignOptions o;
    o.engine = Engine::UnfoldCost;
    const TraceResult r = align_trace(inst.trace, inst.model, o);
    REQUIRE(r.status == AlignStatus::Aligned);
    const AlignmentOrder& order = r.orders.front();
    const AlignmentRun& run = r.runs.front();

    // One node per non-target event.
    CHECK(order.nodes.size() + 1 == run.events.size());
    CHECK(is_acyclic(static_cast<int>(order.nodes.size()), order.graph().edges));
    for (const auto& e : order.edges) CHECK((e.log_dep || e.model_dep));

    const UAlignment ua = decompose(order, cm);
    CHECK(ua.cost == r.cost);
    // Every node appears once, sync nodes on both sides.
    CHECK(ua.log_side.size() + ua.model_side.size() - ua.phi.size() == order.nodes.size());
    CHECK(ua.log_side.size() == inst.trace.size());
    // The log side is the trace itself.
    CHECK(isomorphic(ua.log_side, inst.trace.graph()));
    std::vector<int> events = ua.log_event;
    std::sort(events.begin(), events.end());
    for (int i = 0; i < inst.trace.size(); ++i) CHECK(events[i] == i);
    // phi links equal labels.
    for (auto [l, m] : ua.phi) CHECK(ua.log_side.labels[l] == ua.model_side.labels[m]);
    // The model side replays the model from its initial to its final marking.
    Marking m = inst.model.initial_marking();
    for (int v : topological_order(ua.model_side.size(), ua.model_side.edges))
      m = fire(inst.model, m, *order.nodes[ua.model_origin[v]].model);
    CHECK(m == inst.model.final_marking());
    // Fusing both sides back gives the order.
    CHECK(isomorphic(fuse(ua), order.graph()));
  }
}

TEST_CASE("report document", "[aligner]") {
  const AlignmentOrder order = first_order(running_example_trace(), running_example_model());
  const UAlignment ua = decompose(order, CostModel{});
  const auto j = report_json("running", order, ua);
  for (const char* key : {"case", "cost", "cost_exact", "moves", "log_deps", "model_deps", "phi",
                          "diagnostics"})
    CHECK(j.contains(key));
  CHECK(j["case"] == "running");
  CHECK(j["cost_exact"] == "3.0001");
  CHECK(j["moves"].size() == 6);
  CHECK(j["log_deps"].size() == 3);
  CHECK(j["model_deps"].size() == 3);
  CHECK(j["phi"].size() == 2);
  const auto& d = j["diagnostics"];
  CHECK(d["missing_events"].size() == 2);
  CHECK(d["undesired_events"].size() == 2);
  CHECK(d["missing_deps"].size() == 3);
  CHECK(d["undesired_deps"].size() == 3);
  int tau_rows = 0;
  for (const auto& row : d["undesired_events"]) tau_rows += row["tau"].get<bool>();
  CHECK(tau_rows == 1);
  for (const auto& [l, m] : j["phi"].items()) {
    (void)l;
    const int node = m[0].get<int>();
    CHECK(m[0] == m[1]);
    CHECK(j["moves"][node]["kind"] == "sync");
  }
}
