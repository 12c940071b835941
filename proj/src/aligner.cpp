#include "unfold_align/aligner.hpp"

#include <algorithm>
#include <map>

namespace ua {

namespace {

constexpr const char* kSkip = ">>";
constexpr const char* kTau = "τ";

}  // namespace

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Sync: return "sync";
    case NodeKind::Log: return "log";
    case NodeKind::Model: return "model";
    case NodeKind::Invisible: return "invisible";
  }
  return "?";
}

std::string MoveNode::log_part() const { return has_log_part() ? label : kSkip; }

std::string MoveNode::model_part() const {
  if (kind == NodeKind::Invisible) return kTau;
  return has_model_part() ? label : kSkip;
}

std::string MoveNode::display() const { return "(" + log_part() + "," + model_part() + ")"; }

LabeledDag AlignmentOrder::graph() const {
  LabeledDag g;
  for (const auto& n : nodes) g.add_node(n.display());
  for (const auto& e : edges) g.add_edge(e.from, e.to);
  return g;
}

AlignmentOrder run_to_alignment_order(const AlignmentRun& run, const MoveNet& spn) {
  AlignmentOrder order;
  std::vector<int> node_of(run.events.size(), -1);
  for (std::size_t e = 0; e < run.events.size(); ++e) {
    const Move& mv = spn.move(run.events[e].transition);
    if (mv.kind == MoveKind::Target) continue;
    MoveNode n;
    n.label = mv.label.value_or("");
    if (mv.log) n.log_event = spn.log_origin.at(idx(*mv.log));
    n.model = mv.model;
    switch (mv.kind) {
      case MoveKind::Sync: n.kind = NodeKind::Sync; break;
      case MoveKind::Log: n.kind = NodeKind::Log; break;
      default: n.kind = mv.label ? NodeKind::Model : NodeKind::Invisible; break;
    }
    node_of[e] = static_cast<int>(order.nodes.size());
    order.nodes.push_back(std::move(n));
  }

  std::vector<int> producer(run.conditions.size(), -1);
  for (std::size_t e = 0; e < run.events.size(); ++e)
    for (int b : run.events[e].postset) producer[b] = static_cast<int>(e);
  std::map<std::pair<int, int>, OrderEdge> edges;
  for (std::size_t e = 0; e < run.events.size(); ++e) {
    const int v = node_of[e];
    if (v < 0) continue;
    for (int b : run.events[e].preset) {
      if (producer[b] < 0) continue;
      const int u = node_of[producer[b]];
      auto& edge = edges[{u, v}];
      edge.from = u;
      edge.to = v;
      if (spn.side(run.conditions[b].place) == Side::Log) {
        edge.log_dep = true;
      } else {
        edge.model_dep = true;
      }
    }
  }
  for (auto& [key, edge] : edges) order.edges.push_back(edge);
  return order;
}

std::vector<int> UAlignment::phi_map() const {
  std::vector<int> m(log_side.size(), -1);
  for (auto [l, r] : phi) m[l] = r;
  return m;
}

UAlignment decompose(const AlignmentOrder& order, const CostModel& cm) {
  UAlignment ua;
  const int n = static_cast<int>(order.nodes.size());
  std::vector<int> log_node(n, -1), model_node(n, -1);
  Cost cost = Cost::zero();
  for (int i = 0; i < n; ++i) {
    const MoveNode& node = order.nodes[i];
    if (node.has_log_part()) {
      log_node[i] = ua.log_side.add_node(node.label);
      ua.log_event.push_back(node.log_event);
      ua.log_origin.push_back(i);
    }
    if (node.has_model_part()) {
      model_node[i] = ua.model_side.add_node(node.kind == NodeKind::Invisible ? kTau : node.label);
      ua.model_silent.push_back(node.kind == NodeKind::Invisible);
      ua.model_origin.push_back(i);
    }
    if (node.kind == NodeKind::Sync) ua.phi.emplace_back(log_node[i], model_node[i]);
    switch (node.kind) {
      case NodeKind::Sync: break;
      case NodeKind::Log: cost += cm.log_cost; break;
      case NodeKind::Model: cost += cm.model_cost; break;
      case NodeKind::Invisible: cost += cm.tau_cost; break;
    }
  }
  for (const auto& e : order.edges) {
    if (e.log_dep) ua.log_side.add_edge(log_node[e.from], log_node[e.to]);
    if (e.model_dep) ua.model_side.add_edge(model_node[e.from], model_node[e.to]);
  }
  ua.cost = cost;
  return ua;
}

LabeledDag fuse(const UAlignment& ua) {
  LabeledDag g;
  auto phi = ua.phi_map();
  std::vector<int> of_log(ua.log_side.size()), of_model(ua.model_side.size(), -1);
  for (int l = 0; l < ua.log_side.size(); ++l) {
    const std::string& a = ua.log_side.labels[l];
    of_log[l] = g.add_node("(" + a + "," + (phi[l] >= 0 ? a : kSkip) + ")");
    if (phi[l] >= 0) of_model[phi[l]] = of_log[l];
  }
  for (int m = 0; m < ua.model_side.size(); ++m)
    if (of_model[m] < 0)
      of_model[m] = g.add_node(std::string("(") + kSkip + "," + ua.model_side.labels[m] + ")");
  for (auto [u, v] : ua.log_side.edges) g.add_edge(of_log[u], of_log[v]);
  for (auto [u, v] : ua.model_side.edges) g.add_edge(of_model[u], of_model[v]);
  return g;
}

Diagnostics diagnose(const UAlignment& ua, bool include_tau) {
  Diagnostics d;
  auto phi = ua.phi_map();
  std::vector<int> phi_inv(ua.model_side.size(), -1);
  for (auto [l, m] : ua.phi) phi_inv[m] = l;

  for (int l = 0; l < ua.log_side.size(); ++l)
    if (phi[l] < 0) d.missing_events.push_back(l);
  for (int m = 0; m < ua.model_side.size(); ++m)
    if (phi_inv[m] < 0 && (include_tau || !ua.model_silent[m])) d.undesired_events.push_back(m);

  const auto log_red = transitive_reduction(ua.log_side.size(), ua.log_side.edges);
  const auto model_red = transitive_reduction(ua.model_side.size(), ua.model_side.edges);
  auto has = [](const std::vector<Edge>& es, int u, int v) {
    return std::binary_search(es.begin(), es.end(), Edge{u, v});
  };
  for (auto [u, v] : log_red)
    if (phi[u] < 0 || phi[v] < 0 || !has(model_red, phi[u], phi[v]))
      d.missing_deps.push_back({u, v, ua.log_side.labels[u], ua.log_side.labels[v]});
  for (auto [u, v] : model_red)
    if (phi_inv[u] < 0 || phi_inv[v] < 0 || !has(log_red, phi_inv[u], phi_inv[v]))
      d.undesired_deps.push_back({u, v, ua.model_side.labels[u], ua.model_side.labels[v]});
  return d;
}

nlohmann::json report_json(const std::string& case_id, const AlignmentOrder& order,
                           const UAlignment& ua) {
  using nlohmann::json;
  json moves = json::array();
  for (const auto& n : order.nodes)
    moves.push_back({{"kind", to_string(n.kind)}, {"log", n.log_part()}, {"model", n.model_part()}});
  json log_deps = json::array(), model_deps = json::array();
  for (const auto& e : order.edges) {
    if (e.log_dep) log_deps.push_back({e.from, e.to});
    if (e.model_dep) model_deps.push_back({e.from, e.to});
  }
  json phi = json::array();
  for (auto [l, m] : ua.phi) phi.push_back({ua.log_origin[l], ua.model_origin[m]});

  const Diagnostics d = diagnose(ua, true);
  json missing_events = json::array(), undesired_events = json::array();
  for (int l : d.missing_events)
    missing_events.push_back({{"node", ua.log_origin[l]}, {"label", ua.log_side.labels[l]}});
  for (int m : d.undesired_events)
    undesired_events.push_back({{"node", ua.model_origin[m]},
                                {"label", ua.model_side.labels[m]},
                                {"tau", static_cast<bool>(ua.model_silent[m])}});
  auto deps = [](const std::vector<DepRef>& refs, const std::vector<int>& origin,
                 const std::vector<bool>* silent) {
    json out = json::array();
    for (const auto& r : refs) {
      json j = {{"from", origin[r.from]}, {"to", origin[r.to]},
                {"from_label", r.from_label}, {"to_label", r.to_label}};
      if (silent) j["tau"] = static_cast<bool>((*silent)[r.from] || (*silent)[r.to]);
      out.push_back(std::move(j));
    }
    return out;
  };
  return {
      {"case", case_id},
      {"cost", ua.cost.to_double()},
      {"cost_exact", ua.cost.to_string()},
      {"moves", std::move(moves)},
      {"log_deps", std::move(log_deps)},
      {"model_deps", std::move(model_deps)},
      {"phi", std::move(phi)},
      {"diagnostics",
       {{"missing_events", std::move(missing_events)},
        {"undesired_events", std::move(undesired_events)},
        {"missing_deps", deps(d.missing_deps, ua.log_origin, nullptr)},
        {"undesired_deps", deps(d.undesired_deps, ua.model_origin, &ua.model_silent)}}},
  };
}

}  // namespace ua
