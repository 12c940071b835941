#include "unfold_align/product.hpp"

#include <sstream>

#include "text_util.hpp"
#include "unfold_align/error.hpp"

namespace ua {

void CostModel::check() const {
  if (log_cost <= Cost::zero() || model_cost <= Cost::zero())
    throw Error(Errc::InvalidCostModel, "log and model costs must be positive");
  if (tau_cost <= Cost::zero())
    throw Error(Errc::InvalidCostModel, "tau cost must be positive");
  if (tau_cost >= std::min(log_cost, model_cost))
    throw Error(Errc::InvalidCostModel,
                "tau cost must be below both log and model costs");
}

MoveNet synchronous_product(const TraceNet& trace, const SystemNet& model) {
  const SystemNet& log = trace.net;
  NetBuilder b;
  MoveNet out;
  out.log_origin = trace.origin;

  std::vector<PlaceId> lp(log.num_places()), mp(model.num_places());
  for (std::size_t i = 0; i < log.num_places(); ++i) {
    lp[i] = b.add_place("log:" + log.name(place_id(i)));
    out.place_side.push_back(Side::Log);
  }
  for (std::size_t i = 0; i < model.num_places(); ++i) {
    mp[i] = b.add_place("model:" + model.name(place_id(i)));
    out.place_side.push_back(Side::Model);
  }

  auto wire_log = [&](TransId t1, TransId t3) {
    for (PlaceId p : log.preset(t1)) b.add_arc(lp[idx(p)], t3);
    for (PlaceId p : log.postset(t1)) b.add_arc(t3, lp[idx(p)]);
  };
  auto wire_model = [&](TransId t2, TransId t3) {
    for (PlaceId p : model.preset(t2)) b.add_arc(mp[idx(p)], t3);
    for (PlaceId p : model.postset(t2)) b.add_arc(t3, mp[idx(p)]);
  };
  auto opt_label = [](std::optional<std::string_view> l) {
    return l ? std::optional<std::string>(*l) : std::nullopt;
  };

  for (std::size_t i = 0; i < log.num_transitions(); ++i) {
    TransId t1 = trans_id(i);
    auto label = opt_label(log.label(t1));
    TransId t3 = b.add_transition("(" + log.name(t1) + ",>>)", label);
    wire_log(t1, t3);
    out.moves.push_back({MoveKind::Log, t1, std::nullopt, label});
  }
  for (std::size_t i = 0; i < model.num_transitions(); ++i) {
    TransId t2 = trans_id(i);
    auto label = opt_label(model.label(t2));
    TransId t3 = b.add_transition("(>>," + model.name(t2) + ")", label);
    wire_model(t2, t3);
    out.moves.push_back({MoveKind::Model, std::nullopt, t2, label});
  }
  for (std::size_t i = 0; i < log.num_transitions(); ++i) {
    TransId t1 = trans_id(i);
    auto l1 = log.label(t1);
    if (!l1) continue;
    for (std::size_t j = 0; j < model.num_transitions(); ++j) {
      TransId t2 = trans_id(j);
      auto l2 = model.label(t2);
      if (!l2 || *l1 != *l2) continue;
      TransId t3 = b.add_transition(
          "(" + log.name(t1) + "," + model.name(t2) + ")", std::string(*l1));
      wire_log(t1, t3);
      wire_model(t2, t3);
      out.moves.push_back({MoveKind::Sync, t1, t2, std::string(*l1)});
    }
  }

  std::vector<PlaceId> init, fin;
  for (PlaceId p : log.initial_marking()) init.push_back(lp[idx(p)]);
  for (PlaceId p : model.initial_marking()) init.push_back(mp[idx(p)]);
  for (PlaceId p : log.final_marking()) fin.push_back(lp[idx(p)]);
  for (PlaceId p : model.final_marking()) fin.push_back(mp[idx(p)]);
  b.set_initial(std::move(init));
  b.set_final(std::move(fin));
  out.net = b.build();
  return out;
}

MoveNet extend_with_target(const MoveNet& spn) {
  if (spn.extended())
    throw Error(Errc::AlreadyExtended, "product net already has a target transition");
  MoveNet out = spn;
  NetBuilder b(spn.net);
  TransId t_star = b.add_transition("t*", std::nullopt);
  PlaceId p_star = b.add_place("p*");
  for (PlaceId p : spn.net.final_marking()) b.add_arc(p, t_star);
  b.add_arc(t_star, p_star);
  b.set_final({p_star});
  out.net = b.build();
  out.moves.push_back({MoveKind::Target, std::nullopt, std::nullopt, std::nullopt});
  out.place_side.push_back(Side::Target);
  out.target = t_star;
  out.target_place = p_star;
  return out;
}

Cost move_cost(const CostModel& cm, const Move& move) {
  switch (move.kind) {
    case MoveKind::Sync:
    case MoveKind::Target:
      return Cost::zero();
    case MoveKind::Log:
      return cm.log_cost;
    case MoveKind::Model:
      return move.label ? cm.model_cost : cm.tau_cost;
  }
  return Cost::zero();
}

std::vector<Cost> transition_costs(const MoveNet& spn, const CostModel& cm) {
  std::vector<Cost> out;
  out.reserve(spn.moves.size());
  for (const Move& m : spn.moves) out.push_back(move_cost(cm, m));
  return out;
}

std::string to_dot(const MoveNet& spn) {
  auto colour = [](MoveKind k) {
    switch (k) {
      case MoveKind::Log: return "#ef6c00";
      case MoveKind::Model: return "#1565c0";
      case MoveKind::Sync: return "#2e7d32";
      case MoveKind::Target: return "#c62828";
    }
    return "black";
  };
  auto side_colour = [](Side s) {
    switch (s) {
      case Side::Log: return "#ef6c00";
      case Side::Model: return "#1565c0";
      case Side::Target: return "#c62828";
    }
    return "black";
  };
  const SystemNet& net = spn.net;
  std::ostringstream os;
  os << "digraph spn {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < net.num_places(); ++i) {
    PlaceId p = place_id(i);
    os << "  p" << i << " [shape=circle,label=" << detail::dot_quote(net.name(p)) << ",color=\""
       << side_colour(spn.side(p)) << "\"";
    if (net.initial_marking().contains(p)) os << ",style=bold";
    os << "];\n";
  }
  for (std::size_t i = 0; i < net.num_transitions(); ++i) {
    TransId t = trans_id(i);
    const Move& m = spn.move(t);
    auto label = net.label(t);
    const std::string text =
        m.kind == MoveKind::Target ? "t*" : label ? std::string(*label) : "tau";
    os << "  t" << i << " [shape=box,label=" << detail::dot_quote(text) << ",color=\"" << colour(m.kind) << "\"";
    if (m.kind == MoveKind::Target) os << ",style=dotted";
    os << "];\n";
  }
  for (std::size_t i = 0; i < net.num_transitions(); ++i) {
    TransId t = trans_id(i);
    const char* c = colour(spn.move(t).kind);
    for (PlaceId p : net.preset(t))
      os << "  p" << idx(p) << " -> t" << i << " [color=\"" << c << "\"];\n";
    for (PlaceId p : net.postset(t))
      os << "  t" << i << " -> p" << idx(p) << " [color=\"" << c << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ua
