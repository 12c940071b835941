#include "unfold_align/petri_net.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "unfold_align/error.hpp"

namespace ua {

Marking::Marking(std::initializer_list<PlaceId> places)
    : Marking(std::vector<PlaceId>(places)) {}

Marking::Marking(std::vector<PlaceId> places) : places_(std::move(places)) {
  std::sort(places_.begin(), places_.end());
  places_.erase(std::unique(places_.begin(), places_.end()), places_.end());
}

bool Marking::contains(PlaceId p) const {
  return std::binary_search(places_.begin(), places_.end(), p);
}

std::size_t Marking::hash() const {
  // FNV-1a over the place indices.
  std::size_t h = 1469598103934665603ull;
  for (PlaceId p : places_) {
    h ^= idx(p) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

std::optional<std::string_view> SystemNet::label(TransId t) const {
  int l = label_id(t);
  if (l < 0) return std::nullopt;
  return std::string_view(labels_[static_cast<std::size_t>(l)]);
}

std::optional<PlaceId> SystemNet::find_place(std::string_view name) const {
  for (std::size_t i = 0; i < place_names_.size(); ++i)
    if (place_names_[i] == name) return place_id(i);
  return std::nullopt;
}

std::optional<TransId> SystemNet::find_transition(std::string_view name) const {
  for (std::size_t i = 0; i < trans_names_.size(); ++i)
    if (trans_names_[i] == name) return trans_id(i);
  return std::nullopt;
}

bool SystemNet::contains(Node n) const {
  if (auto* p = std::get_if<PlaceId>(&n)) return idx(*p) < num_places();
  return idx(std::get<TransId>(n)) < num_transitions();
}

NetBuilder::NetBuilder(const SystemNet& net) : net_(net) {}

PlaceId NetBuilder::add_place(std::string name) {
  net_.place_names_.push_back(std::move(name));
  net_.p_pre_.emplace_back();
  net_.p_post_.emplace_back();
  return place_id(net_.place_names_.size() - 1);
}

TransId NetBuilder::add_transition(std::string name,
                                   std::optional<std::string> label) {
  int l = -1;
  if (label) {
    auto it = std::find(net_.labels_.begin(), net_.labels_.end(), *label);
    if (it == net_.labels_.end()) {
      net_.labels_.push_back(*label);
      it = net_.labels_.end() - 1;
    }
    l = static_cast<int>(it - net_.labels_.begin());
  }
  net_.trans_names_.push_back(std::move(name));
  net_.trans_label_.push_back(l);
  net_.t_pre_.emplace_back();
  net_.t_post_.emplace_back();
  return trans_id(net_.trans_names_.size() - 1);
}

namespace {

template <class T>
void insert_sorted(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void check_ids(const SystemNet& net, PlaceId p, TransId t) {
  if (idx(p) >= net.num_places() || idx(t) >= net.num_transitions())
    throw Error(Errc::UnknownNode, "arc references an unknown node");
}

}  // namespace

void NetBuilder::add_arc(PlaceId from, TransId to) {
  check_ids(net_, from, to);
  insert_sorted(net_.t_pre_[idx(to)], from);
  insert_sorted(net_.p_post_[idx(from)], to);
}

void NetBuilder::add_arc(TransId from, PlaceId to) {
  check_ids(net_, to, from);
  insert_sorted(net_.t_post_[idx(from)], to);
  insert_sorted(net_.p_pre_[idx(to)], from);
}

void NetBuilder::set_initial(std::vector<PlaceId> places) {
  net_.raw_init_.clear();
  for (PlaceId p : places) net_.raw_init_.push_back(idx(p));
  net_.m_init_ = Marking(std::move(places));
}

void NetBuilder::set_final(std::vector<PlaceId> places) {
  net_.raw_final_.clear();
  for (PlaceId p : places) net_.raw_final_.push_back(idx(p));
  net_.m_final_ = Marking(std::move(places));
}

SystemNet NetBuilder::build_unchecked() const { return net_; }

SystemNet NetBuilder::build() const {
  auto violations = validate(net_);
  if (!violations.empty()) {
    std::string msg = "invalid net:";
    for (const auto& v : violations)
      msg += std::string(" ") + to_string(v.rule) + "(" + v.node + ")";
    throw Error(Errc::InvalidNet, msg);
  }
  return net_;
}

SystemNet make_net(const std::vector<TransitionSpec>& transitions,
                   const std::vector<std::string>& initial,
                   const std::vector<std::string>& final) {
  NetBuilder b;
  std::unordered_map<std::string, PlaceId> places;
  auto place = [&](const std::string& name) {
    auto it = places.find(name);
    if (it != places.end()) return it->second;
    PlaceId p = b.add_place(name);
    places.emplace(name, p);
    return p;
  };
  std::vector<PlaceId> init, fin;
  for (const auto& n : initial) init.push_back(place(n));
  for (const auto& n : final) fin.push_back(place(n));
  for (const auto& spec : transitions) {
    TransId t = b.add_transition(spec.name, spec.label);
    for (const auto& n : spec.inputs) b.add_arc(place(n), t);
    for (const auto& n : spec.outputs) b.add_arc(t, place(n));
  }
  b.set_initial(std::move(init));
  b.set_final(std::move(fin));
  return b.build();
}

std::vector<Node> preset(const SystemNet& net, Node x) {
  if (!net.contains(x)) throw Error(Errc::UnknownNode, "unknown node id");
  std::vector<Node> out;
  if (auto* p = std::get_if<PlaceId>(&x)) {
    for (TransId t : net.preset(*p)) out.emplace_back(t);
  } else {
    for (PlaceId p : net.preset(std::get<TransId>(x))) out.emplace_back(p);
  }
  return out;
}

std::vector<Node> postset(const SystemNet& net, Node x) {
  if (!net.contains(x)) throw Error(Errc::UnknownNode, "unknown node id");
  std::vector<Node> out;
  if (auto* p = std::get_if<PlaceId>(&x)) {
    for (TransId t : net.postset(*p)) out.emplace_back(t);
  } else {
    for (PlaceId p : net.postset(std::get<TransId>(x))) out.emplace_back(p);
  }
  return out;
}

bool is_enabled(const SystemNet& net, const Marking& m, TransId t) {
  auto pre = net.preset(t);
  return std::includes(m.begin(), m.end(), pre.begin(), pre.end());
}

std::vector<TransId> enabled(const SystemNet& net, const Marking& m) {
  std::vector<TransId> out;
  for (std::size_t i = 0; i < net.num_transitions(); ++i)
    if (is_enabled(net, m, trans_id(i))) out.push_back(trans_id(i));
  return out;
}

Marking fire(const SystemNet& net, const Marking& m, TransId t) {
  if (idx(t) >= net.num_transitions())
    throw Error(Errc::UnknownNode, "unknown transition");
  if (!is_enabled(net, m, t))
    throw Error(Errc::NotEnabled, "transition " + net.name(t) + " is not enabled");
  auto pre = net.preset(t);
  auto post = net.postset(t);
  std::vector<PlaceId> rest;
  std::set_difference(m.begin(), m.end(), pre.begin(), pre.end(),
                      std::back_inserter(rest));
  std::vector<PlaceId> out;
  std::set_union(rest.begin(), rest.end(), post.begin(), post.end(),
                 std::back_inserter(out));
  if (out.size() != rest.size() + post.size())
    throw Error(Errc::UnsafeMarking,
                "firing " + net.name(t) + " puts a second token on a place");
  return Marking(std::move(out));
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::NoPlaces: return "NoPlaces";
    case Rule::TransitionNoInput: return "TransitionNoInput";
    case Rule::TransitionNoOutput: return "TransitionNoOutput";
    case Rule::UnknownPlace: return "UnknownPlace";
    case Rule::DuplicateMarkingEntry: return "DuplicateMarkingEntry";
    case Rule::DuplicateName: return "DuplicateName";
  }
  return "?";
}

std::vector<Violation> validate(const SystemNet& net) {
  std::vector<Violation> out;
  if (net.num_places() == 0) out.push_back({Rule::NoPlaces, "", "net has no places"});
  for (std::size_t i = 0; i < net.num_transitions(); ++i) {
    TransId t = trans_id(i);
    if (net.preset(t).empty())
      out.push_back({Rule::TransitionNoInput, net.name(t), "empty preset"});
    if (net.postset(t).empty())
      out.push_back({Rule::TransitionNoOutput, net.name(t), "empty postset"});
  }
  auto check_marking = [&](const std::vector<std::uint32_t>& raw,
                           const char* which) {
    std::unordered_set<std::uint32_t> seen;
    for (std::uint32_t p : raw) {
      if (p >= net.num_places()) {
        out.push_back({Rule::UnknownPlace, "#" + std::to_string(p),
                       std::string(which) + " marking references unknown place"});
      } else if (!seen.insert(p).second) {
        out.push_back({Rule::DuplicateMarkingEntry, net.name(place_id(p)),
                       std::string(which) + " marking puts two tokens on a place"});
      }
    }
  };
  check_marking(net.raw_init_, "initial");
  check_marking(net.raw_final_, "final");
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < net.num_places(); ++i)
    if (!names.insert(net.name(place_id(i))).second)
      out.push_back({Rule::DuplicateName, net.name(place_id(i)), "place name reused"});
  for (std::size_t i = 0; i < net.num_transitions(); ++i)
    if (!names.insert(net.name(trans_id(i))).second)
      out.push_back({Rule::DuplicateName, net.name(trans_id(i)), "node name reused"});
  return out;
}

std::optional<std::vector<Marking>> reachable_markings(const SystemNet& net,
                                                       std::size_t limit) {
  std::vector<Marking> order{net.initial_marking()};
  std::unordered_set<Marking, MarkingHash> seen{net.initial_marking()};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (TransId t : enabled(net, order[head])) {
      Marking next = fire(net, order[head], t);
      if (seen.insert(next).second) {
        if (order.size() >= limit) return std::nullopt;
        order.push_back(std::move(next));
      }
    }
  }
  return order;
}

}  // namespace ua
