#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ua {

// Places and transitions live in separate dense index spaces.
enum class PlaceId : std::uint32_t {};
enum class TransId : std::uint32_t {};

constexpr std::uint32_t idx(PlaceId p) { return static_cast<std::uint32_t>(p); }
constexpr std::uint32_t idx(TransId t) { return static_cast<std::uint32_t>(t); }
constexpr PlaceId place_id(std::size_t i) { return static_cast<PlaceId>(i); }
constexpr TransId trans_id(std::size_t i) { return static_cast<TransId>(i); }

using Node = std::variant<PlaceId, TransId>;

/// A 1-safe marking: the sorted set of marked places.
class Marking {
 public:
  Marking() = default;
  Marking(std::initializer_list<PlaceId> places);
  explicit Marking(std::vector<PlaceId> places);

  bool contains(PlaceId p) const;
  bool empty() const { return places_.empty(); }
  std::size_t size() const { return places_.size(); }
  std::span<const PlaceId> places() const { return places_; }
  auto begin() const { return places_.begin(); }
  auto end() const { return places_.end(); }

  std::size_t hash() const;

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking&, const Marking&) = default;

 private:
  std::vector<PlaceId> places_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const { return m.hash(); }
};

class NetBuilder;

/// Immutable labeled Petri net with initial and final marking (a system net).
/// Transition labels are interned; a silent transition carries no label.
class SystemNet {
 public:
  std::size_t num_places() const { return place_names_.size(); }
  std::size_t num_transitions() const { return trans_names_.size(); }

  const std::string& name(PlaceId p) const { return place_names_.at(idx(p)); }
  const std::string& name(TransId t) const { return trans_names_.at(idx(t)); }

  bool is_silent(TransId t) const { return label_id(t) < 0; }
  /// Label of `t`, or nullopt for a silent transition.
  std::optional<std::string_view> label(TransId t) const;
  /// Interned label index, -1 for silent.
  int label_id(TransId t) const { return trans_label_.at(idx(t)); }
  std::span<const std::string> label_table() const { return labels_; }

  std::span<const PlaceId> preset(TransId t) const { return t_pre_.at(idx(t)); }
  std::span<const PlaceId> postset(TransId t) const { return t_post_.at(idx(t)); }
  std::span<const TransId> preset(PlaceId p) const { return p_pre_.at(idx(p)); }
  std::span<const TransId> postset(PlaceId p) const { return p_post_.at(idx(p)); }

  const Marking& initial_marking() const { return m_init_; }
  const Marking& final_marking() const { return m_final_; }

  std::optional<PlaceId> find_place(std::string_view name) const;
  std::optional<TransId> find_transition(std::string_view name) const;

  bool contains(Node n) const;

 private:
  friend class NetBuilder;
  friend std::vector<struct Violation> validate(const SystemNet& net);

  std::vector<std::string> place_names_;
  std::vector<std::string> trans_names_;
  std::vector<std::string> labels_;
  std::vector<int> trans_label_;
  std::vector<std::vector<PlaceId>> t_pre_, t_post_;
  std::vector<std::vector<TransId>> p_pre_, p_post_;
  Marking m_init_, m_final_;
  // Raw marking entries as given to the builder, kept for validate().
  std::vector<std::uint32_t> raw_init_, raw_final_;
};

/// Incremental construction of a SystemNet.
class NetBuilder {
 public:
  NetBuilder() = default;
  /// Starts from a copy of an existing net.
  explicit NetBuilder(const SystemNet& net);

  PlaceId add_place(std::string name);
  /// `label == nullopt` makes a silent transition.
  TransId add_transition(std::string name, std::optional<std::string> label);
  void add_arc(PlaceId from, TransId to);
  void add_arc(TransId from, PlaceId to);
  void set_initial(std::vector<PlaceId> places);
  void set_final(std::vector<PlaceId> places);

  std::size_t num_places() const { return net_.place_names_.size(); }
  std::size_t num_transitions() const { return net_.trans_names_.size(); }

  /// Builds and validates; throws Error{InvalidNet} listing every violation.
  SystemNet build() const;
  /// Builds without validation so that malformed nets can be inspected.
  SystemNet build_unchecked() const;

 private:
  SystemNet net_;
};

/// Transition given by name, label and the names of its input/output places.
struct TransitionSpec {
  std::string name;
  std::optional<std::string> label;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

/// Builds a validated net from named arcs. Places are created in order of
/// first mention (markings first). Throws InvalidNet.
SystemNet make_net(const std::vector<TransitionSpec>& transitions,
                   const std::vector<std::string>& initial,
                   const std::vector<std::string>& final);

std::vector<Node> preset(const SystemNet& net, Node x);
std::vector<Node> postset(const SystemNet& net, Node x);

/// Transitions whose preset is contained in `m`, in index order.
std::vector<TransId> enabled(const SystemNet& net, const Marking& m);
bool is_enabled(const SystemNet& net, const Marking& m, TransId t);

/// Fires `t`. Throws NotEnabled, or UnsafeMarking when a produced token would
/// land on an already marked place.
Marking fire(const SystemNet& net, const Marking& m, TransId t);

enum class Rule {
  NoPlaces,
  TransitionNoInput,
  TransitionNoOutput,
  UnknownPlace,
  DuplicateMarkingEntry,
  DuplicateName,
};

const char* to_string(Rule r);

struct Violation {
  Rule rule;
  std::string node;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Empty iff every structural invariant of a system net holds.
std::vector<Violation> validate(const SystemNet& net);

/// All markings reachable from the initial marking (breadth first), or
/// nullopt when more than `limit` markings exist. Throws UnsafeMarking if a
/// reachable firing violates 1-safeness.
std::optional<std::vector<Marking>> reachable_markings(const SystemNet& net,
                                                       std::size_t limit);

}  // namespace ua

template <>
struct std::hash<ua::Marking> {
  std::size_t operator()(const ua::Marking& m) const { return m.hash(); }
};
