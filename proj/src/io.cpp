#include "unfold_align/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "unfold_align/error.hpp"

namespace ua {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& msg) { throw Error(Errc::Parse, msg); }

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) parse_error(std::string("missing array '") + key + "'");
  std::vector<std::string> out;
  for (const auto& v : j[key]) {
    if (!v.is_string()) parse_error(std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Nets

SystemNet net_from_json(const json& j) {
  if (!j.is_object()) parse_error("net must be a JSON object");
  NetBuilder b;
  std::unordered_map<std::string, PlaceId> places;
  std::unordered_map<std::string, TransId> transitions;
  for (const auto& id : string_list(j, "places")) {
    if (places.count(id)) parse_error("duplicate place id '" + id + "'");
    places.emplace(id, b.add_place(id));
  }
  if (!j.contains("transitions") || !j["transitions"].is_array())
    parse_error("missing array 'transitions'");
  for (const auto& t : j["transitions"]) {
    if (!t.is_object() || !t.contains("id") || !t["id"].is_string())
      parse_error("transition needs a string 'id'");
    const std::string id = t["id"].get<std::string>();
    if (transitions.count(id) || places.count(id)) parse_error("duplicate node id '" + id + "'");
    std::optional<std::string> label;
    if (t.contains("label") && !t["label"].is_null()) {
      if (!t["label"].is_string()) parse_error("label of '" + id + "' must be a string or null");
      label = t["label"].get<std::string>();
    }
    transitions.emplace(id, b.add_transition(id, label));
  }
  if (!j.contains("arcs") || !j["arcs"].is_array()) parse_error("missing array 'arcs'");
  for (const auto& a : j["arcs"]) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string())
      parse_error("arc must be a pair of ids");
    const auto src = a[0].get<std::string>(), dst = a[1].get<std::string>();
    if (auto p = places.find(src); p != places.end()) {
      auto t = transitions.find(dst);
      if (t == transitions.end()) parse_error("arc " + src + " -> " + dst + ": unknown transition");
      b.add_arc(p->second, t->second);
    } else if (auto t = transitions.find(src); t != transitions.end()) {
      auto q = places.find(dst);
      if (q == places.end()) parse_error("arc " + src + " -> " + dst + ": unknown place");
      b.add_arc(t->second, q->second);
    } else {
      parse_error("arc source '" + src + "' is unknown");
    }
  }
  auto marking = [&](const char* key) {
    std::vector<PlaceId> out;
    for (const auto& id : string_list(j, key)) {
      auto p = places.find(id);
      if (p == places.end()) parse_error(std::string(key) + " names unknown place '" + id + "'");
      out.push_back(p->second);
    }
    return out;
  };
  b.set_initial(marking("m_init"));
  b.set_final(marking("m_final"));
  return b.build();
}

json net_to_json(const SystemNet& net) {
  json places = json::array(), transitions = json::array(), arcs = json::array();
  for (std::size_t p = 0; p < net.num_places(); ++p) places.push_back(net.name(place_id(p)));
  for (std::size_t i = 0; i < net.num_transitions(); ++i) {
    TransId t = trans_id(i);
    auto label = net.label(t);
    transitions.push_back({{"id", net.name(t)},
                           {"label", label ? json(std::string(*label)) : json(nullptr)}});
    for (PlaceId p : net.preset(t)) arcs.push_back({net.name(p), net.name(t)});
    for (PlaceId p : net.postset(t)) arcs.push_back({net.name(t), net.name(p)});
  }
  json m_init = json::array(), m_final = json::array();
  for (PlaceId p : net.initial_marking()) m_init.push_back(net.name(p));
  for (PlaceId p : net.final_marking()) m_final.push_back(net.name(p));
  return {{"places", places}, {"transitions", transitions}, {"arcs", arcs},
          {"m_init", m_init}, {"m_final", m_final}};
}

namespace {

using boost::property_tree::ptree;

/// Collects place / transition / arc elements below `node`, descending into
/// pages.
void collect_pnml(const ptree& node, std::vector<const ptree*>& places,
                  std::vector<const ptree*>& transitions, std::vector<const ptree*>& arcs,
                  const ptree*& finals) {
  for (const auto& [tag, child] : node) {
    if (tag == "place") {
      places.push_back(&child);
    } else if (tag == "transition") {
      transitions.push_back(&child);
    } else if (tag == "arc") {
      arcs.push_back(&child);
    } else if (tag == "finalmarkings") {
      finals = &child;
    } else if (tag == "page" || tag == "net") {
      collect_pnml(child, places, transitions, arcs, finals);
    }
  }
}

}  // namespace

SystemNet read_pnml(std::istream& in, const std::optional<std::vector<std::string>>& final_marking) {
  ptree tree;
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    parse_error("PNML line " + std::to_string(e.line()) + ": " + e.message());
  }
  const ptree* root = tree.get_child_optional("pnml").get_ptr();
  if (!root) parse_error("PNML document lacks a <pnml> root");
  std::vector<const ptree*> places, transitions, arcs;
  const ptree* finals = nullptr;
  collect_pnml(*root, places, transitions, arcs, finals);

  NetBuilder b;
  std::unordered_map<std::string, PlaceId> place_ids;
  std::unordered_map<std::string, TransId> trans_ids;
  std::vector<PlaceId> init;
  for (const ptree* p : places) {
    const auto id = p->get<std::string>("<xmlattr>.id", "");
    if (id.empty()) parse_error("PNML place without id");
    PlaceId pid = b.add_place(id);
    place_ids.emplace(id, pid);
    const int tokens = p->get<int>("initialMarking.text", 0);
    if (tokens > 1) parse_error("place '" + id + "' holds more than one token");
    if (tokens == 1) init.push_back(pid);
  }
  for (const ptree* t : transitions) {
    const auto id = t->get<std::string>("<xmlattr>.id", "");
    if (id.empty()) parse_error("PNML transition without id");
    std::optional<std::string> label;
    if (auto name = t->get_optional<std::string>("name.text"); name && !name->empty())
      label = *name;
    for (const auto& [tag, child] : *t)
      if (tag == "toolspecific" && child.get<std::string>("<xmlattr>.activity", "") == "$invisible$")
        label.reset();
    trans_ids.emplace(id, b.add_transition(id, label));
  }
  for (const ptree* a : arcs) {
    const auto src = a->get<std::string>("<xmlattr>.source", "");
    const auto dst = a->get<std::string>("<xmlattr>.target", "");
    if (a->get<int>("inscription.text", 1) != 1) parse_error("weighted arc " + src + " -> " + dst);
    if (place_ids.count(src) && trans_ids.count(dst)) {
      b.add_arc(place_ids[src], trans_ids[dst]);
    } else if (trans_ids.count(src) && place_ids.count(dst)) {
      b.add_arc(trans_ids[src], place_ids[dst]);
    } else {
      parse_error("arc " + src + " -> " + dst + " does not join a place and a transition");
    }
  }
  b.set_initial(init);

  std::vector<PlaceId> fin;
  if (final_marking) {
    for (const auto& id : *final_marking) {
      if (!place_ids.count(id)) parse_error("final marking names unknown place '" + id + "'");
      fin.push_back(place_ids[id]);
    }
  } else if (finals) {
    for (const auto& [tag, marking] : *finals) {
      if (tag != "marking") continue;
      for (const auto& [ptag, p] : marking) {
        if (ptag != "place") continue;
        const auto id = p.get<std::string>("<xmlattr>.idref", "");
        if (p.get<int>("text", 0) > 0) {
          if (!place_ids.count(id)) parse_error("final marking names unknown place '" + id + "'");
          fin.push_back(place_ids[id]);
        }
      }
      break;
    }
  } else {
    parse_error("PNML net has no final marking; pass one explicitly");
  }
  b.set_final(fin);
  return b.build();
}

SystemNet read_net_file(const std::filesystem::path& path,
                        const std::optional<std::vector<std::string>>& final_marking) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".pnml") {
    std::istringstream in(read_file(path));
    auto fin = final_marking;
    std::filesystem::path sidecar = path;
    sidecar += ".final.json";
    if (!fin && std::filesystem::exists(sidecar)) {
      const json j = read_json_file(sidecar);
      if (!j.is_array()) parse_error(sidecar.string() + ": expected a list of place ids");
      fin = j.get<std::vector<std::string>>();
    }
    return read_pnml(in, fin);
  }
  return net_from_json(read_json_file(path));
}

// ---------------------------------------------------------------------------
// Logs

std::int64_t parse_timestamp(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string::npos) parse_error("empty timestamp");
  const std::string s = text.substr(first, text.find_last_not_of(" \t") - first + 1);
  if (std::all_of(s.begin() + (s[0] == '-'), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) parse_error("bad epoch timestamp '" + s + "'");
    return v;
  }
  int y, mo, d, h, mi, sec, n = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%*1[Tt ]%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &sec, &n) != 6)
    parse_error("bad RFC 3339 timestamp '" + s + "'");
  std::size_t pos = static_cast<std::size_t>(n);
  std::int64_t ms = 0;
  if (pos < s.size() && s[pos] == '.') {
    int digits = 0;
    for (++pos; pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); ++pos, ++digits)
      if (digits < 3) ms = ms * 10 + (s[pos] - '0');
    for (; digits < 3; ++digits) ms *= 10;
  }
  std::int64_t offset_min = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int oh, om;
    if (std::sscanf(s.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2)
      parse_error("bad offset in timestamp '" + s + "'");
    offset_min = (s[pos] == '-' ? -1 : 1) * (oh * 60 + om);
    pos += 6;
  } else {
    parse_error("timestamp '" + s + "' lacks a time zone");
  }
  if (pos != s.size()) parse_error("trailing characters in timestamp '" + s + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) parse_error("invalid date in timestamp '" + s + "'");
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t secs = days * 86400 + h * 3600 + mi * 60 + sec - offset_min * 60;
  return secs * 1000 + ms;
}

namespace {

std::vector<std::string> split_csv_line(std::istream& in, bool& ok) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false, any = false;
  ok = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return fields;
  fields.push_back(std::move(field));
  ok = true;
  return fields;
}

void group_into(LogData& log, std::vector<RawEvent> events) {
  for (auto& group : group_by_case(events)) log.cases.push_back(std::move(group));
}

}  // namespace

LogData read_csv_log(std::istream& in) {
  bool ok;
  auto header = split_csv_line(in, ok);
  if (!ok) parse_error("CSV log is empty");
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[lower(header[i])] = static_cast<int>(i);
  for (const char* need : {"case", "activity", "start"})
    if (!col.count(need)) parse_error(std::string("CSV header lacks column '") + need + "'");
  const int c_case = col["case"], c_act = col["activity"], c_start = col["start"];
  const int c_end = col.count("end") ? col["end"] : -1;
  const int c_id = col.count("id") ? col["id"] : -1;

  LogData log;
  std::vector<RawEvent> events;
  for (int line = 2;; ++line) {
    auto row = split_csv_line(in, ok);
    if (!ok) break;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      parse_error("CSV line " + std::to_string(line) + ": expected " +
                  std::to_string(header.size()) + " fields");
    RawEvent ev;
    ev.case_id = row[c_case];
    ev.activity = row[c_act];
    try {
      ev.start = parse_timestamp(row[c_start]);
      if (c_end < 0 || row[c_end].empty()) {
        ev.end = ev.start;
        log.warnings.push_back("line " + std::to_string(line) + ": missing end, using start");
      } else {
        ev.end = parse_timestamp(row[c_end]);
      }
    } catch (const Error& e) {
      parse_error("CSV line " + std::to_string(line) + ": " + e.what());
    }
    ev.id = c_id >= 0 ? row[c_id] : std::to_string(events.size());
    events.push_back(std::move(ev));
  }
  if (events.empty()) parse_error("CSV log holds no events");
  group_into(log, std::move(events));
  return log;
}

LogData log_from_json(const json& j) {
  LogData log;
  auto timestamp = [](const json& v) -> std::int64_t {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) return parse_timestamp(v.get<std::string>());
    parse_error("timestamp must be an integer or a string");
  };
  auto one = [&](const json& t) {
    if (!t.is_object() || !t.contains("case") || !t.contains("events") || !t["events"].is_array())
      parse_error("trace needs 'case' and an 'events' array");
    const std::string case_id = t["case"].is_string() ? t["case"].get<std::string>() : t["case"].dump();
    std::vector<RawEvent> events;
    for (const auto& e : t["events"]) {
      if (!e.is_object() || !e.contains("activity") || !e.contains("start"))
        parse_error("event of case '" + case_id + "' needs 'activity' and 'start'");
      RawEvent ev;
      ev.case_id = case_id;
      ev.activity = e["activity"].get<std::string>();
      ev.start = timestamp(e["start"]);
      if (e.contains("end") && !e["end"].is_null()) {
        ev.end = timestamp(e["end"]);
      } else {
        ev.end = ev.start;
        log.warnings.push_back("case " + case_id + ": missing end, using start");
      }
      if (e.contains("id")) ev.id = e["id"].is_string() ? e["id"].get<std::string>() : e["id"].dump();
      else ev.id = std::to_string(events.size());
      events.push_back(std::move(ev));
    }
    if (events.empty()) parse_error("case '" + case_id + "' has no events");
    log.cases.push_back(std::move(events));
  };
  if (j.is_array()) {
    for (const auto& t : j) one(t);
  } else if (j.is_object() && j.contains("traces")) {
    for (const auto& t : j["traces"]) one(t);
  } else {
    one(j);
  }
  return log;
}

LogData read_log_file(const std::filesystem::path& path) {
  if (lower(path.extension().string()) == ".csv") {
    std::ifstream in(path, std::ios::binary);
    if (!in) parse_error("cannot open " + path.string());
    return read_csv_log(in);
  }
  return log_from_json(read_json_file(path));
}

std::vector<RawEvent> ptrace_to_events(const PTrace& trace, std::int64_t origin_ms,
                                       std::int64_t step_ms) {
  const int n = trace.size();
  // Interval orders have predecessor sets forming a chain under inclusion.
  std::vector<boost::dynamic_bitset<>> pred(n, boost::dynamic_bitset<>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (trace.precedes(a, b)) pred[b].set(a);
  std::vector<boost::dynamic_bitset<>> chain = pred;
  std::sort(chain.begin(), chain.end(),
            [](const auto& x, const auto& y) { return x.count() < y.count(); });
  chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!chain[i - 1].is_subset_of(chain[i]))
      throw Error(Errc::InvalidTrace, "order of case " + trace.case_id() + " is not an interval order");
  auto rank = [&](const boost::dynamic_bitset<>& s) {
    return static_cast<std::int64_t>(std::find(chain.begin(), chain.end(), s) - chain.begin());
  };
  const auto horizon = static_cast<std::int64_t>(chain.size());
  std::vector<RawEvent> out;
  for (int e = 0; e < n; ++e) {
    std::int64_t first_in = horizon;
    for (std::size_t k = 0; k < chain.size(); ++k)
      if (chain[k][e]) {
        first_in = static_cast<std::int64_t>(k);
        break;
      }
    RawEvent ev;
    ev.case_id = trace.case_id();
    ev.activity = trace.label(e);
    ev.id = trace.event_id(e);
    ev.start = origin_ms + 2 * rank(pred[e]) * step_ms;
    ev.end = origin_ms + (2 * first_in - 1) * step_ms;
    out.push_back(std::move(ev));
  }
  return out;
}

json events_to_json(const std::string& case_id, const std::vector<RawEvent>& events) {
  json evs = json::array();
  for (const auto& e : events)
    evs.push_back({{"id", e.id}, {"activity", e.activity}, {"start", e.start}, {"end", e.end}});
  return {{"case", case_id}, {"events", evs}};
}

void write_csv_log(std::ostream& out, const std::vector<std::vector<RawEvent>>& cases) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  out << "case,activity,start,end,id\n";
  for (const auto& events : cases)
    for (const auto& e : events)
      out << field(e.case_id) << ',' << field(e.activity) << ',' << e.start << ',' << e.end << ','
          << field(e.id) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

}  // namespace ua
