#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unfold_align/petri_net.hpp"
#include "unfold_align/ptrace.hpp"

namespace ua {

// Nets ----------------------------------------------------------------------

/// {places:[id...], transitions:[{id,label|null}...], arcs:[[src,dst]...],
///  m_init:[...], m_final:[...]}. Throws Parse or InvalidNet.
SystemNet net_from_json(const nlohmann::json& j);
nlohmann::json net_to_json(const SystemNet& net);

/// PNML subset: places, transitions, arcs, initial markings, and an optional
/// final marking block. `final_marking` (place ids) overrides the file.
/// Transitions without a name or tagged invisible are silent.
SystemNet read_pnml(std::istream& in,
                    const std::optional<std::vector<std::string>>& final_marking = {});

/// Dispatches on the extension (.json or .pnml). For PNML without a final
/// marking, a sidecar `<file>.final.json` holding a list of place ids is
/// consulted. Throws Parse.
SystemNet read_net_file(const std::filesystem::path& path,
                        const std::optional<std::vector<std::string>>& final_marking = {});

// Logs ----------------------------------------------------------------------

struct LogData {
  std::vector<std::vector<RawEvent>> cases;  // first-appearance order
  std::vector<std::string> warnings;
};

/// RFC 3339 date-time or integer milliseconds since the epoch. Throws Parse.
std::int64_t parse_timestamp(const std::string& text);

/// Columns case, activity, start, end (any order, header required); an
/// optional id column. Empty end means end = start, with a warning.
LogData read_csv_log(std::istream& in);

/// A trace object {case, events:[{id,activity,start,end}]}, an array of
/// them, or {traces:[...]}.
LogData log_from_json(const nlohmann::json& j);

/// By extension: .csv or .json. Throws Parse.
LogData read_log_file(const std::filesystem::path& path);

/// Timestamps realising the trace's order exactly (end(a) < start(b) iff
/// a precedes b). Throws InvalidTrace unless the order is an interval order.
std::vector<RawEvent> ptrace_to_events(const PTrace& trace, std::int64_t origin_ms = 0,
                                       std::int64_t step_ms = 1000);

nlohmann::json events_to_json(const std::string& case_id, const std::vector<RawEvent>& events);
void write_csv_log(std::ostream& out, const std::vector<std::vector<RawEvent>>& cases);

/// Parses a JSON file; errors carry the byte position. Throws Parse.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace ua
