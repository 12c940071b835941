#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "unfold_align/aligner.hpp"
#include "unfold_align/petri_net.hpp"
#include "unfold_align/ptrace.hpp"

namespace ua {

enum class Engine { UnfoldCost, UnfoldHeuristic, ClassicPa };

const char* to_string(Engine e);
/// "unfold-cost", "unfold-heuristic" or "classic-pa".
std::optional<Engine> parse_engine(std::string_view name);
inline constexpr Engine kAllEngines[] = {Engine::UnfoldCost, Engine::UnfoldHeuristic,
                                         Engine::ClassicPa};

struct AlignOptions {
  Engine engine = Engine::UnfoldHeuristic;
  CostModel costs;
  std::chrono::milliseconds budget{3000};
  /// Unfolding engines only: collect every optimal run instead of the first.
  bool all_optimal = false;
  std::size_t max_events = 2'000'000;
};

enum class AlignStatus { Aligned, Timeout, NoAlignment };

const char* to_string(AlignStatus s);

struct TraceResult {
  AlignStatus status = AlignStatus::NoAlignment;
  Cost cost = Cost::infinity();
  std::vector<AlignmentOrder> orders;  // one per optimal run found
  std::vector<AlignmentRun> runs;      // the runs behind `orders`
  std::size_t events = 0;              // prefix events or closed markings
  std::size_t queue_peak = 0;
  double wall_ms = 0;
};

/// Builds the extended product and aligns with the selected engine. The wall
/// time covers product construction and search.
TraceResult align_trace(const PTrace& trace, const SystemNet& model, const AlignOptions& opts);

/// Worker count from UNFOLD_ALIGN_THREADS (default 1, at least 1).
int worker_count();

/// Runs `job(i)` for i in [0, n) on `threads` workers. Jobs must write to
/// disjoint slots; the call returns once all jobs are done.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& job);

}  // namespace ua
