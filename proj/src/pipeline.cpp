#include "unfold_align/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "unfold_align/baseline.hpp"
#include "unfold_align/product.hpp"
#include "unfold_align/unfolder.hpp"

namespace ua {

const char* to_string(Engine e) {
  switch (e) {
    case Engine::UnfoldCost: return "unfold-cost";
    case Engine::UnfoldHeuristic: return "unfold-heuristic";
    case Engine::ClassicPa: return "classic-pa";
  }
  return "?";
}

std::optional<Engine> parse_engine(std::string_view name) {
  for (Engine e : kAllEngines)
    if (name == to_string(e)) return e;
  return std::nullopt;
}

const char* to_string(AlignStatus s) {
  switch (s) {
    case AlignStatus::Aligned: return "aligned";
    case AlignStatus::Timeout: return "timeout";
    case AlignStatus::NoAlignment: return "no-alignment";
  }
  return "?";
}

TraceResult align_trace(const PTrace& trace, const SystemNet& model, const AlignOptions& opts) {
  using clock = std::chrono::steady_clock;
  TraceResult res;
  const auto t0 = clock::now();
  const MoveNet spn = extend_with_target(synchronous_product(ptrace_to_trace_net(trace), model));
  if (opts.engine == Engine::ClassicPa) {
    AStarOptions ao;
    ao.timeout = opts.budget;
    auto r = astar_alignment(spn, opts.costs, ao);
    res.events = r.expanded;
    res.queue_peak = r.queue_peak;
    if (r.status == SearchStatus::Found) {
      res.status = AlignStatus::Aligned;
      res.cost = r.cost;
      res.runs.push_back(replay_sequence(spn, opts.costs, r.sequence));
    } else {
      res.status = r.status == SearchStatus::BudgetExceeded ? AlignStatus::Timeout
                                                            : AlignStatus::NoAlignment;
    }
  } else {
    UnfoldOptions uo;
    uo.order = opts.engine == Engine::UnfoldCost ? SearchOrder::Cost : SearchOrder::Heuristic;
    uo.stop_at_first = !opts.all_optimal;
    uo.timeout = opts.budget;
    uo.max_events = opts.max_events;
    auto r = unfold(spn, opts.costs, uo);
    res.events = r.stats.events;
    res.queue_peak = r.stats.queue_peak;
    if (r.status == UnfoldStatus::Found) {
      res.status = AlignStatus::Aligned;
      res.cost = r.lowest_cost;
      res.runs = std::move(r.runs);
    } else {
      res.status = r.status == UnfoldStatus::BudgetExceeded ? AlignStatus::Timeout
                                                            : AlignStatus::NoAlignment;
    }
  }
  for (const auto& run : res.runs) res.orders.push_back(run_to_alignment_order(run, spn));
  res.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  return res;
}

int worker_count() {
  const char* env = std::getenv("UNFOLD_ALIGN_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& job) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ua
