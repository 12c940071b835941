#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unfold_align/petri_net.hpp"
#include "unfold_align/pipeline.hpp"
#include "unfold_align/ptrace.hpp"

namespace ua {

// Models --------------------------------------------------------------------

struct GenSpec {
  int n_activities = 6;
  int parallelism_pct = 30;  // probability of the and-operator per inner node
  std::uint64_t seed = 1;
  bool no_loops = true;
  bool no_duplicates = true;
};

/// Random block-structured process tree over {seq, xor, and} (plus loops when
/// allowed), compiled to a 1-safe net and reduced by removing silent
/// transitions that only route tokens. Deterministic in the seed.
SystemNet generate_model(const GenSpec& spec);

/// Merges silent transitions whose single input (output) place is a private
/// link to one neighbour, and absorbs silent transitions at the initial and
/// final marking. Language and final-marking reachability are preserved.
SystemNet reduce_silent(const SystemNet& net);

// Logs ----------------------------------------------------------------------

/// Random plays from the initial to the final marking. Each visible firing
/// becomes an event; timestamps are laid out by causal depth so that
/// concurrent events overlap. The derived order contains the causal order of
/// the play. Cases are named "case-<i>".
std::vector<PTrace> simulate_log(const SystemNet& net, int n_traces, std::uint64_t seed);

struct NoiseSpec {
  int noise_pct = 0;
  std::uint64_t seed = 1;
  // Relative weights of the mutation operators.
  double remove_event = 1;
  double swap_order = 1;
  double insert_alien = 1;
};

struct NoisyLog {
  std::vector<PTrace> traces;
  std::vector<bool> mutated;
};

/// Selects each trace with probability noise_pct / 100 and applies one
/// weighted operator: drop an event (skipped on single-event traces), swap
/// the labels of an ordered pair, or add an event labelled "alien"
/// concurrent with a random event and sharing its neighbours.
NoisyLog inject_noise(const std::vector<PTrace>& log, const NoiseSpec& spec);

// Harness -------------------------------------------------------------------

struct BenchCase {
  int parallelism = 0;
  int noise = 0;
  SystemNet model;
  std::vector<PTrace> traces;
};

struct CorpusSpec {
  int n_activities = 6;
  int n_traces = 50;
  std::vector<int> parallelism{0, 30, 50, 70};
  std::vector<int> noise{0, 10, 25, 50};
  std::uint64_t seed = 1;
};

/// One model per parallelism level and one noisy log per noise level. The
/// clean log of a model is shared by all its noise levels.
std::vector<BenchCase> make_corpus(const CorpusSpec& spec);

struct BenchRecord {
  Engine engine = Engine::UnfoldHeuristic;
  int parallelism = 0;
  int noise = 0;
  int trace = 0;
  std::optional<Cost> cost;  // absent on timeout
  double wall_ms = 0;
  bool timed_out = false;
  std::size_t events = 0;
  std::size_t queue_peak = 0;
};

/// Aligns every trace of every case with each engine. Records come out in
/// (case, trace, engine) order regardless of `threads`.
std::vector<BenchRecord> run_bench(const std::vector<BenchCase>& cases,
                                   const std::vector<Engine>& engines,
                                   const AlignOptions& base, int threads = 1);

struct SummaryRow {
  Engine engine = Engine::UnfoldHeuristic;
  int parallelism = 0;
  int noise = 0;
  std::size_t traces = 0;
  double mean_ms = 0;    // over traces aligned within budget
  double median_ms = 0;
  double pct_aligned = 0;
};

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);

struct RegressionRow {
  Engine engine = Engine::UnfoldHeuristic;
  int parallelism = 0;
  double slope = 0;      // mean ms per noise percent
  double intercept = 0;
};

/// Least-squares line of mean_ms over noise, per (engine, parallelism).
std::vector<RegressionRow> regress(const std::vector<SummaryRow>& summary);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_regression_csv(std::ostream& out, const std::vector<RegressionRow>& rows);

}  // namespace ua
