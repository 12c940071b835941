// unfold-align: partially ordered alignments from the command line.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unfold_align/aligner.hpp"
#include "unfold_align/bench.hpp"
#include "unfold_align/error.hpp"
#include "unfold_align/io.hpp"
#include "unfold_align/pipeline.hpp"
#include "unfold_align/viz.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ua;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitTimeout = 2;

struct CostArgs {
  std::string log = "1";
  std::string model = "1";
  std::string tau = "0.0001";

  CostModel parse() const {
    CostModel cm{Cost::parse(log), Cost::parse(model), Cost::parse(tau)};
    cm.check();
    return cm;
  }
};

void add_cost_options(CLI::App* cmd, CostArgs& c) {
  cmd->add_option("--log-cost", c.log, "Cost of a log move")->capture_default_str();
  cmd->add_option("--model-cost", c.model, "Cost of a visible model move")->capture_default_str();
  cmd->add_option("--tau-cost", c.tau, "Cost of a silent model move")->capture_default_str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Parse, "cannot write " + path.string());
  out << text;
}

// align ------------------------------------------------------------------------

struct AlignArgs {
  std::string model, log, out = "out", engine = "unfold-heuristic";
  std::vector<std::string> formats{"json"};
  std::vector<std::string> final_marking;
  CostArgs costs;
  int budget_ms = 3000;
  bool all_optimal = false;
  int threads = 0;
};

int cmd_align(const AlignArgs& a) {
  AlignOptions opts;
  const auto engine = parse_engine(a.engine);
  if (!engine) throw Error(Errc::Parse, "unknown engine '" + a.engine + "'");
  opts.engine = *engine;
  opts.costs = a.costs.parse();
  opts.budget = std::chrono::milliseconds(a.budget_ms);
  opts.all_optimal = a.all_optimal;

  std::optional<std::vector<std::string>> final_marking;
  if (!a.final_marking.empty()) final_marking = a.final_marking;
  const SystemNet model = read_net_file(a.model, final_marking);
  const LogData log = read_log_file(a.log);
  for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";

  std::vector<PTrace> traces;
  for (const auto& events : log.cases) traces.push_back(derive_ptrace(events));
  auto variants = group_variants(traces);
  std::sort(variants.begin(), variants.end(), [&](const auto& x, const auto& y) {
    return traces[x.front()].case_id() < traces[y.front()].case_id();
  });

  std::vector<TraceResult> results(variants.size());
  const int threads = a.threads > 0 ? a.threads : worker_count();
  parallel_for(variants.size(), threads, [&](std::size_t v) {
    results[v] = align_trace(traces[variants[v].front()], model, opts);
  });

  fs::create_directories(a.out);
  auto wants = [&](const char* f) {
    return std::find(a.formats.begin(), a.formats.end(), f) != a.formats.end();
  };
  int aligned = 0, timeouts = 0, unaligned = 0;
  double cost_sum = 0;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const TraceResult& r = results[v];
    const PTrace& rep = traces[variants[v].front()];
    const std::string stem = "variant-" + std::to_string(v + 1);
    json members = json::array();
    for (std::size_t i : variants[v]) members.push_back(traces[i].case_id());
    if (r.status != AlignStatus::Aligned) {
      r.status == AlignStatus::Timeout ? ++timeouts : ++unaligned;
      json doc = {{"case", rep.case_id()}, {"status", to_string(r.status)}, {"cases", members}};
      if (wants("json")) write_file(fs::path(a.out) / (stem + ".json"), doc.dump(2) + "\n");
      std::cerr << "variant " << v + 1 << " (case " << rep.case_id() << "): " << to_string(r.status)
                << "\n";
      continue;
    }
    ++aligned;
    cost_sum += r.cost.to_double();
    for (std::size_t k = 0; k < r.orders.size(); ++k) {
      const std::string name = r.orders.size() == 1 ? stem : stem + "-" + std::to_string(k + 1);
      const UAlignment ua = decompose(r.orders[k], opts.costs);
      json doc = report_json(rep.case_id(), r.orders[k], ua);
      doc["status"] = to_string(r.status);
      doc["cases"] = members;
      doc["engine"] = to_string(opts.engine);
      if (wants("json")) write_file(fs::path(a.out) / (name + ".json"), doc.dump(2) + "\n");
      if (wants("svg")) write_file(fs::path(a.out) / (name + ".svg"), render_svg(ua));
      if (wants("dot")) write_file(fs::path(a.out) / (name + ".dot"), order_to_dot(r.orders[k]));
    }
  }
  char line[160];
  std::snprintf(line, sizeof line, "aligned %d variants, mean cost %.4f, timeouts %d", aligned,
                aligned ? cost_sum / aligned : 0.0, timeouts);
  std::cout << line << "\n";
  if (unaligned > 0) {
    std::cerr << "error: " << unaligned << " variants have no alignment (model not easy sound)\n";
    return kExitInput;
  }
  return timeouts > 0 ? kExitTimeout : kExitOk;
}

// diagnose ---------------------------------------------------------------------

int cmd_diagnose(const std::string& report_path, bool include_tau) {
  const json doc = read_json_file(report_path);
  if (!doc.contains("diagnostics")) throw Error(Errc::Parse, report_path + ": no 'diagnostics' object");
  const json& d = doc["diagnostics"];
  auto silent = [](const json& row) { return row.value("tau", false); };
  std::vector<std::string> rows;
  for (const auto& r : d.value("missing_events", json::array()))
    rows.push_back("missing event    | log has: " + r["label"].get<std::string>() + "; model lacks it");
  for (const auto& r : d.value("undesired_events", json::array()))
    if (include_tau || !silent(r))
      rows.push_back("undesired event  | model requires: " + r["label"].get<std::string>() +
                     "; log lacks it");
  for (const auto& r : d.value("missing_deps", json::array()))
    rows.push_back("missing dep      | log has: " + r["from_label"].get<std::string>() + " → " +
                   r["to_label"].get<std::string>() + "; model lacks it");
  for (const auto& r : d.value("undesired_deps", json::array()))
    if (include_tau || !silent(r))
      rows.push_back("undesired dep    | model requires: " + r["from_label"].get<std::string>() +
                     " → " + r["to_label"].get<std::string>() + "; log lacks it");
  std::cout << "case " << doc.value("case", std::string("?")) << ", cost "
            << doc.value("cost_exact", std::string("?")) << "\n";
  if (rows.empty()) {
    std::cout << "conforming\n";
  } else {
    for (const auto& r : rows) std::cout << r << "\n";
  }
  return kExitOk;
}

// bench ------------------------------------------------------------------------

struct BenchArgs {
  std::string preset = "desk";
  std::vector<int> parallelism, noise;
  int traces = 0, activities = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> engines{"all"};
  std::string out = "bench";
  int budget_ms = 3000;
  int threads = 0;
  CostArgs costs;
};

int cmd_bench(const BenchArgs& a) {
  CorpusSpec spec;
  if (a.preset == "smoke") {
    spec.n_traces = 10;
    spec.parallelism = {0, 70};
    spec.noise = {0, 25};
  } else if (a.preset != "desk") {
    throw Error(Errc::Parse, "unknown preset '" + a.preset + "'");
  }
  if (!a.parallelism.empty()) spec.parallelism = a.parallelism;
  if (!a.noise.empty()) spec.noise = a.noise;
  if (a.traces > 0) spec.n_traces = a.traces;
  if (a.activities > 0) spec.n_activities = a.activities;
  spec.seed = a.seed;

  std::vector<Engine> engines;
  for (const auto& name : a.engines) {
    if (name == "all") {
      engines.assign(std::begin(kAllEngines), std::end(kAllEngines));
    } else if (auto e = parse_engine(name)) {
      engines.push_back(*e);
    } else {
      throw Error(Errc::Parse, "unknown engine '" + name + "'");
    }
  }
  AlignOptions base;
  base.costs = a.costs.parse();
  base.budget = std::chrono::milliseconds(a.budget_ms);

  const auto records = run_bench(make_corpus(spec), engines, base,
                                 a.threads > 0 ? a.threads : worker_count());
  const auto summary = summarize(records);
  fs::create_directories(a.out);
  std::ofstream bench(fs::path(a.out) / "bench.csv"), sum(fs::path(a.out) / "summary.csv"),
      reg(fs::path(a.out) / "regression.csv");
  write_bench_csv(bench, records);
  write_summary_csv(sum, summary);
  write_regression_csv(reg, regress(summary));
  write_summary_csv(std::cout, summary);
  const bool any_timeout =
      std::any_of(records.begin(), records.end(), [](const BenchRecord& r) { return r.timed_out; });
  return any_timeout ? kExitTimeout : kExitOk;
}

// convert ----------------------------------------------------------------------

int cmd_convert(const std::string& in, const std::string& out) {
  const auto ext = [](const std::string& p) { return fs::path(p).extension().string(); };
  const std::string from = ext(in), to = ext(out);
  if (from == ".pnml" && to == ".json") {
    write_file(out, net_to_json(read_net_file(in)).dump(2) + "\n");
  } else if ((from == ".csv" || from == ".json") && (to == ".json" || to == ".csv")) {
    const LogData log = read_log_file(in);
    for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";
    if (to == ".csv") {
      std::ostringstream s;
      write_csv_log(s, log.cases);
      write_file(out, s.str());
    } else {
      json traces = json::array();
      for (const auto& events : log.cases) {
        const PTrace t = derive_ptrace(events);
        json doc = events_to_json(t.case_id(), events);
        json order = json::array();
        for (auto [u, v] : t.edges()) order.push_back({u, v});
        doc["order"] = order;
        traces.push_back(std::move(doc));
      }
      write_file(out, json{{"traces", traces}}.dump(2) + "\n");
    }
  } else {
    throw Error(Errc::Parse, "cannot convert " + from + " to " + to);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Align partially ordered event logs against Petri net models"};
  app.require_subcommand(1);

  AlignArgs align;
  auto* c_align = app.add_subcommand("align", "Align every trace variant of a log against a model");
  c_align->add_option("--model", align.model, "Model net (.json or .pnml)")->required();
  c_align->add_option("--log", align.log, "Event log (.csv or .json)")->required();
  c_align->add_option("--engine", align.engine, "unfold-cost, unfold-heuristic or classic-pa")
      ->capture_default_str();
  c_align->add_option("--budget-ms", align.budget_ms, "Time budget per variant")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_align->add_option("--out", align.out, "Output directory")->capture_default_str();
  c_align->add_option("--format", align.formats, "Any of json, svg, dot")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "svg", "dot"}));
  c_align->add_option("--final-marking", align.final_marking, "Final marking place ids (PNML)")
      ->delimiter(',');
  c_align->add_flag("--all-optimal", align.all_optimal, "Report every optimal run");
  c_align->add_option("--threads", align.threads, "Workers (default UNFOLD_ALIGN_THREADS or 1)");
  add_cost_options(c_align, align.costs);

  std::string report;
  bool include_tau = false;
  auto* c_diag = app.add_subcommand("diagnose", "Print the deviations recorded in a report");
  c_diag->add_option("report", report, "Report JSON written by align")->required();
  c_diag->add_flag("--include-tau", include_tau, "Also list silent model moves");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Run the synthetic benchmark");
  c_bench->add_option("--preset", bench.preset, "desk or smoke")->capture_default_str();
  c_bench->add_option("--parallelism", bench.parallelism, "Parallelism levels (%)")->delimiter(',');
  c_bench->add_option("--noise", bench.noise, "Noise levels (%)")->delimiter(',');
  c_bench->add_option("--traces", bench.traces, "Traces per log");
  c_bench->add_option("--activities", bench.activities, "Activities per model");
  c_bench->add_option("--seed", bench.seed, "Seed for models, logs and noise")->capture_default_str();
  c_bench->add_option("--engines", bench.engines, "Engines or 'all'")->delimiter(',');
  c_bench->add_option("--out", bench.out, "Output directory")->capture_default_str();
  c_bench->add_option("--budget-ms", bench.budget_ms, "Time budget per trace")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_bench->add_option("--threads", bench.threads, "Workers (default UNFOLD_ALIGN_THREADS or 1)");
  add_cost_options(c_bench, bench.costs);

  std::string conv_in, conv_out;
  auto* c_conv = app.add_subcommand("convert", "CSV <-> p-trace JSON, PNML -> net JSON");
  c_conv->add_option("input", conv_in)->required();
  c_conv->add_option("output", conv_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (c_align->parsed()) return cmd_align(align);
    if (c_diag->parsed()) return cmd_diagnose(report, include_tau);
    if (c_bench->parsed()) return cmd_bench(bench);
    if (c_conv->parsed()) return cmd_convert(conv_in, conv_out);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
