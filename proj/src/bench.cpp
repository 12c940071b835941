#include "unfold_align/bench.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "unfold_align/error.hpp"

namespace ua {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finaliser over the combined words
  std::uint64_t z = a * 0x9e3779b97f4a7c15ull + b + 0x632be59bd9b4e019ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string activity_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "a" + std::to_string(i);
}

struct Tree {
  enum class Op { Leaf, Seq, Xor, And, Loop };
  Op op = Op::Leaf;
  std::string label;
  std::vector<Tree> kids;
};

Tree grow(const std::vector<std::string>& labels, std::mt19937_64& rng, const GenSpec& spec) {
  Tree t;
  if (labels.size() == 1) {
    t.label = labels.front();
    return t;
  }
  std::uniform_real_distribution<double> unit(0, 1);
  const double u = unit(rng);
  if (u < spec.parallelism_pct / 100.0) {
    t.op = Tree::Op::And;
  } else if (!spec.no_loops && unit(rng) < 0.15) {
    t.op = Tree::Op::Loop;
  } else {
    t.op = unit(rng) < 0.5 ? Tree::Op::Seq : Tree::Op::Xor;
  }
  const int n = static_cast<int>(labels.size());
  const int k = t.op == Tree::Op::Loop ? 2 : std::min(n, std::uniform_int_distribution<int>(2, 3)(rng));
  // k - 1 distinct cut points among the n - 1 gaps
  std::vector<int> gaps(n - 1);
  std::iota(gaps.begin(), gaps.end(), 1);
  std::shuffle(gaps.begin(), gaps.end(), rng);
  std::vector<int> cuts(gaps.begin(), gaps.begin() + (k - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);
  int from = 0;
  for (int c : cuts) {
    t.kids.push_back(grow({labels.begin() + from, labels.begin() + c}, rng, spec));
    from = c;
  }
  return t;
}

void collect_leaves(Tree& t, std::vector<Tree*>& out) {
  if (t.op == Tree::Op::Leaf) out.push_back(&t);
  for (auto& k : t.kids) collect_leaves(k, out);
}

/// Mutable net used while compiling and reducing.
struct Draft {
  struct Trans {
    std::optional<std::string> label;
    std::set<int> pre, post;
    bool alive = true;
  };
  int places = 0;
  std::vector<bool> place_alive;
  std::vector<Trans> trans;
  std::set<int> init, fin;

  int place() {
    place_alive.push_back(true);
    return places++;
  }
  int transition(std::optional<std::string> label, std::set<int> pre, std::set<int> post) {
    trans.push_back({std::move(label), std::move(pre), std::move(post), true});
    return static_cast<int>(trans.size()) - 1;
  }
  std::vector<int> producers(int p) const {
    std::vector<int> out;
    for (int t = 0; t < static_cast<int>(trans.size()); ++t)
      if (trans[t].alive && trans[t].post.count(p)) out.push_back(t);
    return out;
  }
  std::vector<int> consumers(int p) const {
    std::vector<int> out;
    for (int t = 0; t < static_cast<int>(trans.size()); ++t)
      if (trans[t].alive && trans[t].pre.count(p)) out.push_back(t);
    return out;
  }
};

void compile(const Tree& t, int in, int out, Draft& d) {
  switch (t.op) {
    case Tree::Op::Leaf:
      d.transition(t.label, {in}, {out});
      break;
    case Tree::Op::Seq: {
      int cur = in;
      for (std::size_t i = 0; i < t.kids.size(); ++i) {
        int next = i + 1 == t.kids.size() ? out : d.place();
        compile(t.kids[i], cur, next, d);
        cur = next;
      }
      break;
    }
    case Tree::Op::Xor:
      for (const auto& k : t.kids) compile(k, in, out, d);
      break;
    case Tree::Op::And: {
      std::set<int> starts, ends;
      for (const auto& k : t.kids) {
        int s = d.place(), e = d.place();
        compile(k, s, e, d);
        starts.insert(s);
        ends.insert(e);
      }
      d.transition(std::nullopt, {in}, starts);
      d.transition(std::nullopt, ends, {out});
      break;
    }
    case Tree::Op::Loop: {
      // Private entry so that the redo arc cannot re-enable sibling branches.
      int entry = d.place(), mid = d.place();
      d.transition(std::nullopt, {in}, {entry});
      compile(t.kids[0], entry, mid, d);
      compile(t.kids[1], mid, entry, d);
      d.transition(std::nullopt, {mid}, {out});
      break;
    }
  }
}

bool reduce_once(Draft& d) {
  auto only = [](const std::vector<int>& v, int x) { return v.size() == 1 && v[0] == x; };
  auto disjoint = [](const std::set<int>& a, const std::set<int>& b) {
    return std::none_of(a.begin(), a.end(), [&](int x) { return b.count(x) > 0; });
  };
  for (int t = 0; t < static_cast<int>(d.trans.size()); ++t) {
    auto& tr = d.trans[t];
    if (!tr.alive || tr.label) continue;
    auto private_inputs = [&] {
      return std::all_of(tr.pre.begin(), tr.pre.end(),
                         [&](int p) { return only(d.consumers(p), t); });
    };
    if (tr.pre.size() == 1) {
      const int p = *tr.pre.begin();
      const auto prod = d.producers(p);
      if (!d.init.count(p) && !d.fin.count(p) && prod.size() == 1 && prod[0] != t &&
          only(d.consumers(p), t) && disjoint(d.trans[prod[0]].post, tr.post) &&
          !tr.post.count(p)) {
        auto& u = d.trans[prod[0]];
        u.post.erase(p);
        u.post.insert(tr.post.begin(), tr.post.end());
        tr.alive = false;
        d.place_alive[p] = false;
        return true;
      }
      if (d.init.count(p) && prod.empty() && only(d.consumers(p), t) && disjoint(d.init, tr.post)) {
        d.init.erase(p);
        d.init.insert(tr.post.begin(), tr.post.end());
        tr.alive = false;
        d.place_alive[p] = false;
        return true;
      }
    }
    if (tr.post.size() == 1) {
      const int q = *tr.post.begin();
      const auto cons = d.consumers(q);
      if (!d.init.count(q) && !d.fin.count(q) && only(d.producers(q), t) && cons.size() == 1 &&
          cons[0] != t && private_inputs() && disjoint(d.trans[cons[0]].pre, tr.pre)) {
        auto& v = d.trans[cons[0]];
        v.pre.erase(q);
        v.pre.insert(tr.pre.begin(), tr.pre.end());
        tr.alive = false;
        d.place_alive[q] = false;
        return true;
      }
      if (d.fin.count(q) && cons.empty() && only(d.producers(q), t) && private_inputs() &&
          disjoint(d.fin, tr.pre) && !tr.pre.count(q)) {
        d.fin.erase(q);
        d.fin.insert(tr.pre.begin(), tr.pre.end());
        tr.alive = false;
        d.place_alive[q] = false;
        return true;
      }
    }
  }
  return false;
}

SystemNet realise(const Draft& d) {
  NetBuilder b;
  std::vector<PlaceId> ids(d.places);
  for (int p = 0; p < d.places; ++p)
    if (d.place_alive[p]) ids[p] = b.add_place("p" + std::to_string(b.num_places()));
  for (const auto& t : d.trans) {
    if (!t.alive) continue;
    TransId id = b.add_transition("t" + std::to_string(b.num_transitions()), t.label);
    for (int p : t.pre) b.add_arc(ids[p], id);
    for (int p : t.post) b.add_arc(id, ids[p]);
  }
  std::vector<PlaceId> init, fin;
  for (int p : d.init) init.push_back(ids[p]);
  for (int p : d.fin) fin.push_back(ids[p]);
  b.set_initial(init);
  b.set_final(fin);
  return b.build();
}

Draft draft_of(const SystemNet& net) {
  Draft d;
  for (std::size_t p = 0; p < net.num_places(); ++p) d.place();
  for (std::size_t i = 0; i < net.num_transitions(); ++i) {
    TransId t = trans_id(i);
    std::set<int> pre, post;
    for (PlaceId p : net.preset(t)) pre.insert(static_cast<int>(idx(p)));
    for (PlaceId p : net.postset(t)) post.insert(static_cast<int>(idx(p)));
    auto label = net.label(t);
    d.transition(label ? std::optional<std::string>(std::string(*label)) : std::nullopt, pre, post);
  }
  for (PlaceId p : net.initial_marking()) d.init.insert(static_cast<int>(idx(p)));
  for (PlaceId p : net.final_marking()) d.fin.insert(static_cast<int>(idx(p)));
  return d;
}

}  // namespace

SystemNet reduce_silent(const SystemNet& net) {
  Draft d = draft_of(net);
  while (reduce_once(d)) {
  }
  return realise(d);
}

SystemNet generate_model(const GenSpec& spec) {
  if (spec.n_activities < 1) throw std::invalid_argument("at least one activity required");
  std::mt19937_64 rng(spec.seed);
  std::vector<std::string> labels;
  for (int i = 0; i < spec.n_activities; ++i) labels.push_back(activity_name(i));
  Tree tree = grow(labels, rng, spec);
  if (!spec.no_duplicates && labels.size() > 1) {
    std::vector<Tree*> leaves;
    collect_leaves(tree, leaves);
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    if (a != b) leaves[a]->label = leaves[b]->label;
  }
  Draft d;
  const int in = d.place(), out = d.place();
  d.init = {in};
  d.fin = {out};
  compile(tree, in, out, d);
  while (reduce_once(d)) {
  }
  return realise(d);
}

std::vector<PTrace> simulate_log(const SystemNet& net, int n_traces, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PTrace> out;
  constexpr int kMaxSteps = 400;
  constexpr int kMaxAttempts = 100;
  for (int c = 0; c < n_traces; ++c) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw Error(Errc::InvalidNet, "random plays do not reach the final marking");
      Marking m = net.initial_marking();
      // Visible events each token causally depends on.
      std::vector<std::vector<int>> origin(net.num_places());
      std::vector<std::string> labels;
      std::vector<std::vector<int>> preds;
      int steps = 0;
      for (; m != net.final_marking() && steps < kMaxSteps; ++steps) {
        auto en = enabled(net, m);
        if (en.empty()) break;
        TransId t = en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
        std::vector<int> deps;
        for (PlaceId p : net.preset(t)) {
          deps.insert(deps.end(), origin[idx(p)].begin(), origin[idx(p)].end());
          origin[idx(p)].clear();
        }
        std::sort(deps.begin(), deps.end());
        deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
        std::vector<int> produced = deps;
        if (auto label = net.label(t)) {
          labels.emplace_back(*label);
          preds.push_back(deps);
          produced = {static_cast<int>(labels.size()) - 1};
        }
        m = fire(net, m, t);
        for (PlaceId p : net.postset(t)) origin[idx(p)] = produced;
      }
      if (m != net.final_marking() || labels.empty()) continue;

      const int n = static_cast<int>(labels.size());
      std::vector<int> depth(n, 0);
      for (int e = 0; e < n; ++e)
        for (int p : preds[e]) depth[e] = std::max(depth[e], depth[p] + 1);
      const int horizon = *std::max_element(depth.begin(), depth.end()) + 1;
      std::vector<int> next_depth(n, horizon);
      for (int e = 0; e < n; ++e)
        for (int p : preds[e]) next_depth[p] = std::min(next_depth[p], depth[e]);
      std::vector<RawEvent> events;
      const std::string case_id = "case-" + std::to_string(c);
      for (int e = 0; e < n; ++e) {
        RawEvent ev;
        ev.case_id = case_id;
        ev.activity = labels[e];
        ev.id = "e" + std::to_string(e);
        ev.start = 2000LL * depth[e];
        ev.end = 2000LL * next_depth[e] - 1000;
        events.push_back(std::move(ev));
      }
      out.push_back(derive_ptrace(events));
      break;
    }
  }
  return out;
}

namespace {

PTrace rebuild(const PTrace& t, std::vector<std::string> labels, std::vector<Edge> order,
               std::vector<std::string> ids) {
  return PTrace(t.case_id(), std::move(labels), std::move(order), std::move(ids));
}

std::vector<std::string> ids_of(const PTrace& t) {
  std::vector<std::string> ids;
  for (int e = 0; e < t.size(); ++e) ids.push_back(t.event_id(e));
  return ids;
}

std::vector<std::string> labels_of(const PTrace& t) { return t.graph().labels; }

}  // namespace

NoisyLog inject_noise(const std::vector<PTrace>& log, const NoiseSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0, 1);
  std::discrete_distribution<int> op({spec.remove_event, spec.swap_order, spec.insert_alien});
  NoisyLog out;
  for (const PTrace& t : log) {
    const bool selected = unit(rng) < spec.noise_pct / 100.0;
    if (!selected) {
      out.traces.push_back(t);
      out.mutated.push_back(false);
      continue;
    }
    const int n = t.size();
    std::optional<PTrace> next;
    switch (op(rng)) {
      case 0: {
        if (n <= 1) break;
        const int gone = std::uniform_int_distribution<int>(0, n - 1)(rng);
        auto remap = [&](int e) { return e < gone ? e : e - 1; };
        std::vector<Edge> order;
        for (auto [a, b] : t.closure())
          if (a != gone && b != gone) order.emplace_back(remap(a), remap(b));
        auto labels = labels_of(t);
        auto ids = ids_of(t);
        labels.erase(labels.begin() + gone);
        ids.erase(ids.begin() + gone);
        next = rebuild(t, std::move(labels), std::move(order), std::move(ids));
        break;
      }
      case 1: {
        std::vector<Edge> pairs;
        for (auto [a, b] : t.closure())
          if (t.label(a) != t.label(b)) pairs.emplace_back(a, b);
        if (pairs.empty()) break;
        auto [a, b] = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
        auto labels = labels_of(t);
        std::swap(labels[a], labels[b]);
        next = rebuild(t, std::move(labels), t.edges(), ids_of(t));
        break;
      }
      default: {
        const int twin = std::uniform_int_distribution<int>(0, n - 1)(rng);
        std::vector<Edge> order = t.edges();
        for (int x = 0; x < n; ++x) {
          if (t.precedes(x, twin)) order.emplace_back(x, n);
          if (t.precedes(twin, x)) order.emplace_back(n, x);
        }
        auto labels = labels_of(t);
        auto ids = ids_of(t);
        labels.push_back("alien");
        ids.push_back("alien");
        next = rebuild(t, std::move(labels), std::move(order), std::move(ids));
        break;
      }
    }
    out.mutated.push_back(next.has_value());
    out.traces.push_back(next ? std::move(*next) : t);
  }
  return out;
}

std::vector<BenchCase> make_corpus(const CorpusSpec& spec) {
  std::vector<BenchCase> cases;
  for (int par : spec.parallelism) {
    GenSpec g;
    g.n_activities = spec.n_activities;
    g.parallelism_pct = par;
    g.seed = mix(spec.seed, static_cast<std::uint64_t>(par));
    SystemNet model = generate_model(g);
    auto clean = simulate_log(model, spec.n_traces, mix(g.seed, 1));
    for (int noise : spec.noise) {
      NoiseSpec ns;
      ns.noise_pct = noise;
      ns.seed = mix(g.seed, 100 + static_cast<std::uint64_t>(noise));
      cases.push_back({par, noise, model, inject_noise(clean, ns).traces});
    }
  }
  return cases;
}

std::vector<BenchRecord> run_bench(const std::vector<BenchCase>& cases,
                                   const std::vector<Engine>& engines,
                                   const AlignOptions& base, int threads) {
  struct Job {
    std::size_t c;
    std::size_t t;
    Engine engine;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cases.size(); ++c)
    for (std::size_t t = 0; t < cases[c].traces.size(); ++t)
      for (Engine e : engines) jobs.push_back({c, t, e});
  std::vector<BenchRecord> records(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    const BenchCase& bc = cases[job.c];
    AlignOptions opts = base;
    opts.engine = job.engine;
    auto r = align_trace(bc.traces[job.t], bc.model, opts);
    BenchRecord& rec = records[i];
    rec.engine = job.engine;
    rec.parallelism = bc.parallelism;
    rec.noise = bc.noise;
    rec.trace = static_cast<int>(job.t);
    rec.wall_ms = r.wall_ms;
    rec.timed_out = r.status == AlignStatus::Timeout;
    if (r.status == AlignStatus::Aligned) rec.cost = r.cost;
    rec.events = r.events;
    rec.queue_peak = r.queue_peak;
  });
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  std::map<std::tuple<int, int, int>, std::vector<const BenchRecord*>> groups;
  for (const auto& r : records)
    groups[{r.parallelism, r.noise, static_cast<int>(r.engine)}].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [key, recs] : groups) {
    SummaryRow row;
    row.parallelism = std::get<0>(key);
    row.noise = std::get<1>(key);
    row.engine = static_cast<Engine>(std::get<2>(key));
    row.traces = recs.size();
    std::vector<double> ms;
    for (const auto* r : recs)
      if (r->cost) ms.push_back(r->wall_ms);
    row.pct_aligned = recs.empty() ? 0 : 100.0 * static_cast<double>(ms.size()) / static_cast<double>(recs.size());
    if (!ms.empty()) {
      row.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
      std::sort(ms.begin(), ms.end());
      const std::size_t h = ms.size() / 2;
      row.median_ms = ms.size() % 2 ? ms[h] : (ms[h - 1] + ms[h]) / 2;
    }
    out.push_back(row);
  }
  return out;
}

std::vector<RegressionRow> regress(const std::vector<SummaryRow>& summary) {
  std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> pts;
  for (const auto& s : summary)
    pts[{s.parallelism, static_cast<int>(s.engine)}].emplace_back(s.noise, s.mean_ms);
  std::vector<RegressionRow> out;
  for (const auto& [key, xy] : pts) {
    RegressionRow row;
    row.parallelism = key.first;
    row.engine = static_cast<Engine>(key.second);
    const double n = static_cast<double>(xy.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    row.slope = den != 0 ? (n * sxy - sx * sy) / den : 0;
    row.intercept = n > 0 ? (sy - row.slope * sx) / n : 0;
    out.push_back(row);
  }
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "engine,parallelism,noise,trace,cost,wall_ms,timed_out,events,queue_peak\n";
  for (const auto& r : records) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out << to_string(r.engine) << ',' << r.parallelism << ',' << r.noise << ',' << r.trace << ','
        << (r.cost ? r.cost->to_string() : "") << ',' << ms << ',' << (r.timed_out ? 1 : 0) << ','
        << r.events << ',' << r.queue_peak << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "engine,parallelism,noise,traces,mean_ms,median_ms,pct_aligned\n";
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.1f", r.mean_ms, r.median_ms, r.pct_aligned);
    out << to_string(r.engine) << ',' << r.parallelism << ',' << r.noise << ',' << r.traces << ','
        << buf << '\n';
  }
}

void write_regression_csv(std::ostream& out, const std::vector<RegressionRow>& rows) {
  out << "engine,parallelism,slope_ms_per_noise_pct,intercept_ms\n";
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f,%.3f", r.slope, r.intercept);
    out << to_string(r.engine) << ',' << r.parallelism << ',' << buf << '\n';
  }
}

}  // namespace ua
