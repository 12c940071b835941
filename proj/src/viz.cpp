#include "unfold_align/viz.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "text_util.hpp"

namespace ua {

namespace {

constexpr const char* kSyncColour = "#2e7d32";
constexpr const char* kLogColour = "#ef6c00";
constexpr const char* kModelColour = "#1565c0";
constexpr const char* kTauColour = "#9e9e9e";

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Splits `nodes` into the classes of the relation `linked` (its symmetric
/// transitive closure). Classes come out ordered by smallest member.
template <class Linked>
std::vector<std::vector<int>> components(const std::vector<int>& nodes, Linked linked) {
  const int n = static_cast<int>(nodes.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (linked(nodes[i], nodes[j])) uf.unite(i, j);
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(nodes[i]);
  }
  return out;
}

class Partitioner {
 public:
  explicit Partitioner(const LabeledDag& g)
      : reach_(transitive_closure(g.size(), g.edges)),
        reduced_(transitive_reduction(g.size(), g.edges)) {}

  Block build(const std::vector<int>& nodes) const {
    Block b;
    if (nodes.size() == 1) {
      b.node = nodes.front();
      return b;
    }
    auto seq = components(nodes, [&](int u, int v) { return !comparable(u, v); });
    if (seq.size() > 1) {
      // Classes of the incomparability relation are ordered all-before-all.
      std::sort(seq.begin(), seq.end(), [&](const auto& a, const auto& c) {
        return reach_[a.front()][c.front()];
      });
      b.kind = Block::Kind::Sequence;
      for (const auto& part : seq) b.children.push_back(build(part));
      return b;
    }
    auto par = components(nodes, [&](int u, int v) { return comparable(u, v); });
    if (par.size() > 1) {
      b.kind = Block::Kind::Parallel;
      for (const auto& part : par) b.children.push_back(build(part));
      return b;
    }
    b.kind = Block::Kind::Fallback;
    for (int v : nodes) {
      Block leaf;
      leaf.node = v;
      b.children.push_back(leaf);
    }
    for (auto [u, v] : reduced_)
      if (std::binary_search(nodes.begin(), nodes.end(), u) &&
          std::binary_search(nodes.begin(), nodes.end(), v))
        b.arrows.emplace_back(u, v);
    return b;
  }

  /// Longest chain ending at each node within `nodes`.
  std::vector<int> depths(const std::vector<int>& nodes) const {
    std::vector<int> order = nodes;
    auto ancestors = [&](int v) {
      int k = 0;
      for (int u : nodes) k += reach_[u][v];
      return k;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ancestors(a) < ancestors(b); });
    std::vector<int> depth(nodes.size(), 0);
    auto pos = [&](int v) {
      return std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin();
    };
    for (int v : order)
      for (int u : nodes)
        if (reach_[u][v]) depth[pos(v)] = std::max(depth[pos(v)], depth[pos(u)] + 1);
    return depth;
  }

 private:
  bool comparable(int u, int v) const { return reach_[u][v] || reach_[v][u]; }

  Reachability reach_;
  std::vector<Edge> reduced_;
};

struct Size {
  double w = 0, h = 0;
};

Size natural(const Block& b, const Partitioner& p) {
  switch (b.kind) {
    case Block::Kind::Leaf: return {1, 1};
    case Block::Kind::Sequence: {
      Size s;
      for (const auto& c : b.children) {
        Size k = natural(c, p);
        s.w += k.w;
        s.h = std::max(s.h, k.h);
      }
      return s;
    }
    case Block::Kind::Parallel: {
      Size s;
      for (const auto& c : b.children) {
        Size k = natural(c, p);
        s.w = std::max(s.w, k.w);
        s.h += k.h;
      }
      return s;
    }
    case Block::Kind::Fallback: {
      std::vector<int> nodes;
      for (const auto& c : b.children) nodes.push_back(c.node);
      auto depth = p.depths(nodes);
      int levels = *std::max_element(depth.begin(), depth.end()) + 1;
      std::vector<int> per(levels, 0);
      for (int d : depth) ++per[d];
      return {static_cast<double>(levels),
              static_cast<double>(*std::max_element(per.begin(), per.end()))};
    }
  }
  return {};
}

void place(Block& b, double x0, double x1, double y0, const Partitioner& p) {
  const Size s = natural(b, p);
  b.x0 = x0;
  b.x1 = x1;
  b.y0 = y0;
  b.y1 = y0 + s.h;
  switch (b.kind) {
    case Block::Kind::Leaf: break;
    case Block::Kind::Sequence: {
      const double scale = (x1 - x0) / s.w;
      double x = x0;
      for (auto& c : b.children) {
        double w = natural(c, p).w * scale;
        place(c, x, x + w, y0, p);
        x += w;
      }
      break;
    }
    case Block::Kind::Parallel: {
      double y = y0;
      for (auto& c : b.children) {
        place(c, x0, x1, y, p);
        y = c.y1;
      }
      break;
    }
    case Block::Kind::Fallback: {
      std::vector<int> nodes;
      for (const auto& c : b.children) nodes.push_back(c.node);
      auto depth = p.depths(nodes);
      const double col = (x1 - x0) / s.w;
      std::vector<int> used(static_cast<std::size_t>(s.w), 0);
      for (std::size_t i = 0; i < b.children.size(); ++i) {
        const int d = depth[i];
        place(b.children[i], x0 + d * col, x0 + (d + 1) * col, y0 + used[d]++, p);
      }
      break;
    }
  }
}

void collect(const Block& b, std::vector<Block>& leaves) {
  if (b.kind == Block::Kind::Leaf) {
    leaves[b.node] = b;
    leaves[b.node].children.clear();
    return;
  }
  for (const auto& c : b.children) collect(c, leaves);
}

void collect_arrows(const Block& b, std::vector<Edge>& out) {
  out.insert(out.end(), b.arrows.begin(), b.arrows.end());
  for (const auto& c : b.children) collect_arrows(c, out);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

ChevronLayout partition(const LabeledDag& g) {
  ChevronLayout layout;
  if (g.size() == 0) {
    layout.root.kind = Block::Kind::Sequence;
    return layout;
  }
  Partitioner p(g);
  std::vector<int> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  layout.root = p.build(all);
  const Size s = natural(layout.root, p);
  place(layout.root, 0, s.w, 0, p);
  layout.width = s.w;
  layout.height = s.h;
  layout.leaves.resize(g.size());
  collect(layout.root, layout.leaves);
  return layout;
}

std::string render_svg(const UAlignment& ua, const SvgOptions& opts) {
  const ChevronLayout log = partition(ua.log_side);
  const ChevronLayout model = partition(ua.model_side);
  const double label_w = 64;
  const double cw = opts.column_width, rh = opts.row_height;
  const double width_cols = std::max({log.width, model.width, 1.0});
  const double strip_w = width_cols * cw;
  const double log_h = std::max(log.height, 1.0) * rh;
  const double model_h = std::max(model.height, 1.0) * rh;
  const double log_top = opts.margin;
  const double model_top = log_top + log_h + opts.strip_gap;
  const double left = opts.margin + label_w;
  const double total_w = left + strip_w + opts.margin;
  const double total_h = model_top + model_h + opts.margin;
  // Leaves of a strip are stretched over the common strip width.
  const double log_scale = log.width > 0 ? width_cols / log.width : 1;
  const double model_scale = model.width > 0 ? width_cols / model.width : 1;

  std::vector<int> sync_model(ua.model_side.size(), -1);
  for (auto [l, m] : ua.phi) sync_model[m] = l;
  auto phi = ua.phi_map();

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(total_w)
     << "\" height=\"" << num(total_h) << "\" viewBox=\"0 0 " << num(total_w) << ' '
     << num(total_h) << "\">\n";
  os << "<defs>\n"
     << "<pattern id=\"stripes\" patternUnits=\"userSpaceOnUse\" width=\"8\" height=\"8\" "
        "patternTransform=\"rotate(45)\">"
     << "<rect width=\"8\" height=\"8\" fill=\"" << kLogColour << "\"/>"
     << "<rect width=\"3\" height=\"8\" fill=\"#ffffff\" fill-opacity=\"0.55\"/></pattern>\n"
     << "<marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" "
        "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"#424242\"/></marker>\n"
     << "</defs>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"" << opts.font_size << "\">\n";
  os << "<text x=\"" << num(opts.margin) << "\" y=\"" << num(log_top + log_h / 2)
     << "\" dominant-baseline=\"middle\">log</text>\n";
  os << "<text x=\"" << num(opts.margin) << "\" y=\"" << num(model_top + model_h / 2)
     << "\" dominant-baseline=\"middle\">model</text>\n";

  struct Box {
    double x0, x1, y0, y1;
  };
  auto box = [&](const Block& leaf, double top, double scale) {
    return Box{left + leaf.x0 * scale * cw + 2, left + leaf.x1 * scale * cw - 2,
               top + leaf.y0 * rh + 3, top + leaf.y1 * rh - 3};
  };
  auto chevron = [&](const Box& b, const std::string& id, const std::string& fill,
                     const std::string& label) {
    const double notch = std::min(10.0, (b.x1 - b.x0) / 4);
    const double mid = (b.y0 + b.y1) / 2;
    os << "<g id=\"" << id << "\"><polygon points=\"" << num(b.x0) << ',' << num(b.y0) << ' '
       << num(b.x1 - notch) << ',' << num(b.y0) << ' ' << num(b.x1) << ',' << num(mid) << ' '
       << num(b.x1 - notch) << ',' << num(b.y1) << ' ' << num(b.x0) << ',' << num(b.y1) << ' '
       << num(b.x0 + notch) << ',' << num(mid) << "\" fill=\"" << fill
       << "\" stroke=\"#ffffff\"/>";
    os << "<text x=\"" << num((b.x0 + b.x1) / 2 + notch / 2) << "\" y=\"" << num(mid)
       << "\" text-anchor=\"middle\" dominant-baseline=\"middle\" fill=\"#ffffff\">"
       << detail::xml_escape(label) << "</text></g>\n";
  };
  auto arrows = [&](const ChevronLayout& lay, double top, double scale) {
    std::vector<Edge> es;
    collect_arrows(lay.root, es);
    for (auto [u, v] : es) {
      Box a = box(lay.leaves[u], top, scale), c = box(lay.leaves[v], top, scale);
      os << "<line x1=\"" << num(a.x1) << "\" y1=\"" << num((a.y0 + a.y1) / 2) << "\" x2=\""
         << num(c.x0 + 4) << "\" y2=\"" << num((c.y0 + c.y1) / 2)
         << "\" stroke=\"#424242\" marker-end=\"url(#arrow)\"/>\n";
    }
  };

  for (int l = 0; l < ua.log_side.size(); ++l) {
    const bool sync = phi[l] >= 0;
    chevron(box(log.leaves[l], log_top, log_scale), "log-" + std::to_string(l),
            sync ? kSyncColour : "url(#stripes)", ua.log_side.labels[l]);
  }
  arrows(log, log_top, log_scale);
  for (int m = 0; m < ua.model_side.size(); ++m) {
    const char* fill = sync_model[m] >= 0 ? kSyncColour
                       : ua.model_silent[m] ? kTauColour
                                            : kModelColour;
    chevron(box(model.leaves[m], model_top, model_scale), "model-" + std::to_string(m), fill,
            ua.model_side.labels[m]);
  }
  arrows(model, model_top, model_scale);
  for (auto [l, m] : ua.phi) {
    Box a = box(log.leaves[l], log_top, log_scale);
    Box b = box(model.leaves[m], model_top, model_scale);
    os << "<line class=\"phi\" x1=\"" << num((a.x0 + a.x1) / 2) << "\" y1=\"" << num(a.y1)
       << "\" x2=\"" << num((b.x0 + b.x1) / 2) << "\" y2=\"" << num(b.y0) << "\" stroke=\""
       << kSyncColour << "\" stroke-dasharray=\"4 3\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string order_to_dot(const AlignmentOrder& order) {
  auto fill = [](NodeKind k) {
    switch (k) {
      case NodeKind::Sync: return kSyncColour;
      case NodeKind::Log: return kLogColour;
      case NodeKind::Model: return kModelColour;
      case NodeKind::Invisible: return kTauColour;
    }
    return "#000000";
  };
  std::ostringstream os;
  os << "digraph alignment {\n  rankdir=LR;\n  node [shape=box, style=filled, fontcolor=white];\n";
  for (std::size_t i = 0; i < order.nodes.size(); ++i) {
    const auto& n = order.nodes[i];
    os << "  n" << i << " [label=" << detail::dot_quote(n.display()) << ", fillcolor=\""
       << fill(n.kind) << "\"];\n";
  }
  for (const auto& e : order.edges) {
    const char* colour = e.log_dep && e.model_dep ? kSyncColour
                         : e.log_dep              ? kLogColour
                                                  : kModelColour;
    os << "  n" << e.from << " -> n" << e.to << " [color=\"" << colour << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ua
