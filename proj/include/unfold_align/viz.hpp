#pragma once

#include <string>
#include <vector>

#include "unfold_align/aligner.hpp"
#include "unfold_align/dag.hpp"

namespace ua {

/// Block of a chevron layout. Sequence children are totally ordered left to
/// right, Parallel children are mutually unordered and stacked. A Fallback
/// block holds a residual sub-order with neither cut; its leaves are placed
/// by depth and its reduced edges are drawn as arrows.
struct Block {
  enum class Kind { Leaf, Sequence, Parallel, Fallback };
  Kind kind = Kind::Leaf;
  int node = -1;                // Leaf only
  std::vector<Block> children;  // Sequence / Parallel / Fallback (leaves)
  std::vector<Edge> arrows;     // Fallback only, node indices of the graph
  // Geometry in column / row units.
  double x0 = 0, x1 = 0;
  double y0 = 0, y1 = 0;
};

struct ChevronLayout {
  Block root;
  std::vector<Block> leaves;  // by graph node; copies of the placed leaves
  double width = 0;           // columns
  double height = 0;          // rows
};

/// Recursive sequential / parallel partitioning of a DAG's induced order,
/// with placement. An empty graph yields an empty Sequence.
ChevronLayout partition(const LabeledDag& g);

struct SvgOptions {
  double column_width = 96;
  double row_height = 34;
  double strip_gap = 56;
  double margin = 16;
  int font_size = 12;
};

/// Two stacked chevron strips (log above, model below) with connectors for
/// synchronous pairs. Log moves are striped. Output is deterministic.
std::string render_svg(const UAlignment& ua, const SvgOptions& opts = {});

/// Graphviz rendering of an alignment order: nodes coloured by move kind,
/// edges by the side of the dependency.
std::string order_to_dot(const AlignmentOrder& order);

}  // namespace ua
