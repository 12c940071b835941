#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "unfold_align/cost.hpp"
#include "unfold_align/petri_net.hpp"
#include "unfold_align/product.hpp"

namespace ua {

/// Marking-equation lower bound on the remaining cost to a net's final
/// marking: the optimum of
///   minimize sum_t cost(t) x_t  s.t.  m + N x = m_final,  x >= 0
/// solved exactly, rounded up to a whole tick. Any completion costs a whole
/// number of ticks, so the rounded bound stays admissible. Infeasible
/// markings get Cost::infinity(). Results are cached per marking; one
/// instance belongs to one search engine.
class MarkingEquation {
 public:
  MarkingEquation(const SystemNet& net, std::vector<Cost> costs);

  Cost estimate(const Marking& m);

  std::size_t solves() const { return solves_; }
  std::size_t fallbacks() const { return fallbacks_; }
  std::size_t cache_size() const { return cache_.size(); }

 private:
  Cost solve(const Marking& m);

  const SystemNet* net_;
  std::vector<std::int64_t> costs_;
  std::vector<std::vector<int>> incidence_;  // rows: places with a non-zero row
  std::vector<PlaceId> row_place_;
  std::vector<PlaceId> isolated_places_;
  std::unordered_map<Marking, Cost, MarkingHash> cache_;
  std::size_t solves_ = 0;
  std::size_t fallbacks_ = 0;
};

/// One-shot estimate on an extended product net.
Cost estimate_remaining(const MoveNet& spn, const Marking& m, const CostModel& cm);

}  // namespace ua
