#include "unfold_align/heuristic.hpp"

#include <boost/multiprecision/gmp.hpp>

#include "unfold_align/error.hpp"
#include "unfold_align/lp.hpp"

namespace ua {

MarkingEquation::MarkingEquation(const SystemNet& net, std::vector<Cost> costs)
    : net_(&net) {
  for (Cost c : costs) costs_.push_back(c.ticks());
  const std::size_t nt = net.num_transitions();
  for (std::size_t p = 0; p < net.num_places(); ++p) {
    std::vector<int> row(nt, 0);
    bool any = false;
    for (TransId t : net.preset(place_id(p))) {
      row[idx(t)] += 1;
      any = true;
    }
    for (TransId t : net.postset(place_id(p))) {
      row[idx(t)] -= 1;
      any = true;
    }
    bool nonzero = false;
    for (int v : row) nonzero = nonzero || v != 0;
    if (any && nonzero) {
      incidence_.push_back(std::move(row));
      row_place_.push_back(place_id(p));
    } else {
      isolated_places_.push_back(place_id(p));
    }
  }
}

Cost MarkingEquation::estimate(const Marking& m) {
  auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  Cost c = solve(m);
  cache_.emplace(m, c);
  return c;
}

Cost MarkingEquation::solve(const Marking& m) {
  ++solves_;
  const Marking& target = net_->final_marking();
  auto delta = [&](PlaceId p) {
    return static_cast<int>(target.contains(p)) - static_cast<int>(m.contains(p));
  };
  // Places without a net effect cannot change their token count.
  for (PlaceId p : isolated_places_)
    if (delta(p) != 0) return Cost::infinity();
  std::vector<int> b;
  b.reserve(row_place_.size());
  for (PlaceId p : row_place_) b.push_back(delta(p));

  try {
    Simplex<Rational64> lp(incidence_, b, costs_);
    auto sol = lp.solve();
    if (sol.status != LpStatus::Optimal) return Cost::infinity();
    return Cost::from_ticks(sol.value.ceil());
  } catch (const Error& e) {
    if (e.code() != Errc::Overflow) throw;
  }
  ++fallbacks_;
  using boost::multiprecision::mpq_rational;
  Simplex<mpq_rational> lp(incidence_, b, costs_);
  auto sol = lp.solve();
  if (sol.status != LpStatus::Optimal) return Cost::infinity();
  boost::multiprecision::mpz_int q = numerator(sol.value) / denominator(sol.value);
  if (q * denominator(sol.value) != numerator(sol.value) && sol.value > 0) ++q;
  return Cost::from_ticks(q.convert_to<std::int64_t>());
}

Cost estimate_remaining(const MoveNet& spn, const Marking& m, const CostModel& cm) {
  MarkingEquation me(spn.net, transition_costs(spn, cm));
  return me.estimate(m);
}

}  // namespace ua
