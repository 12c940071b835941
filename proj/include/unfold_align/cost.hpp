#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

namespace ua {

/// Exact move cost stored as an integer number of ticks, 1 unit = 10^4 ticks.
/// Alignment costs are sums of move costs, so the integer representation keeps
/// every comparison exact and deterministic.
class Cost {
 public:
  static constexpr std::int64_t kTicksPerUnit = 10000;

  constexpr Cost() = default;

  static constexpr Cost from_ticks(std::int64_t ticks) { return Cost(ticks); }
  static constexpr Cost units(std::int64_t u) { return Cost(u * kTicksPerUnit); }
  static constexpr Cost zero() { return Cost(0); }
  static constexpr Cost infinity() {
    return Cost(std::numeric_limits<std::int64_t>::max());
  }

  /// Parses a non-negative decimal with at most four fractional digits
  /// ("1", "0.0001", "2.5").
  static Cost parse(std::string_view text);

  constexpr std::int64_t ticks() const { return ticks_; }
  constexpr bool is_infinite() const { return ticks_ == infinity().ticks_; }
  double to_double() const {
    return static_cast<double>(ticks_) / static_cast<double>(kTicksPerUnit);
  }

  /// Shortest exact decimal rendering ("3.0001", "0", "inf").
  std::string to_string() const;

  // Saturating: anything plus infinity stays infinite.
  friend constexpr Cost operator+(Cost a, Cost b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return Cost(a.ticks_ + b.ticks_);
  }
  constexpr Cost& operator+=(Cost o) { return *this = *this + o; }
  friend constexpr Cost operator*(std::int64_t k, Cost c) {
    return Cost(k * c.ticks_);
  }

  friend constexpr auto operator<=>(Cost, Cost) = default;

 private:
  constexpr explicit Cost(std::int64_t t) : ticks_(t) {}
  std::int64_t ticks_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Cost c) {
  return os << c.to_string();
}

}  // namespace ua
