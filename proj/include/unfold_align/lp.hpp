#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <vector>

#include "unfold_align/error.hpp"

namespace ua {

/// Exact rational with 64-bit numerator and denominator. Every operation
/// either returns the exact reduced result or throws Error{Overflow}.
class Rational64 {
 public:
  constexpr Rational64() = default;
  constexpr Rational64(std::int64_t n) : num_(n) {}  // NOLINT: implicit by design of scalar types
  Rational64(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  /// Smallest integer >= value.
  std::int64_t ceil() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational64 operator+(const Rational64& a, const Rational64& b);
  friend Rational64 operator-(const Rational64& a, const Rational64& b);
  friend Rational64 operator*(const Rational64& a, const Rational64& b);
  friend Rational64 operator/(const Rational64& a, const Rational64& b);
  Rational64 operator-() const;
  Rational64& operator+=(const Rational64& o) { return *this = *this + o; }
  Rational64& operator-=(const Rational64& o) { return *this = *this - o; }
  Rational64& operator*=(const Rational64& o) { return *this = *this * o; }
  Rational64& operator/=(const Rational64& o) { return *this = *this / o; }

  friend bool operator==(const Rational64& a, const Rational64& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational64& a, const Rational64& b);

 private:
  static Rational64 from_wide(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational64& r);

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class Scalar>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Scalar value{};
  std::vector<Scalar> x;
  int pivots = 0;
};

/// Dense two-phase primal simplex for
///   minimize c.x  subject to  A x = b,  x >= 0
/// over an exact ordered field `Scalar`. Entering columns follow Dantzig's
/// rule, switching to Bland's rule after a run of degenerate pivots so the
/// method cannot cycle.
template <class Scalar>
class Simplex {
 public:
  Simplex(const std::vector<std::vector<int>>& a, const std::vector<int>& b,
          const std::vector<std::int64_t>& c)
      : m_(static_cast<int>(a.size())),
        n_(static_cast<int>(c.size())),
        width_(n_ + m_ + 1),
        tab_(static_cast<std::size_t>((m_ + 1) * width_), Scalar(0)),
        basis_(m_),
        cost_(c) {
    for (int i = 0; i < m_; ++i) {
      const int s = b[i] < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j)
        if (a[i][j] != 0) at(i, j) = Scalar(s * a[i][j]);
      at(i, n_ + i) = Scalar(1);
      at(i, rhs()) = Scalar(s * b[i]);
      basis_[i] = n_ + i;
    }
  }

  LpSolution<Scalar> solve() {
    LpSolution<Scalar> out;
    // Phase 1: minimise the sum of artificials.
    for (int j = 0; j <= rhs(); ++j) {
      if (j >= n_ && j < n_ + m_) continue;
      Scalar s(0);
      for (int i = 0; i < m_; ++i)
        if (!at(i, j).is_zero()) s -= at(i, j);
      obj(j) = s;
    }
    if (!iterate(n_ + m_, out.pivots)) return out;  // cannot be unbounded
    if (obj(rhs()).sign() != 0) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive remaining artificials out of the basis.
    std::vector<bool> dead(m_, false);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_ && col < 0; ++j)
        if (!at(i, j).is_zero()) col = j;
      if (col < 0) {
        dead[i] = true;  // redundant equation
      } else {
        pivot(i, col);
        ++out.pivots;
      }
    }
    dead_ = dead;
    // Phase 2 objective row.
    for (int j = 0; j <= rhs(); ++j) obj(j) = Scalar(0);
    for (int j = 0; j < n_; ++j) obj(j) = Scalar(cost_[j]);
    for (int i = 0; i < m_; ++i) {
      if (dead_[i] || basis_[i] >= n_) continue;
      const Scalar cb(cost_[basis_[i]]);
      if (cb.is_zero()) continue;
      for (int j = 0; j <= rhs(); ++j)
        if (!at(i, j).is_zero()) obj(j) -= cb * at(i, j);
    }
    if (!iterate(n_, out.pivots)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.value = -obj(rhs());
    out.x.assign(n_, Scalar(0));
    for (int i = 0; i < m_; ++i)
      if (!dead_[i] && basis_[i] < n_) out.x[basis_[i]] = at(i, rhs());
    return out;
  }

 private:
  Scalar& at(int i, int j) { return tab_[static_cast<std::size_t>(i * width_ + j)]; }
  Scalar& obj(int j) { return at(m_, j); }
  int rhs() const { return n_ + m_; }

  // Returns false if the problem is unbounded.
  bool iterate(int allowed_cols, int& pivots) {
    int degenerate_run = 0;
    for (;;) {
      const bool bland = degenerate_run > 2 * (m_ + n_);
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (obj(j).sign() >= 0) continue;
        if (enter < 0 || (!bland && obj(j) < obj(enter))) enter = j;
        if (bland) break;
      }
      if (enter < 0) return true;
      int leave = -1;
      Scalar best(0);
      for (int i = 0; i < m_; ++i) {
        if (!dead_.empty() && dead_[i]) continue;
        if (at(i, enter).sign() <= 0) continue;
        Scalar ratio = at(i, rhs()) / at(i, enter);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      degenerate_run = best.is_zero() ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(int r, int col) {
    const Scalar p = at(r, col);
    std::vector<int> nz;
    for (int j = 0; j <= rhs(); ++j) {
      if (at(r, j).is_zero()) continue;
      at(r, j) /= p;
      nz.push_back(j);
    }
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const Scalar f = at(i, col);
      if (f.is_zero()) continue;
      for (int j : nz) at(i, j) -= f * at(r, j);
    }
    basis_[r] = col;
  }

  int m_, n_, width_;
  std::vector<Scalar> tab_;
  std::vector<int> basis_;
  std::vector<std::int64_t> cost_;
  std::vector<bool> dead_;
};

}  // namespace ua
