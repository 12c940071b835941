#include "unfold_align/lp.hpp"

namespace ua {

namespace {

using i128 = __int128;

constexpr i128 kMax = INT64_MAX;
constexpr i128 kMin = INT64_MIN;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

[[noreturn]] void overflow() {
  throw Error(Errc::Overflow, "64-bit rational overflow");
}

}  // namespace

Rational64::Rational64(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error(Errc::Overflow, "zero denominator");
  *this = from_wide(n, d);
}

Rational64 Rational64::from_wide(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < kMin + 1 || d > kMax) overflow();
  Rational64 r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

std::int64_t Rational64::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rational64 Rational64::operator-() const {
  if (num_ == INT64_MIN) overflow();
  Rational64 r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational64 operator+(const Rational64& a, const Rational64& b) {
  if (a.den_ == 1 && b.den_ == 1) {
    std::int64_t s;
    if (__builtin_add_overflow(a.num_, b.num_, &s)) overflow();
    Rational64 r;
    r.num_ = s;
    return r;
  }
  // Same reduction scheme as boost::rational: the result is already in
  // lowest terms up to a common factor of the numerator and g.
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const i128 den = static_cast<i128>(a.den_ / g) * b.den_;
  const i128 num = static_cast<i128>(a.num_) * (b.den_ / g) +
                   static_cast<i128>(b.num_) * (a.den_ / g);
  return Rational64::from_wide(num, den);
}

Rational64 operator-(const Rational64& a, const Rational64& b) { return a + (-b); }

Rational64 operator*(const Rational64& a, const Rational64& b) {
  if (a.den_ == 1 && b.den_ == 1) {
    std::int64_t p;
    if (__builtin_mul_overflow(a.num_, b.num_, &p)) overflow();
    Rational64 r;
    r.num_ = p;
    return r;
  }
  return Rational64::from_wide(static_cast<i128>(a.num_) * b.num_,
                               static_cast<i128>(a.den_) * b.den_);
}

Rational64 operator/(const Rational64& a, const Rational64& b) {
  if (b.num_ == 0) throw Error(Errc::Overflow, "division by zero");
  return Rational64::from_wide(static_cast<i128>(a.num_) * b.den_,
                               static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational64& a, const Rational64& b) {
  const i128 l = static_cast<i128>(a.num_) * b.den_;
  const i128 r = static_cast<i128>(b.num_) * a.den_;
  return l <=> r;
}

std::ostream& operator<<(std::ostream& os, const Rational64& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

}  // namespace ua
