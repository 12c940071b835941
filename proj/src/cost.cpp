#include "unfold_align/cost.hpp"

#include <cctype>

#include "unfold_align/error.hpp"

namespace ua {

Cost Cost::parse(std::string_view text) {
  auto fail = [&] {
    throw Error(Errc::Parse, "invalid cost '" + std::string(text) +
                                 "' (expected a decimal with at most 4 "
                                 "fractional digits)");
  };
  if (text.empty()) fail();
  std::int64_t whole = 0, frac = 0;
  std::size_t i = 0;
  bool digits = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    whole = whole * 10 + (text[i] - '0');
    if (whole > 1'000'000'000) fail();
    digits = true;
  }
  int frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      if (++frac_digits > 4) fail();
      frac = frac * 10 + (text[i] - '0');
      digits = true;
    }
  }
  if (!digits || i != text.size()) fail();
  for (; frac_digits < 4; ++frac_digits) frac *= 10;
  return Cost(whole * kTicksPerUnit + frac);
}

std::string Cost::to_string() const {
  if (is_infinite()) return "inf";
  std::int64_t t = ticks_;
  std::string sign;
  if (t < 0) {
    sign = "-";
    t = -t;
  }
  std::string out = sign + std::to_string(t / kTicksPerUnit);
  std::int64_t frac = t % kTicksPerUnit;
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(0, 4 - f.size(), '0');
    while (f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

}  // namespace ua
