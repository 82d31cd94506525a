#include "dnb/amount.hpp"

#include <algorithm>

namespace dnb {

std::string Amount::to_string() const {
  if (value_ == 0) return "0";
  std::string out;
  value_type v = value_;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Amount Amount::parse(std::string_view decimal) {
  if (decimal.empty()) throw Error(errc::MalformedAmount, "empty");
  if (decimal.size() > 1 && decimal.front() == '0') {
    throw Error(errc::MalformedAmount, "leading zero in '" + std::string(decimal) + "'");
  }
  value_type v = 0;
  constexpr value_type kMax = ~value_type{0};
  for (char c : decimal) {
    if (c < '0' || c > '9') throw Error(errc::MalformedAmount, "'" + std::string(decimal) + "'");
    auto digit = static_cast<value_type>(c - '0');
    if (v > (kMax - digit) / 10) throw Error(errc::AmountOverflow, std::string(decimal));
    v = v * 10 + digit;
  }
  return Amount(v);
}

}  // namespace dnb
