#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "dnb/error.hpp"

namespace dnb {

/// Token amount in the smallest unit (10^18 units = 1 token).
///
/// All arithmetic is checked: overflow raises AmountOverflow and a
/// subtraction below zero raises InsufficientBalance.
class Amount {
 public:
  using value_type = unsigned __int128;

  constexpr Amount() = default;
  constexpr explicit Amount(value_type v) : value_(v) {}

  static constexpr Amount tokens(std::uint64_t whole) {
    return Amount(static_cast<value_type>(whole) * kUnitsPerToken);
  }

  constexpr value_type value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  Amount checked_add(Amount other) const {
    value_type r = value_ + other.value_;
    if (r < value_) throw Error(errc::AmountOverflow);
    return Amount(r);
  }
  Amount checked_sub(Amount other) const {
    if (other.value_ > value_) throw Error(errc::InsufficientBalance);
    return Amount(value_ - other.value_);
  }
  Amount& operator+=(Amount other) { return *this = checked_add(other); }
  Amount& operator-=(Amount other) { return *this = checked_sub(other); }
  friend Amount operator+(Amount a, Amount b) { return a.checked_add(b); }
  friend Amount operator-(Amount a, Amount b) { return a.checked_sub(b); }

  friend constexpr auto operator<=>(Amount, Amount) = default;

  // Decimal, no sign, no leading zeros (except "0").
  std::string to_string() const;
  static Amount parse(std::string_view decimal);

  static constexpr value_type kUnitsPerToken = 1'000'000'000'000'000'000ull;

 private:
  value_type value_ = 0;
};

}  // namespace dnb
