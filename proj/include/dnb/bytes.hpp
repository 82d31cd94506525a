#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnb/error.hpp"

namespace dnb {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);
// Strict: lowercase only, even length.
Bytes from_hex(std::string_view hex);

// RFC 4648 alphabet, lowercase, no padding.
std::string base32_encode(ByteView bytes);
// Rejects uppercase, padding, and non-zero trailing bits.
Bytes base32_decode(std::string_view text);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Fixed-width byte string; the tag keeps hashes, addresses and keys apart.
template <std::size_t N, class Tag>
struct FixedBytes {
  static constexpr std::size_t size = N;
  std::array<std::uint8_t, N> bytes{};

  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return to_hex(view()); }
  bool is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
  }

  static FixedBytes from_view(ByteView v) {
    if (v.size() != N) {
      throw Error(errc::MalformedHex,
                  "expected " + std::to_string(N) + " bytes, got " + std::to_string(v.size()));
    }
    FixedBytes out;
    std::copy(v.begin(), v.end(), out.bytes.begin());
    return out;
  }
  static FixedBytes from_hex(std::string_view hex) {
    auto raw = dnb::from_hex(hex);
    return from_view(raw);
  }

  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

struct HashTag;
struct AddressTag;
struct PublicKeyTag;

using Hash32 = FixedBytes<32, HashTag>;
using Address = FixedBytes<20, AddressTag>;
// Scheme tag byte followed by the raw 32-byte Ed25519 key.
using PublicKey = FixedBytes<33, PublicKeyTag>;

/// Big-endian, length-prefixed serialization.
class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { be(v, 4); }
  void u64(std::uint64_t v) { be(v, 8); }
  void u128(unsigned __int128 v) {
    u64(static_cast<std::uint64_t>(v >> 64));
    u64(static_cast<std::uint64_t>(v));
  }
  void raw(ByteView v) { out_.insert(out_.end(), v.begin(), v.end()); }
  template <std::size_t N, class Tag>
  void fixed(const FixedBytes<N, Tag>& v) {
    raw(v.view());
  }
  // 4-byte length prefix; EncodingOverflow above 2^32 - 1 bytes.
  void blob(ByteView v);
  void text(std::string_view s) { blob(as_bytes(s)); }

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  void be(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  unsigned __int128 u128();
  ByteView raw(std::size_t n);
  template <class Fixed>
  Fixed fixed() {
    return Fixed::from_view(raw(Fixed::size));
  }
  Bytes blob();
  std::string text();

  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

bool is_valid_utf8(std::string_view s);

}  // namespace dnb
