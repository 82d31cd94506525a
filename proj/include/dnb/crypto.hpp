#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "dnb/bytes.hpp"

namespace dnb::crypto {

// Identifier recorded in the genesis block.
inline constexpr std::string_view kSchemeId = "ed25519-tagged";
inline constexpr std::uint8_t kEd25519Tag = 0xed;
inline constexpr std::size_t kSignatureSize = 64;

Hash32 sha256(ByteView data);

class Sha256 {
 public:
  Sha256();
  Sha256& update(ByteView data);
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Hash32 finish();

 private:
  alignas(64) std::array<std::uint8_t, 128> state_{};
};

/// 32-byte Ed25519 seed. Never written into chain data.
struct SecretKey {
  std::array<std::uint8_t, 32> seed{};
  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

PublicKey public_key_of(const SecretKey& sk);
SecretKey random_secret_key();

Bytes sign(const SecretKey& sk, ByteView message);
// False for wrong-length signatures, unknown scheme tags and invalid points.
bool verify(const PublicKey& pk, ByteView message, ByteView signature);

}  // namespace dnb::crypto
