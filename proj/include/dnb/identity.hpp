#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dnb/ledger.hpp"

namespace dnb {

inline constexpr std::string_view kDefaultNetworkName = "dnb-local";
inline constexpr std::string_view kDidPrefix = "did:dnb:";
inline constexpr std::string_view kAuthDomain = "dnb-auth";
inline constexpr std::size_t kMinChallengeSize = 16;

struct KeyPair {
  crypto::SecretKey secret;
  PublicKey public_key;

  static KeyPair from_secret(const crypto::SecretKey& sk);
  // Seeded generation is reproducible; without a seed the OS RNG is used.
  static KeyPair generate(std::optional<std::uint64_t> seed = std::nullopt);
};

/// `did:dnb:<base32 of SHA-256(public key)>`.
class Did {
 public:
  static Did of(const PublicKey& pk);
  static Did parse(std::string_view text);  // throws MalformedDid

  const std::string& text() const { return text_; }
  const Hash32& digest() const { return digest_; }

  friend bool operator==(const Did&, const Did&) = default;

 private:
  std::string text_;
  Hash32 digest_;
};

/// Local key holder. Balances live on chain, never here.
struct Wallet {
  std::string name;
  KeyPair keys;
  Address address;
  Did did;
  std::string network_name;
};

Wallet new_wallet(std::string name, std::optional<std::uint64_t> seed = std::nullopt,
                  std::string network_name = std::string(kDefaultNetworkName));

struct WalletInfo {
  std::string address;
  Amount balance;
  std::string network_name;
};

WalletInfo wallet_info(const Wallet& wallet, const Chain& chain);

struct AuthResponse {
  PublicKey public_key;
  Bytes signature;
};

/// SHA-256("dnb-auth" || challenge); the domain tag keeps challenge
/// signatures from doubling as transaction signatures.
Hash32 auth_digest(ByteView challenge);

AuthResponse respond_to_challenge(const KeyPair& keys, ByteView challenge);

/// True iff the response key hashes to `did` and its signature covers
/// the domain-separated digest of `challenge`.
/// Throws MalformedDid, or InvalidChallenge for challenges under 16 bytes.
bool authenticate(std::string_view did, ByteView challenge, const AuthResponse& response);

void save_wallet(const Wallet& wallet, const std::filesystem::path& file);
Wallet load_wallet(const std::filesystem::path& file);

}  // namespace dnb
