#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

#include "dnb/amount.hpp"
#include "dnb/bytes.hpp"
#include "dnb/content_store.hpp"
#include "dnb/crypto.hpp"

namespace dnb {

/// Virtual milliseconds since genesis.
struct Timestamp {
  std::uint64_t ms = 0;

  static constexpr Timestamp seconds(std::uint64_t s) { return Timestamp{s * 1000}; }
  constexpr Timestamp plus_ms(std::uint64_t d) const { return Timestamp{ms + d}; }

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

enum class TxKind : std::uint8_t { CreateEvent = 0x01, Donate = 0x02, Refund = 0x03 };

std::string_view to_string(TxKind kind);
TxKind parse_tx_kind(std::string_view name);

struct CreateEventPayload {
  Address owner;
  std::string owner_name;
  std::string title;
  std::string description;
  Amount target;
  Timestamp deadline;
  Cid image;
  friend bool operator==(const CreateEventPayload&, const CreateEventPayload&) = default;
};

struct DonatePayload {
  Hash32 event_id;
  Amount amount;
  friend bool operator==(const DonatePayload&, const DonatePayload&) = default;
};

struct RefundPayload {
  Hash32 event_id;
  Address recipient;
  Amount amount;
  friend bool operator==(const RefundPayload&, const RefundPayload&) = default;
};

using Payload = std::variant<CreateEventPayload, DonatePayload, RefundPayload>;

/// Signed ledger action.
///
/// `tx_hash = SHA-256(canonical_encode(tx) || signature)`. Refunds are
/// emitted by the chain itself: they carry the all-zero system key, an
/// empty signature, nonce 0 and fee 0.
struct Transaction {
  PublicKey sender_pk;
  std::uint64_t nonce = 0;
  Amount fee;
  Payload payload;
  Bytes signature;
  Hash32 tx_hash;

  TxKind kind() const { return static_cast<TxKind>(payload.index() + 1); }
  bool is_system() const { return kind() == TxKind::Refund; }

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Last 20 bytes of SHA-256(public key).
Address address_of(const PublicKey& pk);

// Reserved fee sink; no key hashes to it in practice.
inline const Address kFeeSink{};

/// Bit-exact signing preimage: kind tag, sender key, nonce (u64 BE),
/// fee (u128 BE), then payload fields in declared order. Text fields are
/// u32-BE length prefixed; fixed-width fields are raw.
Bytes canonical_encode(const Transaction& tx);

/// Inverse of canonical_encode. Signature and tx_hash are left empty.
Transaction canonical_decode(ByteView preimage);

Hash32 compute_tx_hash(const Transaction& tx);

Transaction sign_transaction(Transaction tx, const crypto::SecretKey& sk);
bool verify_transaction(const Transaction& tx);

Transaction make_refund(const Hash32& event_id, const Address& recipient, Amount amount);

}  // namespace dnb
