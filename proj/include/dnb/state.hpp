#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnb/transaction.hpp"

namespace dnb {

enum class EventStatus { Active, Succeeded, Failed, Refunded };

std::string_view to_string(EventStatus s);

struct DonationEventState {
  Hash32 event_id;
  Address owner;
  std::string owner_name;
  std::string title;
  std::string description;
  Amount target;
  Timestamp deadline;
  Cid image;
  Amount pool;
  Amount total_donated;
  std::vector<Address> donors;  // first-donation order
  EventStatus status = EventStatus::Active;

  // Refunds scheduled by a failed finalization and not yet applied.
  std::vector<std::pair<Address, Amount>> refunds_due;
  Amount refunded;

  bool is_final() const { return status != EventStatus::Active; }

  friend bool operator==(const DonationEventState&, const DonationEventState&) = default;
};

struct DonationRecord {
  Hash32 event_id;
  Address donor;
  Amount amount;
  Timestamp timestamp;
  Hash32 tx_hash;

  friend bool operator==(const DonationRecord&, const DonationRecord&) = default;
};

/// Append-only record of every donation, indexed by donor and by event.
class TrackingLedger {
 public:
  void append(DonationRecord record);

  const std::vector<DonationRecord>& records() const { return records_; }
  std::span<const std::size_t> positions_for_donor(const Address& donor) const;
  std::span<const std::size_t> positions_for_event(const Hash32& event_id) const;

  std::size_t size() const { return records_.size(); }

  friend bool operator==(const TrackingLedger&, const TrackingLedger&) = default;

 private:
  std::vector<DonationRecord> records_;
  std::map<Address, std::vector<std::size_t>> by_donor_;
  std::map<Hash32, std::vector<std::size_t>> by_event_;
};

/// Everything derived by replaying the chain.
struct WorldState {
  std::map<Address, Amount> balances;
  std::map<Address, std::uint64_t> nonces;
  std::vector<DonationEventState> events;  // creation order
  std::map<Hash32, std::size_t> event_index;
  TrackingLedger tracking;

  Amount balance_of(const Address& a) const;
  std::uint64_t nonce_of(const Address& a) const;
  const DonationEventState* find_event(const Hash32& id) const;
  DonationEventState* find_event(const Hash32& id);

  void credit(const Address& a, Amount v);
  void debit(const Address& a, Amount v);

  // Sum over balances (fee sink included) and all event pools.
  Amount total_supply() const;

  /// Canonical byte serialization of the full state.
  Bytes snapshot() const;
  Hash32 snapshot_hash() const;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

}  // namespace dnb
