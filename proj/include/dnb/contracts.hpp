#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dnb/state.hpp"

// DonationEvent (campaign escrow with target and deadline) and
// DonationTracking (public donation record) state machines.
//
// The mutating operations work in place on a WorldState the caller owns;
// the ledger runs them against a scratch copy and commits only whole
// blocks. Fee and nonce handling belong to the ledger, not here.
namespace dnb::contracts {

inline constexpr std::size_t kMaxTitleBytes = 256;
inline constexpr std::size_t kMaxDescriptionBytes = 64 * 1024;

/// Validates and registers a new Active campaign keyed by the tx hash.
/// Throws ZeroTarget, DeadlineInPast (deadline <= now), TitleInvalid,
/// DescriptionTooLong, DuplicateEventId.
Hash32 create_donation_event(WorldState& state, const Transaction& tx, Timestamp now);

/// Moves `amount` from the donor's balance into the event pool and
/// appends a tracking record. Requires `now < deadline`.
DonationRecord donate_to_event(WorldState& state, const Transaction& tx, Timestamp now);

/// Settles an Active event whose deadline has been reached.
///
/// Target met: the pool is paid to the owner and the event Succeeds.
/// Otherwise the event Fails and one refund per donor (that donor's total
/// principal) is scheduled; the returned system transactions must be
/// applied with apply_refund, after which the event is Refunded. A failed
/// event without donors is Refunded immediately.
std::vector<Transaction> finalize_event(WorldState& state, const Hash32& event_id, Timestamp now);

/// Applies the next scheduled refund of a Failed event. Throws
/// RefundMismatch unless `refund` is exactly that refund.
void apply_refund(WorldState& state, const Transaction& refund);

/// Active events with deadline <= now, in creation order.
std::vector<Hash32> due_events(const WorldState& state, Timestamp now);

std::vector<std::pair<Address, Amount>> get_donors(const WorldState& state, const Hash32& event_id);
const std::vector<DonationEventState>& get_donation_events(const WorldState& state);
std::vector<DonationRecord> get_donation_history(const WorldState& state, const Address& donor);

}  // namespace dnb::contracts
