#include "dnb/state.hpp"

namespace dnb {

std::string_view to_string(EventStatus s) {
  switch (s) {
    case EventStatus::Active: return "Active";
    case EventStatus::Succeeded: return "Succeeded";
    case EventStatus::Failed: return "Failed";
    case EventStatus::Refunded: return "Refunded";
  }
  return "Unknown";
}

void TrackingLedger::append(DonationRecord record) {
  auto pos = records_.size();
  by_donor_[record.donor].push_back(pos);
  by_event_[record.event_id].push_back(pos);
  records_.push_back(std::move(record));
}

std::span<const std::size_t> TrackingLedger::positions_for_donor(const Address& donor) const {
  auto it = by_donor_.find(donor);
  if (it == by_donor_.end()) return {};
  return it->second;
}

std::span<const std::size_t> TrackingLedger::positions_for_event(const Hash32& event_id) const {
  auto it = by_event_.find(event_id);
  if (it == by_event_.end()) return {};
  return it->second;
}

Amount WorldState::balance_of(const Address& a) const {
  auto it = balances.find(a);
  return it == balances.end() ? Amount{} : it->second;
}

std::uint64_t WorldState::nonce_of(const Address& a) const {
  auto it = nonces.find(a);
  return it == nonces.end() ? 0 : it->second;
}

const DonationEventState* WorldState::find_event(const Hash32& id) const {
  auto it = event_index.find(id);
  return it == event_index.end() ? nullptr : &events[it->second];
}

DonationEventState* WorldState::find_event(const Hash32& id) {
  auto it = event_index.find(id);
  return it == event_index.end() ? nullptr : &events[it->second];
}

void WorldState::credit(const Address& a, Amount v) {
  auto& slot = balances[a];
  slot = slot + v;
}

void WorldState::debit(const Address& a, Amount v) {
  auto it = balances.find(a);
  if (it == balances.end()) {
    if (v.is_zero()) return;
    throw Error(errc::InsufficientBalance, a.hex());
  }
  it->second = it->second - v;
}

Amount WorldState::total_supply() const {
  Amount sum;
  for (const auto& [_, v] : balances) sum += v;
  for (const auto& e : events) sum += e.pool;
  return sum;
}

Bytes WorldState::snapshot() const {
  Writer w;
  w.u64(balances.size());
  for (const auto& [a, v] : balances) {
    w.fixed(a);
    w.u128(v.value());
  }
  w.u64(nonces.size());
  for (const auto& [a, n] : nonces) {
    w.fixed(a);
    w.u64(n);
  }
  w.u64(events.size());
  for (const auto& e : events) {
    w.fixed(e.event_id);
    w.fixed(e.owner);
    w.text(e.owner_name);
    w.text(e.title);
    w.text(e.description);
    w.u128(e.target.value());
    w.u64(e.deadline.ms);
    w.raw(e.image.binary());
    w.u128(e.pool.value());
    w.u128(e.total_donated.value());
    w.u64(e.donors.size());
    for (const auto& d : e.donors) w.fixed(d);
    w.u8(static_cast<std::uint8_t>(e.status));
    w.u64(e.refunds_due.size());
    for (const auto& [who, amt] : e.refunds_due) {
      w.fixed(who);
      w.u128(amt.value());
    }
    w.u128(e.refunded.value());
  }
  w.u64(tracking.size());
  for (const auto& r : tracking.records()) {
    w.fixed(r.event_id);
    w.fixed(r.donor);
    w.u128(r.amount.value());
    w.u64(r.timestamp.ms);
    w.fixed(r.tx_hash);
  }
  return std::move(w).take();
}

Hash32 WorldState::snapshot_hash() const { return crypto::sha256(snapshot()); }

}  // namespace dnb
