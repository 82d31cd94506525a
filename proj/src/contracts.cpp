#include "dnb/contracts.hpp"

#include <algorithm>
#include <cassert>

namespace dnb::contracts {

namespace {

DonationEventState& require_event(WorldState& state, const Hash32& id) {
  auto* e = state.find_event(id);
  if (e == nullptr) throw Error(errc::UnknownEvent, id.hex());
  return *e;
}

}  // namespace

Hash32 create_donation_event(WorldState& state, const Transaction& tx, Timestamp now) {
  const auto& p = std::get<CreateEventPayload>(tx.payload);
  if (p.target.is_zero()) throw Error(errc::ZeroTarget);
  if (p.deadline <= now) {
    throw Error(errc::DeadlineInPast,
                "deadline " + std::to_string(p.deadline.ms) + " <= now " + std::to_string(now.ms));
  }
  if (p.title.empty() || p.title.size() > kMaxTitleBytes || !is_valid_utf8(p.title)) {
    throw Error(errc::TitleInvalid, std::to_string(p.title.size()) + " bytes");
  }
  if (p.description.size() > kMaxDescriptionBytes) {
    throw Error(errc::DescriptionTooLong, std::to_string(p.description.size()) + " bytes");
  }
  if (p.image.codec != Cid::kRawCodec) throw Error(errc::MalformedCid);
  if (state.event_index.contains(tx.tx_hash)) throw Error(errc::DuplicateEventId, tx.tx_hash.hex());

  DonationEventState e;
  e.event_id = tx.tx_hash;
  e.owner = p.owner;
  e.owner_name = p.owner_name;
  e.title = p.title;
  e.description = p.description;
  e.target = p.target;
  e.deadline = p.deadline;
  e.image = p.image;
  state.event_index.emplace(e.event_id, state.events.size());
  state.events.push_back(std::move(e));
  return tx.tx_hash;
}

DonationRecord donate_to_event(WorldState& state, const Transaction& tx, Timestamp now) {
  const auto& p = std::get<DonatePayload>(tx.payload);
  auto& e = require_event(state, p.event_id);
  if (e.status != EventStatus::Active) throw Error(errc::EventNotActive, std::string(to_string(e.status)));
  if (now >= e.deadline) throw Error(errc::DeadlinePassed);
  if (p.amount.is_zero()) throw Error(errc::ZeroAmount);

  auto donor = address_of(tx.sender_pk);
  if (state.balance_of(donor) < p.amount) throw Error(errc::InsufficientBalance, donor.hex());

  // Check both sums before touching anything.
  auto new_pool = e.pool + p.amount;
  auto new_total = e.total_donated + p.amount;
  state.debit(donor, p.amount);
  e.pool = new_pool;
  e.total_donated = new_total;
  if (std::find(e.donors.begin(), e.donors.end(), donor) == e.donors.end()) e.donors.push_back(donor);

  DonationRecord record{p.event_id, donor, p.amount, now, tx.tx_hash};
  state.tracking.append(record);
  return record;
}

std::vector<Transaction> finalize_event(WorldState& state, const Hash32& event_id, Timestamp now) {
  auto& e = require_event(state, event_id);
  if (e.is_final()) throw Error(errc::AlreadyFinal, std::string(to_string(e.status)));
  if (now < e.deadline) throw Error(errc::DeadlineNotReached);

  if (e.total_donated >= e.target) {
    state.credit(e.owner, e.pool);
    e.pool = Amount{};
    e.status = EventStatus::Succeeded;
    return {};
  }

  e.status = EventStatus::Failed;
  auto totals = get_donors(state, event_id);
  std::vector<Transaction> refunds;
  refunds.reserve(totals.size());
  for (const auto& [donor, amount] : totals) refunds.push_back(make_refund(event_id, donor, amount));
  e.refunds_due = std::move(totals);
  if (e.refunds_due.empty()) e.status = EventStatus::Refunded;
  return refunds;
}

void apply_refund(WorldState& state, const Transaction& refund) {
  const auto& p = std::get<RefundPayload>(refund.payload);
  auto& e = require_event(state, p.event_id);
  if (e.status != EventStatus::Failed || e.refunds_due.empty()) {
    throw Error(errc::RefundMismatch, "no refund due for event " + p.event_id.hex());
  }
  const auto& [who, amount] = e.refunds_due.front();
  if (who != p.recipient || amount != p.amount) {
    throw Error(errc::RefundMismatch, "refund does not match schedule");
  }
  e.pool = e.pool - amount;
  e.refunded = e.refunded + amount;
  state.credit(who, amount);
  e.refunds_due.erase(e.refunds_due.begin());
  if (e.refunds_due.empty()) {
    assert(e.pool.is_zero());
    e.status = EventStatus::Refunded;
  }
}

std::vector<Hash32> due_events(const WorldState& state, Timestamp now) {
  std::vector<Hash32> out;
  for (const auto& e : state.events) {
    if (e.status == EventStatus::Active && e.deadline <= now) out.push_back(e.event_id);
  }
  return out;
}

std::vector<std::pair<Address, Amount>> get_donors(const WorldState& state, const Hash32& event_id) {
  const auto* e = state.find_event(event_id);
  if (e == nullptr) throw Error(errc::UnknownEvent, event_id.hex());
  std::vector<std::pair<Address, Amount>> out;
  out.reserve(e->donors.size());
  for (const auto& d : e->donors) out.emplace_back(d, Amount{});
  const auto& records = state.tracking.records();
  for (auto pos : state.tracking.positions_for_event(event_id)) {
    const auto& r = records[pos];
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& entry) { return entry.first == r.donor; });
    assert(it != out.end());
    it->second = it->second + r.amount;
  }
  return out;
}

const std::vector<DonationEventState>& get_donation_events(const WorldState& state) { return state.events; }

std::vector<DonationRecord> get_donation_history(const WorldState& state, const Address& donor) {
  std::vector<DonationRecord> out;
  const auto& records = state.tracking.records();
  for (auto pos : state.tracking.positions_for_donor(donor)) out.push_back(records[pos]);
  return out;
}

}  // namespace dnb::contracts
